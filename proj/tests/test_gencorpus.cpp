#include <doctest.h>

#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "support.hpp"
#include "textbends/errors.hpp"

using namespace textbends;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string jsonl_of(const Corpus& c) {
    std::ostringstream out;
    write_jsonl(c, out);
    return out.str();
}

}  // namespace

TEST_CASE("document count follows the scale factor") {
    const auto g = generate(tbtest::small_config(0.001));
    CHECK(g.corpus.document_count() == 1000);
    CHECK(g.manifest.document_count == 1000);
    CHECK(g.manifest.sf == 0.001);
    CHECK(g.manifest.seed == 42);
    CHECK(g.manifest.vocabulary_size == g.corpus.vocabulary_size());
    CHECK(g.corpus.vocabulary_size() <= 5000 + 3);
    CHECK(g.manifest.checksum == corpus_checksum(g.corpus));

    const auto g2 = generate(tbtest::small_config(0.002));
    CHECK(g2.corpus.document_count() == 2 * g.corpus.document_count());
}

TEST_CASE("generation is a pure function of the configuration") {
    const auto a = generate(tbtest::small_config(0.0005, 7));
    const auto b = generate(tbtest::small_config(0.0005, 7));
    const auto c = generate(tbtest::small_config(0.0005, 8));
    CHECK(a.manifest == b.manifest);
    CHECK(jsonl_of(a.corpus) == jsonl_of(b.corpus));
    CHECK(a.manifest.checksum != c.manifest.checksum);
}

TEST_CASE("generator balances gender, day and quadrant") {
    for (double sf : {0.001, 0.002}) {
        CAPTURE(sf);
        const auto g = generate(tbtest::small_config(sf, 3));
        const auto& c = g.corpus;
        const auto cfg = tbtest::small_config(sf, 3);
        std::array<std::size_t, 2> gender{};
        std::array<std::size_t, 4> quadrant{};
        std::map<std::int64_t, std::size_t> day;
        const double x_mid = (cfg.x_min + cfg.x_max) / 2, y_mid = (cfg.y_min + cfg.y_max) / 2;
        for (DocIndex d = 0; d < c.document_count(); ++d) {
            ++gender[static_cast<int>(c.author_of(d).gender)];
            const auto& loc = c.location_of(d);
            CHECK(loc.x >= cfg.x_min);
            CHECK(loc.x <= cfg.x_max);
            CHECK(loc.y >= cfg.y_min);
            CHECK(loc.y <= cfg.y_max);
            ++quadrant[(loc.x >= x_mid ? 1 : 0) + (loc.y >= y_mid ? 2 : 0)];
            const auto ts = c.time_of(d).full_date;
            CHECK(ts >= cfg.start_ts);
            CHECK(ts < cfg.end_ts);
            ++day[(ts - cfg.start_ts) / 86400];
        }
        const auto n = c.document_count();
        CHECK(gender[0] == n / 2);
        CHECK(gender[1] == n - n / 2);
        for (auto q : quadrant) CHECK(q == n / 4);
        CHECK(day.size() == 7);
        for (const auto& [k, v] : day) {
            CHECK(v >= n / 7);
            CHECK(v <= n / 7 + 1);
        }
    }
}

TEST_CASE("guaranteed terms reach their planted share") {
    const auto cfg = tbtest::small_config(0.001);
    const auto g = generate(cfg);
    const auto& c = g.corpus;
    for (const auto& term : cfg.guaranteed_terms) {
        CAPTURE(term);
        const auto w = c.find_word(term);
        REQUIRE(w.has_value());
        std::size_t docs = 0;
        for (const auto& f : c.facts())
            if (f.word == *w) ++docs;
        CHECK(docs >= static_cast<std::size_t>(std::ceil(cfg.guaranteed_term_rate * 1000)));
    }
}

TEST_CASE("invalid generator configurations") {
    auto cfg = tbtest::small_config(0.0);
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = tbtest::small_config(-1.0);
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = tbtest::small_config(0.001);
    cfg.max_tokens = 1;
    cfg.min_tokens = 2;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
}

TEST_CASE("generator configuration and manifest serialize losslessly") {
    auto cfg = tbtest::small_config(0.0123, 99);
    cfg.guaranteed_terms = {"x", "y"};
    cfg.author_pool = 17;
    CHECK(generator_config_from_json(generator_config_to_json(cfg)) == cfg);

    const auto g = generate(tbtest::small_config(0.0002));
    CHECK(manifest_from_json(manifest_to_json(g.manifest)) == g.manifest);
}

TEST_CASE("ingest recomputes counts and tf from lemma_text") {
    std::istringstream in(
        R"({"doc_id":5,"raw_text":"A b a","clean_text":"a b a","lemma_text":"a b a",)"
        R"("author":{"gender":"female","age":40},"time":{"date":"2015-09-17 10:00:00"},)"
        R"("location":{"x":1.5,"y":-2},"tags":["#fri"],"words":[{"lemma":"a","f":9,"tf":0.1}]})"
        "\n");
    const auto c = ingest_jsonl(in);
    REQUIRE(c.document_count() == 1);
    const auto a = *c.find_word("a");
    const auto b = *c.find_word("b");
    const auto facts = c.facts_of(0);
    REQUIRE(facts.size() == 2);
    CHECK(facts[a].count == 2);
    CHECK(facts[a].tf == 1.0);
    CHECK(facts[b].count == 1);
    CHECK(facts[b].tf == 0.75);
    CHECK(c.tables().tags.at(0).kind == TagKind::hashtag);
    CHECK(c.author_of(0).gender == Gender::female);
}

TEST_CASE("ingest names the line and field of a missing value") {
    std::istringstream in(
        R"({"doc_id":1,"lemma_text":"a","author":{"gender":"male"},"time":{"date":"2015-09-17"},"location":{"x":0,"y":0}})"
        "\n"
        R"({"doc_id":2,"lemma_text":"a","author":{},"time":{"date":"2015-09-17"},"location":{"x":0,"y":0}})"
        "\n");
    try {
        ingest_jsonl(in);
        FAIL("expected IntegrityError");
    } catch (const IntegrityError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("author.gender") != std::string::npos);
    }
}

TEST_CASE("whitespace_lower tokenizer folds case") {
    std::istringstream in(
        R"({"doc_id":1,"lemma_text":"Think  THINK","author":{"gender":"male"},"time":{"date":"2015-09-17"},"location":{"x":0,"y":0}})");
    const auto c = ingest_jsonl(in, TokenizerMode::whitespace_lower);
    REQUIRE(c.vocabulary_size() == 1);
    CHECK(c.lemma(0) == "think");
    CHECK(c.facts_of(0)[0].count == 2);
}

TEST_CASE("jsonl write and ingest round-trip") {
    const auto g = generate(tbtest::small_config(0.0003, 12));
    std::istringstream in(jsonl_of(g.corpus));
    const auto back = ingest_jsonl(in);
    CHECK(back == g.corpus);
    CHECK(corpus_checksum(back) == g.manifest.checksum);
}

TEST_CASE("empty corpus exports nine header-only files") {
    tbtest::TempDir dir("empty_export");
    const Corpus empty = std::move(CorpusBuilder{}).build();
    export_snowflake(empty, dir.path);
    REQUIRE(snowflake_files().size() == 9);
    for (const auto& name : snowflake_files()) {
        CAPTURE(name);
        const auto text = slurp(dir.path / name);
        REQUIRE_FALSE(text.empty());
        CHECK(text.find("\r\n") == text.size() - 2);
    }
    CHECK(import_snowflake(dir.path) == empty);
}

TEST_CASE("snowflake export and import round-trip") {
    tbtest::TempDir dir("roundtrip");
    auto cfg = tbtest::small_config(0.0004, 21);
    const auto g = generate(cfg);
    export_snowflake(g.corpus, dir.path);
    const auto back = import_snowflake(dir.path);
    CHECK(back == g.corpus);

    CorpusBuilder b;
    auto d = tbtest::doc(9, "q \"quoted\" r");
    d.raw_text = "line one,\nline \"two\"";
    d.tags = {{"#a,b", TagKind::hashtag}};
    d.entities = {{"Paris", EntityKind::location}};
    b.add(d);
    const auto odd = std::move(b).build();
    tbtest::TempDir dir2("quoting");
    export_snowflake(odd, dir2.path);
    CHECK(import_snowflake(dir2.path) == odd);
}

TEST_CASE("snowflake import detects dangling references") {
    tbtest::TempDir dir("dangling");
    export_snowflake(tbtest::hand_corpus(), dir.path);
    const auto path = dir.path / "document_facts.csv";
    auto text = slurp(path);
    text += "0,42,1,1\r\n";
    std::ofstream(path, std::ios::binary) << text;
    CHECK_THROWS_AS(import_snowflake(dir.path), IntegrityError);
}
