#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "textbends/textbends.h"

namespace fs = std::filesystem;

namespace {

struct Dir {
    fs::path path;
    Dir() {
        path = fs::temp_directory_path() / ("textbends_capi_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~Dir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string take(char* s) {
    std::string out = s ? s : "";
    tb_string_free(s);
    return out;
}

int count_prefix(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
    return n;
}

const char* kSmall = R"({"sf":0.0005,"seed":3})";

}  // namespace

TEST_CASE("generate, save and reload through the C interface") {
    Dir dir;
    tb_corpus* c = nullptr;
    REQUIRE(tb_corpus_generate(kSmall, &c) == TB_OK);
    CHECK(tb_corpus_document_count(c) == 500);
    char* m = nullptr;
    REQUIRE(tb_corpus_manifest_json(c, &m) == TB_OK);
    const auto manifest = take(m);
    CHECK(manifest.find("\"document_count\": 500") != std::string::npos);

    const auto path = (dir.path / "corpus.jsonl").string();
    REQUIRE(tb_corpus_save_jsonl(c, path.c_str()) == TB_OK);
    CHECK(fs::exists(dir.path / "corpus.manifest.json"));

    tb_corpus* back = nullptr;
    REQUIRE(tb_corpus_load_jsonl(path.c_str(), nullptr, 0.5, &back) == TB_OK);
    REQUIRE(tb_corpus_manifest_json(back, &m) == TB_OK);
    CHECK(take(m) == manifest);

    const auto snow = (dir.path / "snow").string();
    REQUIRE(tb_corpus_export_snowflake(c, snow.c_str()) == TB_OK);
    tb_corpus* from_snow = nullptr;
    REQUIRE(tb_corpus_load_snowflake(snow.c_str(), 0.5, 1, &from_snow) == TB_OK);
    CHECK(tb_corpus_document_count(from_snow) == 500);

    tb_corpus_free(from_snow);
    tb_corpus_free(back);
    tb_corpus_free(c);
}

TEST_CASE("a manifest that does not match the corpus is rejected") {
    Dir dir;
    tb_corpus* c = nullptr;
    REQUIRE(tb_corpus_generate(kSmall, &c) == TB_OK);
    const auto path = (dir.path / "corpus.jsonl").string();
    REQUIRE(tb_corpus_save_jsonl(c, path.c_str()) == TB_OK);
    tb_corpus_free(c);
    std::ofstream(path, std::ios::app) << R"({"doc_id":999999,"lemma_text":"x","author":{"gender":"male"},)"
                                       << R"("time":{"date":"2015-09-17"},"location":{"x":0,"y":0}})" << '\n';
    tb_corpus* back = nullptr;
    CHECK(tb_corpus_load_jsonl(path.c_str(), nullptr, 0.5, &back) == TB_ERR_DATA);
    CHECK(std::string(tb_last_error()).find("checksum") != std::string::npos);
}

TEST_CASE("status codes") {
    tb_corpus* c = nullptr;
    CHECK(tb_corpus_generate(R"({"sf":0})", &c) == TB_ERR_USAGE);
    CHECK(std::string(tb_last_error()).find("scale factor") != std::string::npos);
    CHECK(tb_corpus_generate("{not json", &c) == TB_ERR_USAGE);
    CHECK(tb_corpus_load_jsonl("/nonexistent/corpus.jsonl", nullptr, 0.5, &c) == TB_ERR_DATA);
    CHECK(c == nullptr);
    REQUIRE(tb_corpus_generate(kSmall, &c) == TB_OK);
    CHECK(std::string(tb_last_error()).empty());
    tb_report* r = nullptr;
    CHECK(tb_run(c, nullptr, R"({"engines":["oracle"]})", &r) == TB_ERR_USAGE);
    CHECK(tb_run(c, nullptr, R"({"warm_runs":0})", &r) == TB_ERR_USAGE);
    CHECK(tb_run(c, R"({"pGender":"male"})", nullptr, &r) == TB_ERR_USAGE);  // pStartDate missing
    CHECK(r == nullptr);
    tb_corpus_free(c);
}

TEST_CASE("run and report") {
    Dir dir;
    tb_corpus* c = nullptr;
    REQUIRE(tb_corpus_generate(kSmall, &c) == TB_OK);
    tb_report* r = nullptr;
    REQUIRE(tb_run(c, nullptr, R"({"warm_runs":1})", &r) == TB_OK);
    CHECK(tb_report_result_count(r) == 64);
    CHECK(tb_report_divergence_count(r) == 0);
    CHECK(tb_report_nondeterministic(r) == 0);

    char* sums = nullptr;
    REQUIRE(tb_report_checksums(r, &sums) == TB_OK);
    CHECK(count_prefix(take(sums), "Q") == 64);

    char* csv = nullptr;
    REQUIRE(tb_report_render(r, "csv", &csv) == TB_OK);
    CHECK(count_prefix(take(csv), "Q") == 64);
    CHECK(tb_report_render(r, "yaml", &csv) == TB_ERR_USAGE);

    const auto path = (dir.path / "report.json").string();
    REQUIRE(tb_report_write(r, "json", path.c_str()) == TB_OK);
    tb_report* loaded = nullptr;
    REQUIRE(tb_report_load(path.c_str(), &loaded) == TB_OK);
    CHECK(tb_report_result_count(loaded) == 64);

    tb_report_free(loaded);
    tb_report_free(r);
    tb_corpus_free(c);
}

TEST_CASE("verify passes on a clean corpus and names failing specs on a corrupted one") {
    Dir dir;
    tb_corpus* c = nullptr;
    REQUIRE(tb_corpus_generate(kSmall, &c) == TB_OK);
    char* out = nullptr;
    REQUIRE(tb_verify(c, nullptr, 10000, &out) == TB_OK);
    const auto lines = take(out);
    CHECK(count_prefix(lines, "PASS ") == 32);
    CHECK(tb_verify(c, nullptr, 10, &out) == TB_ERR_USAGE);

    const auto snow = dir.path / "snow";
    REQUIRE(tb_corpus_export_snowflake(c, snow.string().c_str()) == TB_OK);
    tb_corpus_free(c);

    // Overwrite the whole tf column.
    const auto facts = snow / "document_facts.csv";
    std::ifstream in(facts, std::ios::binary);
    std::string line, text;
    std::getline(in, line);
    text = line + "\n";
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        text += line.substr(0, line.rfind(',') + 1) + "0.123\r\n";
    }
    in.close();
    std::ofstream(facts, std::ios::binary) << text;

    tb_corpus* bad = nullptr;
    CHECK(tb_corpus_load_snowflake(snow.string().c_str(), 0.5, 1, &bad) == TB_ERR_DATA);
    REQUIRE(tb_corpus_load_snowflake(snow.string().c_str(), 0.5, 0, &bad) == TB_OK);
    CHECK(tb_verify(bad, nullptr, 10000, &out) == TB_ERR_NONDETERMINISM);
    const auto report = take(out);
    CHECK(count_prefix(report, "FAIL Q") > 0);
    CHECK(report.find("vs oracle") != std::string::npos);
    tb_corpus_free(bad);
}

TEST_CASE("verify on an empty corpus passes vacuously") {
    Dir dir;
    const auto path = (dir.path / "empty.jsonl").string();
    std::ofstream(path).close();
    tb_corpus* c = nullptr;
    REQUIRE(tb_corpus_load_jsonl(path.c_str(), nullptr, 0.5, &c) == TB_OK);
    char* out = nullptr;
    REQUIRE(tb_verify(c, nullptr, 10000, &out) == TB_OK);
    CHECK(count_prefix(take(out), "PASS ") == 32);
    tb_corpus_free(c);
}

TEST_CASE("sweep") {
    tb_report* r = nullptr;
    REQUIRE(tb_sweep(R"({"seed":1})", nullptr, R"({"sf_list":[0.0001,0.0002],"warm_runs":1,"schemes":["tfidf"]})",
                     &r) == TB_OK);
    CHECK(tb_report_result_count(r) == 2 * 16 * 2);
    tb_report_free(r);
}
