#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "digest.hpp"
#include "textbends/errors.hpp"
#include "textbends/gencorpus.hpp"
#include "textbends/timeutil.hpp"

namespace textbends {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<TokenizerMode> parse_tokenizer_mode(std::string_view s) {
    if (s == "pretokenized") return TokenizerMode::pretokenized;
    if (s == "whitespace_lower") return TokenizerMode::whitespace_lower;
    return std::nullopt;
}

std::string to_jsonl_line(const NestedDocument& d) {
    ordered_json j;
    j["doc_id"] = d.doc_id;
    j["raw_text"] = d.raw_text;
    j["clean_text"] = d.clean_text;
    j["lemma_text"] = d.lemma_text;
    j["author"] = {{"gender", to_string(d.author.gender)},
                   {"age", d.author.age},
                   {"firstname", d.author.firstname},
                   {"lastname", d.author.lastname}};
    j["time"] = {{"date", format_iso8601(d.time.full_date)}};
    j["location"] = {{"x", d.location.x}, {"y", d.location.y}};
    j["tags"] = ordered_json::array();
    for (const auto& t : d.tags) j["tags"].push_back({{"label", t.label}, {"kind", to_string(t.kind)}});
    j["named_entities"] = ordered_json::array();
    for (const auto& e : d.entities)
        j["named_entities"].push_back({{"label", e.label}, {"kind", to_string(e.kind)}});
    j["words"] = ordered_json::array();
    for (const auto& w : d.words) j["words"].push_back({{"lemma", w.lemma}, {"f", w.count}, {"tf", w.tf}});
    return j.dump();
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const auto& n : to_nested(corpus)) out << to_jsonl_line(n) << '\n';
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_jsonl(corpus, out);
    if (!out) throw IoError("failed writing " + path.string());
}

std::string corpus_checksum(const Corpus& corpus) {
    detail::Sha256 h;
    for (const auto& n : to_nested(corpus)) {
        h.update(to_jsonl_line(n));
        h.update("\n");
    }
    return h.hex_digest();
}

CorpusManifest make_manifest(const Corpus& corpus, double sf, std::uint64_t seed) {
    return CorpusManifest{sf, seed, corpus.document_count(), corpus.vocabulary_size(), corpus_checksum(corpus)};
}

namespace {

class RecordReader {
  public:
    RecordReader(const json& j, std::size_t line) : j_(j), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw IntegrityError("line " + std::to_string(line_) + ": " + what);
    }

    const json& require(const json& obj, const char* key, const std::string& path) const {
        if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null())
            fail("missing required field '" + path + "'");
        return obj.at(key);
    }

    template <typename T>
    T get(const json& v, const std::string& path) const {
        try {
            return v.get<T>();
        } catch (const json::exception&) {
            fail("field '" + path + "' has the wrong type");
        }
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) fail("field '" + path + "' must be a number");
        return v.get<double>();
    }

  private:
    const json& j_;
    std::size_t line_;
};

DocumentInput parse_record(const std::string& text, std::size_t line, TokenizerMode mode) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IntegrityError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    RecordReader r(j, line);
    if (!j.is_object()) r.fail("record is not a JSON object");

    DocumentInput in;
    const auto& id = r.require(j, "doc_id", "doc_id");
    if (!id.is_number_unsigned()) r.fail("field 'doc_id' must be a non-negative integer");
    in.doc_id = id.get<std::uint64_t>();
    if (j.contains("raw_text")) in.raw_text = r.get<std::string>(j["raw_text"], "raw_text");
    if (j.contains("clean_text")) in.clean_text = r.get<std::string>(j["clean_text"], "clean_text");
    auto lemma_text = r.get<std::string>(r.require(j, "lemma_text", "lemma_text"), "lemma_text");
    if (mode == TokenizerMode::whitespace_lower)
        for (auto& c : lemma_text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto tok : split_tokens(lemma_text)) in.tokens.emplace_back(tok);

    const auto& author = r.require(j, "author", "author");
    const auto gender_text = r.get<std::string>(r.require(author, "gender", "author.gender"), "author.gender");
    const auto gender = parse_gender(gender_text);
    if (!gender) r.fail("field 'author.gender' must be 'male' or 'female'");
    in.gender = *gender;
    if (author.contains("age")) in.age = r.get<std::uint32_t>(author["age"], "author.age");
    if (author.contains("firstname")) in.firstname = r.get<std::string>(author["firstname"], "author.firstname");
    if (author.contains("lastname")) in.lastname = r.get<std::string>(author["lastname"], "author.lastname");

    const auto& time = r.require(j, "time", "time");
    const auto date = parse_iso8601(r.get<std::string>(r.require(time, "date", "time.date"), "time.date"));
    if (!date) r.fail("field 'time.date' is not an ISO-8601 timestamp");
    in.timestamp = *date;

    const auto& loc = r.require(j, "location", "location");
    in.x = r.number(r.require(loc, "x", "location.x"), "location.x");
    in.y = r.number(r.require(loc, "y", "location.y"), "location.y");

    if (j.contains("tags")) {
        if (!j["tags"].is_array()) r.fail("field 'tags' must be an array");
        for (const auto& t : j["tags"]) {
            if (t.is_string()) {
                auto label = t.get<std::string>();
                TagKind kind = TagKind::label;
                if (!label.empty() && label[0] == '#') kind = TagKind::hashtag;
                if (!label.empty() && label[0] == '@') kind = TagKind::mention;
                in.tags.emplace_back(std::move(label), kind);
                continue;
            }
            auto label = r.get<std::string>(r.require(t, "label", "tags.label"), "tags.label");
            auto kind = parse_tag_kind(r.get<std::string>(r.require(t, "kind", "tags.kind"), "tags.kind"));
            if (!kind) r.fail("field 'tags.kind' is not hashtag, mention or label");
            in.tags.emplace_back(std::move(label), *kind);
        }
    }
    if (j.contains("named_entities")) {
        if (!j["named_entities"].is_array()) r.fail("field 'named_entities' must be an array");
        for (const auto& e : j["named_entities"]) {
            auto label = r.get<std::string>(r.require(e, "label", "named_entities.label"), "named_entities.label");
            auto kind = parse_entity_kind(
                r.get<std::string>(r.require(e, "kind", "named_entities.kind"), "named_entities.kind"));
            if (!kind) r.fail("field 'named_entities.kind' is not a known entity kind");
            in.entities.emplace_back(std::move(label), *kind);
        }
    }
    return in;
}

}  // namespace

Corpus ingest_jsonl(std::istream& in, TokenizerMode mode, double tf_floor) {
    CorpusBuilder builder(tf_floor);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto record = parse_record(line, line_no, mode);
        try {
            builder.add(std::move(record));
        } catch (const IntegrityError& e) {
            throw IntegrityError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return std::move(builder).build();
}

Corpus ingest_jsonl(const std::filesystem::path& path, TokenizerMode mode, double tf_floor) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return ingest_jsonl(in, mode, tf_floor);
}

std::string manifest_to_json(const CorpusManifest& m) {
    ordered_json j;
    j["sf"] = m.sf;
    j["seed"] = m.seed;
    j["document_count"] = m.document_count;
    j["vocabulary_size"] = m.vocabulary_size;
    j["checksum"] = m.checksum;
    return j.dump(2);
}

CorpusManifest manifest_from_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        CorpusManifest m;
        m.sf = j.at("sf").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.document_count = j.at("document_count").get<std::uint64_t>();
        m.vocabulary_size = j.at("vocabulary_size").get<std::uint64_t>();
        m.checksum = j.at("checksum").get<std::string>();
        return m;
    } catch (const json::exception& e) {
        throw IntegrityError(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest(const CorpusManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << manifest_to_json(m) << '\n';
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return manifest_from_json(ss.str());
}

std::string generator_config_to_json(const GeneratorConfig& c) {
    ordered_json j;
    j["sf"] = c.sf;
    j["docs_per_unit_sf"] = c.docs_per_unit_sf;
    j["seed"] = c.seed;
    j["vocab_size"] = c.vocab_size;
    j["min_tokens"] = c.min_tokens;
    j["max_tokens"] = c.max_tokens;
    j["start_ts"] = format_iso8601(c.start_ts);
    j["end_ts"] = format_iso8601(c.end_ts);
    j["x_min"] = c.x_min;
    j["x_max"] = c.x_max;
    j["y_min"] = c.y_min;
    j["y_max"] = c.y_max;
    j["zipf_exponent"] = c.zipf_exponent;
    j["guaranteed_terms"] = c.guaranteed_terms;
    j["guaranteed_term_rate"] = c.guaranteed_term_rate;
    j["author_pool"] = c.author_pool;
    j["tf_floor"] = c.tf_floor;
    return j.dump();
}

GeneratorConfig generator_config_from_json(std::string_view text) {
    GeneratorConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed generator config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("generator config must be a JSON object");
    auto read = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(field);
        } catch (const json::exception&) {
            throw ConfigError(std::string("generator config field '") + key + "' has the wrong type");
        }
    };
    auto read_time = [&](const char* key, std::int64_t& field) {
        if (!j.contains(key)) return;
        if (j[key].is_number_integer()) {
            field = j[key].get<std::int64_t>();
            return;
        }
        const auto t = j[key].is_string() ? parse_iso8601(j[key].get<std::string>()) : std::nullopt;
        if (!t) throw ConfigError(std::string("generator config field '") + key + "' is not a timestamp");
        field = *t;
    };
    read("sf", c.sf);
    read("docs_per_unit_sf", c.docs_per_unit_sf);
    read("seed", c.seed);
    read("vocab_size", c.vocab_size);
    read("min_tokens", c.min_tokens);
    read("max_tokens", c.max_tokens);
    read_time("start_ts", c.start_ts);
    read_time("end_ts", c.end_ts);
    read("x_min", c.x_min);
    read("x_max", c.x_max);
    read("y_min", c.y_min);
    read("y_max", c.y_max);
    read("zipf_exponent", c.zipf_exponent);
    read("guaranteed_terms", c.guaranteed_terms);
    read("guaranteed_term_rate", c.guaranteed_term_rate);
    read("author_pool", c.author_pool);
    read("tf_floor", c.tf_floor);
    return c;
}

}  // namespace textbends
