#include <fstream>
#include <functional>

#include "csv.hpp"
#include "textbends/errors.hpp"
#include "textbends/gencorpus.hpp"
#include "textbends/timeutil.hpp"

namespace textbends {

namespace fs = std::filesystem;
using detail::format_double;
using detail::read_csv_row;
using detail::write_csv_row;

const std::vector<std::string>& snowflake_files() {
    static const std::vector<std::string> files{
        "document_facts.csv", "document_dim.csv", "word_dim.csv",         "time_dim.csv",       "author_dim.csv",
        "location_dim.csv",   "tag_dim.csv",      "named_entity_dim.csv", "document_bridge.csv"};
    return files;
}

namespace {

const std::vector<std::string> kFactsHeader{"doc_index", "word_id", "f_td", "tf"};
const std::vector<std::string> kDocHeader{"doc_index", "doc_id",    "raw_text", "clean_text",
                                          "lemma_text", "author_id", "time_id",  "location_id"};
const std::vector<std::string> kWordHeader{"word_id", "lemma"};
const std::vector<std::string> kTimeHeader{"time_id", "full_date", "minute", "hour", "day", "month", "year"};
const std::vector<std::string> kAuthorHeader{"author_id", "gender", "age", "firstname", "lastname"};
const std::vector<std::string> kLocationHeader{"location_id", "x", "y"};
const std::vector<std::string> kTagHeader{"tag_id", "label", "kind"};
const std::vector<std::string> kEntityHeader{"entity_id", "label", "kind"};
const std::vector<std::string> kBridgeHeader{"doc_index", "dimension", "ref_id"};

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

template <typename T>
std::string num(T v) {
    return std::to_string(v);
}

}  // namespace

void export_snowflake(const Corpus& corpus, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    const auto& t = corpus.tables();
    const auto& names = snowflake_files();

    auto facts = open_out(dir / names[0]);
    write_csv_row(facts, kFactsHeader);
    for (const auto& f : t.facts) write_csv_row(facts, {num(f.doc), num(f.word), num(f.count), format_double(f.tf)});

    auto docs = open_out(dir / names[1]);
    write_csv_row(docs, kDocHeader);
    for (std::size_t i = 0; i < t.documents.size(); ++i) {
        const auto& d = t.documents[i];
        write_csv_row(docs, {num(i), num(d.doc_id), d.raw_text, d.clean_text, d.lemma_text, num(d.author_id),
                             num(d.time_id), num(d.location_id)});
    }

    auto words = open_out(dir / names[2]);
    write_csv_row(words, kWordHeader);
    for (const auto& w : t.words) write_csv_row(words, {num(w.word_id), w.lemma});

    auto times = open_out(dir / names[3]);
    write_csv_row(times, kTimeHeader);
    for (const auto& tp : t.times)
        write_csv_row(times, {num(tp.time_id), format_iso8601(tp.full_date), num(tp.minute), num(tp.hour), num(tp.day),
                              num(tp.month), num(tp.year)});

    auto authors = open_out(dir / names[4]);
    write_csv_row(authors, kAuthorHeader);
    for (const auto& a : t.authors)
        write_csv_row(authors, {num(a.author_id), std::string(to_string(a.gender)), num(a.age), a.firstname, a.lastname});

    auto locations = open_out(dir / names[5]);
    write_csv_row(locations, kLocationHeader);
    for (const auto& l : t.locations) write_csv_row(locations, {num(l.location_id), format_double(l.x), format_double(l.y)});

    auto tags = open_out(dir / names[6]);
    write_csv_row(tags, kTagHeader);
    for (const auto& g : t.tags) write_csv_row(tags, {num(g.tag_id), g.label, std::string(to_string(g.kind))});

    auto entities = open_out(dir / names[7]);
    write_csv_row(entities, kEntityHeader);
    for (const auto& e : t.entities)
        write_csv_row(entities, {num(e.entity_id), e.label, std::string(to_string(e.kind))});

    auto bridge = open_out(dir / names[8]);
    write_csv_row(bridge, kBridgeHeader);
    for (std::size_t i = 0; i < t.documents.size(); ++i) {
        for (auto id : t.documents[i].tag_ids) write_csv_row(bridge, {num(i), "tag", num(id)});
        for (auto id : t.documents[i].entity_ids) write_csv_row(bridge, {num(i), "named_entity", num(id)});
    }

    for (auto* s : {&facts, &docs, &words, &times, &authors, &locations, &tags, &entities, &bridge})
        if (!s->flush()) throw IoError("failed writing snowflake export to " + dir.string());
}

namespace {

class TableReader {
  public:
    TableReader(const fs::path& path, const std::vector<std::string>& header)
        : in_(path, std::ios::binary), name_(path.filename().string()) {
        if (!in_) throw IoError("cannot open " + path.string());
        std::vector<std::string> got;
        if (!read_csv_row(in_, got) || got != header) throw IntegrityError(name_ + ": unexpected header");
    }

    bool next(std::vector<std::string>& row) {
        if (!read_csv_row(in_, row)) return false;
        ++line_;
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw IntegrityError(name_ + " row " + std::to_string(line_) + ": " + what);
    }

    std::uint64_t u64(const std::string& s) const {
        std::size_t pos = 0;
        try {
            if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
            const auto v = std::stoull(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
        fail("'" + s + "' is not an unsigned integer");
    }

    std::uint32_t u32(const std::string& s) const {
        const auto v = u64(s);
        if (v > UINT32_MAX) fail("'" + s + "' is out of range");
        return static_cast<std::uint32_t>(v);
    }

    double real(const std::string& s) const {
        std::size_t pos = 0;
        try {
            const double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
        fail("'" + s + "' is not a number");
    }

    void expect_width(const std::vector<std::string>& row, std::size_t n) const {
        if (row.size() != n) fail("expected " + std::to_string(n) + " fields");
    }

  private:
    std::ifstream in_;
    std::string name_;
    std::size_t line_ = 0;
};

}  // namespace

Corpus import_snowflake(const fs::path& dir, double tf_floor, Corpus::Check check) {
    const auto& names = snowflake_files();
    CorpusTables t;
    t.tf_floor = tf_floor;
    std::vector<std::string> row;

    {
        TableReader r(dir / names[2], kWordHeader);
        while (r.next(row)) {
            r.expect_width(row, 2);
            t.words.push_back(Word{r.u32(row[0]), row[1]});
        }
    }
    {
        TableReader r(dir / names[3], kTimeHeader);
        while (r.next(row)) {
            r.expect_width(row, 7);
            const auto ts = parse_iso8601(row[1]);
            if (!ts) r.fail("full_date is not ISO-8601");
            TimePoint tp{r.u32(row[0]), *ts, static_cast<int>(r.u32(row[2])), static_cast<int>(r.u32(row[3])),
                         static_cast<int>(r.u32(row[4])), static_cast<int>(r.u32(row[5])),
                         static_cast<int>(r.u32(row[6]))};
            t.times.push_back(tp);
        }
    }
    {
        TableReader r(dir / names[4], kAuthorHeader);
        while (r.next(row)) {
            r.expect_width(row, 5);
            const auto g = parse_gender(row[1]);
            if (!g) r.fail("unknown gender '" + row[1] + "'");
            t.authors.push_back(Author{r.u32(row[0]), *g, r.u32(row[2]), row[3], row[4]});
        }
    }
    {
        TableReader r(dir / names[5], kLocationHeader);
        while (r.next(row)) {
            r.expect_width(row, 3);
            t.locations.push_back(GeoLocation{r.u32(row[0]), r.real(row[1]), r.real(row[2])});
        }
    }
    {
        TableReader r(dir / names[6], kTagHeader);
        while (r.next(row)) {
            r.expect_width(row, 3);
            const auto k = parse_tag_kind(row[2]);
            if (!k) r.fail("unknown tag kind '" + row[2] + "'");
            t.tags.push_back(Tag{r.u32(row[0]), row[1], *k});
        }
    }
    {
        TableReader r(dir / names[7], kEntityHeader);
        while (r.next(row)) {
            r.expect_width(row, 3);
            const auto k = parse_entity_kind(row[2]);
            if (!k) r.fail("unknown entity kind '" + row[2] + "'");
            t.entities.push_back(NamedEntity{r.u32(row[0]), row[1], *k});
        }
    }
    {
        TableReader r(dir / names[1], kDocHeader);
        while (r.next(row)) {
            r.expect_width(row, 8);
            if (r.u64(row[0]) != t.documents.size()) r.fail("doc_index is not dense");
            Document d;
            d.doc_id = r.u64(row[1]);
            d.raw_text = row[2];
            d.clean_text = row[3];
            d.lemma_text = row[4];
            d.author_id = r.u32(row[5]);
            d.time_id = r.u32(row[6]);
            d.location_id = r.u32(row[7]);
            t.documents.push_back(std::move(d));
        }
    }
    {
        TableReader r(dir / names[8], kBridgeHeader);
        while (r.next(row)) {
            r.expect_width(row, 3);
            const auto doc = r.u64(row[0]);
            if (doc >= t.documents.size()) r.fail("dangling doc_index " + row[0]);
            if (row[1] == "tag")
                t.documents[doc].tag_ids.push_back(r.u32(row[2]));
            else if (row[1] == "named_entity")
                t.documents[doc].entity_ids.push_back(r.u32(row[2]));
            else
                r.fail("unknown bridge dimension '" + row[1] + "'");
        }
    }
    {
        TableReader r(dir / names[0], kFactsHeader);
        while (r.next(row)) {
            r.expect_width(row, 4);
            t.facts.push_back(WordFact{r.u32(row[0]), r.u32(row[1]), r.u32(row[2]), r.real(row[3])});
        }
    }
    return Corpus(std::move(t), check);
}

}  // namespace textbends
