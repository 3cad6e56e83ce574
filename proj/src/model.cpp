#include "textbends/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>

#include "textbends/errors.hpp"
#include "textbends/weighting.hpp"

namespace textbends {

namespace {

constexpr std::string_view kGenderNames[] = {"male", "female"};
constexpr std::string_view kTagKindNames[] = {"hashtag", "mention", "label"};
constexpr std::string_view kEntityKindNames[] = {"person", "location", "organization", "product", "other"};

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::string_view (&names)[N]) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<E>(i);
    return std::nullopt;
}

std::string doc_label(const Document& d) { return "document " + std::to_string(d.doc_id); }

}  // namespace

std::string_view to_string(Gender g) { return kGenderNames[static_cast<int>(g)]; }
std::string_view to_string(TagKind k) { return kTagKindNames[static_cast<int>(k)]; }
std::string_view to_string(EntityKind k) { return kEntityKindNames[static_cast<int>(k)]; }
std::optional<Gender> parse_gender(std::string_view s) { return parse_enum<Gender>(s, kGenderNames); }
std::optional<TagKind> parse_tag_kind(std::string_view s) { return parse_enum<TagKind>(s, kTagKindNames); }
std::optional<EntityKind> parse_entity_kind(std::string_view s) {
    return parse_enum<EntityKind>(s, kEntityKindNames);
}

TimePoint TimePoint::decompose(std::uint32_t id, std::int64_t epoch_seconds) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{epoch_seconds}};
    const auto day_point = floor<days>(tp);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{tp - day_point};
    TimePoint t;
    t.time_id = id;
    t.full_date = epoch_seconds;
    t.minute = static_cast<int>(hms.minutes().count());
    t.hour = static_cast<int>(hms.hours().count());
    t.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
    t.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
    t.year = static_cast<int>(ymd.year());
    return t;
}

std::vector<std::string_view> split_tokens(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        if (j > i) out.push_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus() : Corpus(CorpusTables{}) {}

Corpus::Corpus(CorpusTables tables, Check check) : tables_(std::move(tables)) { index_and_validate(check); }

std::span<const WordFact> Corpus::facts_of(DocIndex doc) const {
    return std::span<const WordFact>(tables_.facts).subspan(fact_offsets_[doc],
                                                            fact_offsets_[doc + 1] - fact_offsets_[doc]);
}

const Author& Corpus::author_of(DocIndex doc) const { return tables_.authors[tables_.documents[doc].author_id]; }
const TimePoint& Corpus::time_of(DocIndex doc) const { return tables_.times[tables_.documents[doc].time_id]; }
const GeoLocation& Corpus::location_of(DocIndex doc) const {
    return tables_.locations[tables_.documents[doc].location_id];
}

std::optional<WordId> Corpus::find_word(std::string_view lemma) const {
    auto it = lemma_index_.find(std::string(lemma));
    if (it == lemma_index_.end()) return std::nullopt;
    return it->second;
}

void Corpus::index_and_validate(Check check) {
    const auto& t = tables_;
    if (!(t.tf_floor >= 0.0 && t.tf_floor < 1.0))
        throw IntegrityError("tf floor K must lie in [0, 1)");

    auto check_dense = [](const auto& rows, auto id_of, const char* table) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (id_of(rows[i]) != i)
                throw IntegrityError(std::string(table) + " row " + std::to_string(i) + " has non-dense id " +
                                     std::to_string(id_of(rows[i])));
    };
    check_dense(t.words, [](const Word& w) { return w.word_id; }, "word_dim");
    check_dense(t.times, [](const TimePoint& r) { return r.time_id; }, "time_dim");
    check_dense(t.authors, [](const Author& r) { return r.author_id; }, "author_dim");
    check_dense(t.locations, [](const GeoLocation& r) { return r.location_id; }, "location_dim");
    check_dense(t.tags, [](const Tag& r) { return r.tag_id; }, "tag_dim");
    check_dense(t.entities, [](const NamedEntity& r) { return r.entity_id; }, "named_entity_dim");

    lemma_index_.clear();
    lemma_index_.reserve(t.words.size());
    for (const auto& w : t.words) {
        if (w.lemma.empty()) throw IntegrityError("word_dim row " + std::to_string(w.word_id) + " has an empty lemma");
        if (!lemma_index_.emplace(w.lemma, w.word_id).second)
            throw IntegrityError("word_dim lemma '" + w.lemma + "' is not unique");
    }
    for (const auto& tp : t.times)
        if (TimePoint::decompose(tp.time_id, tp.full_date) != tp)
            throw IntegrityError("time_dim row " + std::to_string(tp.time_id) + " hierarchy does not match full_date");
    for (const auto& loc : t.locations)
        if (!std::isfinite(loc.x) || !std::isfinite(loc.y))
            throw IntegrityError("location_dim row " + std::to_string(loc.location_id) + " has non-finite coordinates");
    for (const auto& tag : t.tags)
        if (tag.label.empty()) throw IntegrityError("tag_dim row " + std::to_string(tag.tag_id) + " has an empty label");
    for (const auto& e : t.entities)
        if (e.label.empty())
            throw IntegrityError("named_entity_dim row " + std::to_string(e.entity_id) + " has an empty label");

    std::unordered_map<std::uint64_t, DocIndex> seen;
    seen.reserve(t.documents.size());
    for (std::size_t i = 0; i < t.documents.size(); ++i) {
        const auto& d = t.documents[i];
        if (!seen.emplace(d.doc_id, static_cast<DocIndex>(i)).second)
            throw IntegrityError("duplicate doc_id " + std::to_string(d.doc_id));
        if (d.author_id >= t.authors.size())
            throw IntegrityError(doc_label(d) + ": dangling author_id " + std::to_string(d.author_id));
        if (d.time_id >= t.times.size())
            throw IntegrityError(doc_label(d) + ": dangling time_id " + std::to_string(d.time_id));
        if (d.location_id >= t.locations.size())
            throw IntegrityError(doc_label(d) + ": dangling location_id " + std::to_string(d.location_id));
        for (auto id : d.tag_ids)
            if (id >= t.tags.size()) throw IntegrityError(doc_label(d) + ": dangling tag_id " + std::to_string(id));
        for (auto id : d.entity_ids)
            if (id >= t.entities.size())
                throw IntegrityError(doc_label(d) + ": dangling entity_id " + std::to_string(id));
    }

    const std::size_t n_docs = t.documents.size();
    fact_offsets_.assign(n_docs + 1, 0);
    max_count_.assign(n_docs, 0);
    token_count_.assign(n_docs, 0);
    for (std::size_t i = 0; i < t.facts.size(); ++i) {
        const auto& f = t.facts[i];
        const std::string row = "document_facts row " + std::to_string(i);
        if (f.doc >= n_docs) throw IntegrityError(row + ": dangling doc " + std::to_string(f.doc));
        if (f.word >= t.words.size()) throw IntegrityError(row + ": dangling word_id " + std::to_string(f.word));
        if (f.count < 1) throw IntegrityError(row + ": f_td must be at least 1");
        if (i > 0) {
            const auto& p = t.facts[i - 1];
            if (p.doc > f.doc || (p.doc == f.doc && p.word >= f.word))
                throw IntegrityError(row + ": facts not sorted by (doc, word) or duplicated");
        }
        ++fact_offsets_[f.doc + 1];
        max_count_[f.doc] = std::max(max_count_[f.doc], f.count);
        token_count_[f.doc] += f.count;
    }
    for (std::size_t d = 0; d < n_docs; ++d) fact_offsets_[d + 1] += fact_offsets_[d];

    if (check == Check::keys_only) return;

    for (const auto& f : t.facts) {
        const double expected = tf_augmented(f.count, max_count_[f.doc], t.tf_floor);
        if (std::abs(expected - f.tf) > 1e-12)
            throw IntegrityError(doc_label(t.documents[f.doc]) + ": stored tf of '" + t.words[f.word].lemma +
                                 "' disagrees with recomputed value");
    }
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::map<std::string_view, std::uint32_t> counts;
        for (auto tok : split_tokens(t.documents[d].lemma_text)) ++counts[tok];
        const auto facts = facts_of(static_cast<DocIndex>(d));
        bool ok = counts.size() == facts.size();
        for (const auto& f : facts) {
            if (!ok) break;
            auto it = counts.find(t.words[f.word].lemma);
            ok = it != counts.end() && it->second == f.count;
        }
        if (!ok) throw IntegrityError(doc_label(t.documents[d]) + ": lemma_text does not match its fact rows");
    }
}

// ---------------------------------------------------------------------------
// CorpusBuilder

std::size_t CorpusBuilder::AuthorKeyHash::operator()(const AuthorKey& k) const {
    std::size_t h = std::hash<std::string>{}(k.firstname);
    h ^= std::hash<std::string>{}(k.lastname) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= (static_cast<std::size_t>(k.age) << 1) ^ static_cast<std::size_t>(k.gender);
    return h;
}

CorpusBuilder::CorpusBuilder(double tf_floor) {
    if (!(tf_floor >= 0.0 && tf_floor < 1.0)) throw ConfigError("tf floor K must lie in [0, 1)");
    tables_.tf_floor = tf_floor;
}

template <typename Map, typename Key, typename Make>
std::uint32_t CorpusBuilder::intern(Map& map, const Key& key, Make&& make) {
    auto [it, inserted] = map.try_emplace(key, 0);
    if (inserted) it->second = make();
    return it->second;
}

void CorpusBuilder::add(DocumentInput in) {
    const auto index = static_cast<DocIndex>(tables_.documents.size());
    if (!doc_ids_.emplace(in.doc_id, index).second)
        throw IntegrityError("duplicate doc_id " + std::to_string(in.doc_id));
    if (!std::isfinite(in.x) || !std::isfinite(in.y))
        throw IntegrityError("document " + std::to_string(in.doc_id) + ": non-finite location");

    Document doc;
    doc.doc_id = in.doc_id;
    doc.raw_text = std::move(in.raw_text);
    doc.clean_text = std::move(in.clean_text);

    doc.author_id = intern(authors_, AuthorKey{in.gender, in.age, in.firstname, in.lastname}, [&] {
        const auto id = static_cast<std::uint32_t>(tables_.authors.size());
        tables_.authors.push_back(Author{id, in.gender, in.age, in.firstname, in.lastname});
        return id;
    });
    doc.time_id = intern(times_, in.timestamp, [&] {
        const auto id = static_cast<std::uint32_t>(tables_.times.size());
        tables_.times.push_back(TimePoint::decompose(id, in.timestamp));
        return id;
    });
    std::string loc_key(2 * sizeof(double), '\0');
    std::memcpy(loc_key.data(), &in.x, sizeof(double));
    std::memcpy(loc_key.data() + sizeof(double), &in.y, sizeof(double));
    doc.location_id = intern(locations_, loc_key, [&] {
        const auto id = static_cast<std::uint32_t>(tables_.locations.size());
        tables_.locations.push_back(GeoLocation{id, in.x, in.y});
        return id;
    });
    for (auto& [label, kind] : in.tags) {
        if (label.empty()) throw IntegrityError("document " + std::to_string(in.doc_id) + ": empty tag label");
        doc.tag_ids.push_back(intern(tags_, std::string(to_string(kind)) + '\x1f' + label, [&] {
            const auto id = static_cast<std::uint32_t>(tables_.tags.size());
            tables_.tags.push_back(Tag{id, label, kind});
            return id;
        }));
    }
    for (auto& [label, kind] : in.entities) {
        if (label.empty()) throw IntegrityError("document " + std::to_string(in.doc_id) + ": empty entity label");
        doc.entity_ids.push_back(intern(entities_, std::string(to_string(kind)) + '\x1f' + label, [&] {
            const auto id = static_cast<std::uint32_t>(tables_.entities.size());
            tables_.entities.push_back(NamedEntity{id, label, kind});
            return id;
        }));
    }

    std::vector<std::pair<WordId, std::uint32_t>> counts;
    std::unordered_map<WordId, std::size_t> slot;
    for (const auto& tok : in.tokens) {
        if (tok.empty()) continue;
        if (tok.find_first_of(" \t\n\r\f\v") != std::string::npos)
            throw IntegrityError("document " + std::to_string(in.doc_id) + ": token contains whitespace");
        const WordId w = intern(words_, tok, [&] {
            const auto id = static_cast<WordId>(tables_.words.size());
            tables_.words.push_back(Word{id, tok});
            return id;
        });
        auto [it, inserted] = slot.try_emplace(w, counts.size());
        if (inserted) counts.emplace_back(w, 0);
        ++counts[it->second].second;
    }
    std::sort(counts.begin(), counts.end());
    std::uint32_t f_max = 0;
    for (const auto& c : counts) f_max = std::max(f_max, c.second);
    for (const auto& [w, c] : counts)
        tables_.facts.push_back(WordFact{index, w, c, tf_augmented(c, f_max, tables_.tf_floor)});

    std::string lemma_text;
    for (const auto& tok : in.tokens) {
        if (tok.empty()) continue;
        if (!lemma_text.empty()) lemma_text += ' ';
        lemma_text += tok;
    }
    doc.lemma_text = std::move(lemma_text);
    tables_.documents.push_back(std::move(doc));
}

Corpus CorpusBuilder::build() && { return Corpus(std::move(tables_), Corpus::Check::keys_only); }

}  // namespace textbends
