#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace textbends {

enum class Gender : std::uint8_t { male, female };
enum class TagKind : std::uint8_t { hashtag, mention, label };
enum class EntityKind : std::uint8_t { person, location, organization, product, other };

std::string_view to_string(Gender g);
std::string_view to_string(TagKind k);
std::string_view to_string(EntityKind k);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<TagKind> parse_tag_kind(std::string_view s);
std::optional<EntityKind> parse_entity_kind(std::string_view s);

/// Dense surrogate of a document: its position in load order.
using DocIndex = std::uint32_t;
using WordId = std::uint32_t;

/// One DocumentFacts row: `count` occurrences of `word` in `doc`, plus the
/// materialized augmented term frequency.
struct WordFact {
    DocIndex doc = 0;
    WordId word = 0;
    std::uint32_t count = 0;
    double tf = 0.0;

    bool operator==(const WordFact&) const = default;
};

struct Document {
    std::uint64_t doc_id = 0;  // external identifier, unique per corpus
    std::string raw_text;
    std::string clean_text;
    std::string lemma_text;
    std::uint32_t author_id = 0;
    std::uint32_t time_id = 0;
    std::uint32_t location_id = 0;
    std::vector<std::uint32_t> tag_ids;
    std::vector<std::uint32_t> entity_ids;

    bool operator==(const Document&) const = default;
};

struct Word {
    WordId word_id = 0;
    std::string lemma;

    bool operator==(const Word&) const = default;
};

struct TimePoint {
    std::uint32_t time_id = 0;
    std::int64_t full_date = 0;  // seconds since the Unix epoch, UTC
    int minute = 0;
    int hour = 0;
    int day = 0;
    int month = 0;
    int year = 0;

    /// Fills the hierarchy fields from `epoch_seconds`.
    static TimePoint decompose(std::uint32_t id, std::int64_t epoch_seconds);

    bool operator==(const TimePoint&) const = default;
};

struct Author {
    std::uint32_t author_id = 0;
    Gender gender = Gender::male;
    std::uint32_t age = 0;
    std::string firstname;
    std::string lastname;

    bool operator==(const Author&) const = default;
};

struct GeoLocation {
    std::uint32_t location_id = 0;
    double x = 0.0;
    double y = 0.0;

    bool operator==(const GeoLocation&) const = default;
};

struct Tag {
    std::uint32_t tag_id = 0;
    std::string label;
    TagKind kind = TagKind::hashtag;

    bool operator==(const Tag&) const = default;
};

struct NamedEntity {
    std::uint32_t entity_id = 0;
    std::string label;
    EntityKind kind = EntityKind::other;

    bool operator==(const NamedEntity&) const = default;
};

/// The raw snowflake tables. Every `*_id` equals the row's position in its
/// table; facts are sorted by (doc, word).
struct CorpusTables {
    std::vector<Document> documents;
    std::vector<Word> words;
    std::vector<TimePoint> times;
    std::vector<Author> authors;
    std::vector<GeoLocation> locations;
    std::vector<Tag> tags;
    std::vector<NamedEntity> entities;
    std::vector<WordFact> facts;
    double tf_floor = 0.5;  // K used to materialize WordFact::tf

    bool operator==(const CorpusTables&) const = default;
};

/// A loaded, validated and immutable corpus with derived per-document indexes.
class Corpus {
  public:
    enum class Check {
        full,       // keys, ordering, stored tf and lemma_text agreement
        keys_only,  // referential integrity and ordering only
    };

    Corpus();
    explicit Corpus(CorpusTables tables, Check check = Check::full);

    const CorpusTables& tables() const { return tables_; }
    std::span<const Document> documents() const { return tables_.documents; }
    std::span<const Word> words() const { return tables_.words; }
    std::span<const WordFact> facts() const { return tables_.facts; }
    std::size_t document_count() const { return tables_.documents.size(); }
    std::size_t vocabulary_size() const { return tables_.words.size(); }
    double tf_floor() const { return tables_.tf_floor; }

    std::span<const WordFact> facts_of(DocIndex doc) const;
    /// max over the document's words of f_td; 0 for a document without tokens.
    std::uint32_t max_count(DocIndex doc) const { return max_count_[doc]; }
    /// Sum of f_td over the document's words.
    std::uint64_t token_count(DocIndex doc) const { return token_count_[doc]; }
    std::size_t distinct_terms(DocIndex doc) const { return facts_of(doc).size(); }

    const Author& author_of(DocIndex doc) const;
    const TimePoint& time_of(DocIndex doc) const;
    const GeoLocation& location_of(DocIndex doc) const;

    std::optional<WordId> find_word(std::string_view lemma) const;
    const std::string& lemma(WordId w) const { return tables_.words[w].lemma; }

    bool operator==(const Corpus& other) const { return tables_ == other.tables_; }

  private:
    void index_and_validate(Check check);

    CorpusTables tables_;
    std::vector<std::size_t> fact_offsets_;
    std::vector<std::uint32_t> max_count_;
    std::vector<std::uint64_t> token_count_;
    std::unordered_map<std::string, WordId> lemma_index_;
};

/// Splits on ASCII whitespace.
std::vector<std::string_view> split_tokens(std::string_view text);

/// Dimension values of one document as they arrive from a generator or file,
/// before surrogate keys are assigned.
struct DocumentInput {
    std::uint64_t doc_id = 0;
    std::string raw_text;
    std::string clean_text;
    std::vector<std::string> tokens;
    Gender gender = Gender::male;
    std::uint32_t age = 0;
    std::string firstname;
    std::string lastname;
    std::int64_t timestamp = 0;
    double x = 0.0;
    double y = 0.0;
    std::vector<std::pair<std::string, TagKind>> tags;
    std::vector<std::pair<std::string, EntityKind>> entities;
};

/// Assigns dense surrogate keys in load order and derives the fact table.
/// Words are numbered by first appearance; authors, times, locations, tags and
/// entities are shared between documents with identical values.
class CorpusBuilder {
  public:
    explicit CorpusBuilder(double tf_floor = 0.5);

    void add(DocumentInput input);
    std::size_t size() const { return tables_.documents.size(); }
    Corpus build() &&;

  private:
    struct AuthorKey {
        Gender gender;
        std::uint32_t age;
        std::string firstname;
        std::string lastname;
        bool operator==(const AuthorKey&) const = default;
    };
    struct AuthorKeyHash {
        std::size_t operator()(const AuthorKey& k) const;
    };

    template <typename Map, typename Key, typename Make>
    std::uint32_t intern(Map& map, const Key& key, Make&& make);

    CorpusTables tables_;
    std::unordered_map<std::string, WordId> words_;
    std::unordered_map<AuthorKey, std::uint32_t, AuthorKeyHash> authors_;
    std::unordered_map<std::int64_t, std::uint32_t> times_;
    std::unordered_map<std::string, std::uint32_t> locations_;  // keyed by bit pattern
    std::unordered_map<std::string, std::uint32_t> tags_;
    std::unordered_map<std::string, std::uint32_t> entities_;
    std::unordered_map<std::uint64_t, DocIndex> doc_ids_;
};

}  // namespace textbends
