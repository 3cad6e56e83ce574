#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "textbends/model.hpp"
#include "textbends/nested.hpp"

namespace textbends {

struct GeneratorConfig {
    double sf = 0.001;
    std::uint64_t docs_per_unit_sf = 1'000'000;
    std::uint64_t seed = 42;
    std::uint32_t vocab_size = 5000;
    std::uint32_t min_tokens = 5;
    std::uint32_t max_tokens = 30;
    std::int64_t start_ts = 1442188800;  // 2015-09-14T00:00:00Z
    std::int64_t end_ts = 1442793600;    // 2015-09-21T00:00:00Z
    double x_min = 0.0;
    double x_max = 60.0;
    double y_min = -150.0;
    double y_max = 150.0;
    double zipf_exponent = 1.07;
    std::vector<std::string> guaranteed_terms{"think", "today", "friday"};
    double guaranteed_term_rate = 0.02;  // fraction of documents receiving each guaranteed term
    std::uint32_t author_pool = 0;       // 0: one author per document
    double tf_floor = 0.5;

    /// Throws ConfigError on an invalid configuration.
    void validate() const;
    std::uint64_t document_count() const;

    bool operator==(const GeneratorConfig&) const = default;
};

struct CorpusManifest {
    double sf = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t document_count = 0;
    std::uint64_t vocabulary_size = 0;
    std::string checksum;  // hex SHA-256 of the canonical JSONL serialization

    bool operator==(const CorpusManifest&) const = default;
};

struct GeneratedCorpus {
    Corpus corpus;
    CorpusManifest manifest;
};

/// Pure function of `config`: equal configs produce byte-identical corpora.
GeneratedCorpus generate(const GeneratorConfig& config);

enum class TokenizerMode : std::uint8_t { pretokenized, whitespace_lower };
std::optional<TokenizerMode> parse_tokenizer_mode(std::string_view s);

/// Reads newline-delimited nested-document records. f_td and tf are always
/// recomputed from lemma_text; any embedded "words" array is ignored.
Corpus ingest_jsonl(std::istream& in, TokenizerMode mode = TokenizerMode::pretokenized, double tf_floor = 0.5);
Corpus ingest_jsonl(const std::filesystem::path& path, TokenizerMode mode = TokenizerMode::pretokenized,
                    double tf_floor = 0.5);

/// Canonical JSONL line (no trailing newline) for one nested record.
std::string to_jsonl_line(const NestedDocument& doc);
void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

/// SHA-256 of the canonical JSONL serialization, hex encoded.
std::string corpus_checksum(const Corpus& corpus);
CorpusManifest make_manifest(const Corpus& corpus, double sf, std::uint64_t seed);

std::string manifest_to_json(const CorpusManifest& m);
CorpusManifest manifest_from_json(std::string_view text);
void write_manifest(const CorpusManifest& m, const std::filesystem::path& path);
CorpusManifest read_manifest(const std::filesystem::path& path);

std::string generator_config_to_json(const GeneratorConfig& c);
/// Missing fields keep their defaults.
GeneratorConfig generator_config_from_json(std::string_view text);

/// File names written by export_snowflake, in write order.
const std::vector<std::string>& snowflake_files();

/// One RFC-4180 CSV file per entity plus one bridge file for the
/// document-tag and document-entity many-to-many links.
void export_snowflake(const Corpus& corpus, const std::filesystem::path& dir);
/// Check::keys_only accepts a stale tf column, so that the verifier can be
/// pointed at it.
Corpus import_snowflake(const std::filesystem::path& dir, double tf_floor = 0.5,
                        Corpus::Check check = Corpus::Check::full);

}  // namespace textbends
