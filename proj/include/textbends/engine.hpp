#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "textbends/model.hpp"
#include "textbends/nested.hpp"
#include "textbends/workload.hpp"

namespace textbends {

enum class Executor : std::uint8_t { columnar, mapreduce, oracle };
std::string_view to_string(Executor e);
std::optional<Executor> parse_executor(std::string_view s);

/// Word lemma for keyword queries, external doc_id for document queries.
using ResultKey = std::variant<std::string, std::uint64_t>;
std::string key_to_string(const ResultKey& key);

struct RankedEntry {
    ResultKey key;
    double score = 0.0;
    bool operator==(const RankedEntry&) const = default;
};

/// Entries are ordered by descending score, ties by ascending key.
struct RankedResult {
    Task task = Task::keywords;
    std::vector<RankedEntry> entries;
    std::uint64_t total_matching = 0;  // candidate keys before the top-k cut
    std::uint64_t retrieved_rows = 0;  // fact rows passing the filter stage: n(Q)

    bool operator==(const RankedResult&) const = default;
};

/// Total order used for ranking: higher score first, then smaller key.
bool ranks_before(const RankedEntry& a, const RankedEntry& b);

/// Sorts, then keeps the first k.
void apply_topk(std::vector<RankedEntry>& entries, std::uint32_t k);

enum class StageKind : std::uint8_t { join, filter, nested, group_by, topk };

struct PlanStage {
    StageKind kind;
    std::string name;  // "c5", "c1", "Q_nD", "Word", "c_tk", ...
    bool operator==(const PlanStage&) const = default;
};

struct ExecutionPlan {
    Executor executor = Executor::columnar;
    QueryId query_id = QueryId::Q1;
    std::vector<PlanStage> stages;

    std::vector<std::string> names(StageKind kind) const;
    bool has(StageKind kind, std::string_view name) const;
};

/// Relational shape of `spec`: joins c5..c8, filters c1..c4, the nested
/// statistic queries, the grouping key and the top-k cut.
ExecutionPlan plan(const QuerySpec& spec, Executor executor = Executor::columnar);

/// Join/aggregate evaluation over the snowflake tables.
RankedResult execute_columnar(const ExecutionPlan& plan, const Corpus& corpus, const QuerySpec& spec);

struct MapReduceOptions {
    std::size_t partitions = 4;
    double stored_tf_floor = 0.5;  // K the stream's tf values were materialized with
};

/// A statistics job followed by a scoring job, both map -> shuffle -> reduce
/// over nested documents.
RankedResult execute_mapreduce(const ExecutionPlan& plan, std::span<const NestedDocument> stream,
                               const QuerySpec& spec, const MapReduceOptions& options = {});

inline constexpr std::size_t kOracleMaxDocuments = 10'000;

/// Recomputes every statistic from raw lemma_text token lists with a plain
/// quadratic scan. Throws ConfigError above `max_docs` documents.
RankedResult execute_oracle(const Corpus& corpus, const QuerySpec& spec,
                            std::size_t max_docs = kOracleMaxDocuments);

/// 1 - n(Q)/N over DocumentFacts rows. Throws DomainError on an empty corpus.
double selectivity(const QuerySpec& spec, const Corpus& corpus);

/// Same keys in the same order and scores within `rel_tol`. On mismatch the
/// first difference is described in `why`.
bool equivalent(const RankedResult& a, const RankedResult& b, double rel_tol = 1e-9, std::string* why = nullptr);

/// Hex SHA-256 over keys, bit-exact scores and counters.
std::string result_checksum(const RankedResult& r);

}  // namespace textbends
