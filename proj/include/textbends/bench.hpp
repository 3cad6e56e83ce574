#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textbends/engine.hpp"
#include "textbends/gencorpus.hpp"
#include "textbends/workload.hpp"

namespace textbends {

struct ProtocolConfig {
    std::uint32_t warm_runs = 10;
    std::uint32_t cold_runs = 1;  // executed first, never measured
    std::vector<Executor> engines{Executor::columnar, Executor::mapreduce};
    std::size_t partitions = 4;   // map tasks of the mapreduce executor

    void validate() const;
    bool operator==(const ProtocolConfig&) const = default;
};

struct ResultRecord {
    QueryId query_id = QueryId::Q1;
    Gender gender = Gender::male;
    Scheme scheme = Scheme::tfidf;
    Executor engine = Executor::columnar;
    double sf = 0.0;
    std::uint32_t k = 10;
    std::vector<double> samples_ms;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    std::optional<double> selectivity;  // absent for an empty corpus
    int complexity = 0;
    std::string result_checksum;
    std::string error;  // non-empty when the record was aborted

    bool operator==(const ResultRecord&) const = default;
};

struct RunReport {
    CorpusManifest manifest;
    ProtocolConfig protocol;
    WeightParams params;
    ParamFile workload;  // query bindings recovered from the specs
    std::vector<ResultRecord> results;
    std::vector<std::string> divergences;  // cross-engine disagreements
    std::string timestamp;
    std::string host;

    bool nondeterministic() const;
    bool operator==(const RunReport&) const = default;
};

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;  // population formula
};
SampleStats summarize(std::span<const double> samples);

/// Runs one query with one engine. Plans are built outside the timed region.
using ExecuteFn = std::function<RankedResult(const ExecutionPlan&, const QuerySpec&)>;

/// Dispatches to the real engines. The nested rendering of the corpus is
/// built once and shared by all mapreduce executions.
ExecuteFn make_executor(const Corpus& corpus, std::size_t partitions = 4);

/// For every (spec, engine): cold runs, then measured warm runs, all
/// sequential. Results must hash identically across every run of a pair;
/// otherwise the record is aborted with an error. Engines are compared
/// pairwise per spec and disagreements are listed in `divergences`.
RunReport run_benchmark(const Corpus& corpus, const CorpusManifest& manifest, std::span<const QuerySpec> specs,
                        const ProtocolConfig& protocol);
RunReport run_benchmark(const Corpus& corpus, const CorpusManifest& manifest, std::span<const QuerySpec> specs,
                        const ProtocolConfig& protocol, const ExecuteFn& execute);

/// One report per scale factor. With a cache directory, corpora generated
/// for an identical configuration are reloaded instead of regenerated.
std::vector<RunReport> sweep_scale(const GeneratorConfig& base, std::span<const double> sf_list,
                                   const ParamFile& params, const std::set<Scheme>& schemes, std::uint32_t k,
                                   const WeightParams& weights, const ProtocolConfig& protocol,
                                   const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

enum class ReportFormat : std::uint8_t { json, csv, plotdata };
std::optional<ReportFormat> parse_report_format(std::string_view s);

/// json: one object for a single report, an array otherwise.
void emit_report(std::span<const RunReport> reports, ReportFormat format, std::ostream& out);
/// Throws ConfigError for an unknown format name.
void emit_report(std::span<const RunReport> reports, std::string_view format, std::ostream& out);

std::vector<RunReport> parse_reports(std::string_view json_text);

std::string host_descriptor();
std::string utc_timestamp_now();

}  // namespace textbends
