#include <algorithm>
#include <set>
#include <unordered_map>

#include "textbends/engine.hpp"
#include "textbends/errors.hpp"
#include "textbends/mapreduce.hpp"
#include "textbends/weighting.hpp"

namespace textbends {

namespace {

bool admits(const FilterSet& f, const NestedDocument& d) {
    if (f.gender && d.author.gender != *f.gender) return false;
    if (f.time_window && (d.time.full_date < f.time_window->start || d.time.full_date > f.time_window->end))
        return false;
    if (f.geo_box) {
        const auto& g = *f.geo_box;
        if (d.location.x < g.x_start || d.location.x > g.x_end || d.location.y < g.y_start || d.location.y > g.y_end)
            return false;
    }
    return true;
}

double nested_length(const NestedDocument& d, LengthMode mode) {
    if (mode == LengthMode::distinct_terms) return static_cast<double>(d.words.size());
    std::uint64_t total = 0;
    for (const auto& w : d.words) total += w.count;
    return static_cast<double>(total);
}

std::uint32_t nested_max_count(const NestedDocument& d) {
    std::uint32_t m = 0;
    for (const auto& w : d.words) m = std::max(m, w.count);
    return m;
}

/// Partial aggregate of the statistics job. The empty key carries the
/// document count and total length; lemma keys carry document frequency.
struct StatsValue {
    std::uint64_t docs = 0;
    double length = 0.0;
};

struct ScoreValue {
    double score = 0.0;
    std::uint64_t rows = 0;
};

struct BroadcastStats {
    std::uint64_t N = 0;
    double avgdl = 0.0;
    std::unordered_map<std::string, std::uint64_t> doc_freq;
};

BroadcastStats statistics_job(std::span<const NestedDocument> stream, const QuerySpec& spec, std::size_t partitions) {
    auto mapper = [&](const NestedDocument& d, Emitter<std::string, StatsValue>& out) {
        if (!admits(spec.filters, d)) return;
        out.emit(std::string(), StatsValue{1, nested_length(d, spec.params.length_mode)});
        for (const auto& w : d.words) out.emit(w.lemma, StatsValue{1, 0.0});
    };
    auto reducer = [](const std::string&, std::span<const StatsValue> values) {
        StatsValue sum;
        for (const auto& v : values) {
            sum.docs += v.docs;
            sum.length += v.length;
        }
        return sum;
    };
    BroadcastStats stats;
    for (auto& [key, value] : map_reduce<std::string, StatsValue>(stream, partitions, mapper, reducer)) {
        if (key.empty()) {
            stats.N = value.docs;
            stats.avgdl = value.docs > 0 ? value.length / static_cast<double>(value.docs) : 0.0;
        } else {
            stats.doc_freq.emplace(key, value.docs);
        }
    }
    return stats;
}

}  // namespace

RankedResult execute_mapreduce(const ExecutionPlan& p, std::span<const NestedDocument> stream, const QuerySpec& spec,
                               const MapReduceOptions& options) {
    if (p.query_id != spec.query_id) throw ConfigError("execution plan was built for a different query");
    validate(spec);
    RankedResult result;
    result.task = spec.task;

    const auto stats = statistics_job(stream, spec, options.partitions);
    if (stats.N == 0) return result;
    const bool bm25 = p.has(StageKind::nested, "Q_DL");
    const auto& params = spec.params;
    const bool recompute_tf = params.K != options.stored_tf_floor;

    auto weight = [&](const NestedWord& w, std::uint32_t f_max, double doc_len) {
        const double tf = recompute_tf ? tf_augmented(w.count, f_max, params.K) : w.tf;
        const double idf_value = idf(stats.N, stats.doc_freq.at(w.lemma));
        if (!bm25) return tf * idf_value;
        return bm25_weight(tf, idf_value, doc_len, stats.avgdl, params);
    };
    auto sum_reducer = [](const auto&, std::span<const ScoreValue> values) {
        ScoreValue sum;
        for (const auto& v : values) {
            sum.score += v.score;
            sum.rows += v.rows;
        }
        return sum;
    };

    std::vector<RankedEntry> entries;
    if (spec.task == Task::keywords) {
        auto mapper = [&](const NestedDocument& d, Emitter<std::string, ScoreValue>& out) {
            if (!admits(spec.filters, d)) return;
            const auto f_max = nested_max_count(d);
            const double len = nested_length(d, params.length_mode);
            for (const auto& w : d.words) out.emit(w.lemma, ScoreValue{weight(w, f_max, len), 1});
        };
        for (auto& [lemma, v] : map_reduce<std::string, ScoreValue>(stream, options.partitions, mapper, sum_reducer)) {
            result.retrieved_rows += v.rows;
            entries.push_back({std::move(lemma), v.score});
        }
    } else {
        const std::set<std::string> terms(spec.filters.search_terms->begin(), spec.filters.search_terms->end());
        auto mapper = [&](const NestedDocument& d, Emitter<std::uint64_t, ScoreValue>& out) {
            if (!admits(spec.filters, d)) return;
            const auto f_max = nested_max_count(d);
            const double len = nested_length(d, params.length_mode);
            ScoreValue local;
            for (const auto& w : d.words) {
                if (!terms.contains(w.lemma)) continue;
                local.score += weight(w, f_max, len);
                ++local.rows;
            }
            if (local.rows > 0) out.emit(d.doc_id, local);
        };
        for (auto& [doc_id, v] : map_reduce<std::uint64_t, ScoreValue>(stream, options.partitions, mapper, sum_reducer)) {
            result.retrieved_rows += v.rows;
            entries.push_back({doc_id, v.score});
        }
    }
    result.total_matching = entries.size();
    apply_topk(entries, spec.k);
    result.entries = std::move(entries);
    return result;
}

}  // namespace textbends
