#include "textbends/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "textbends/errors.hpp"
#include "textbends/timeutil.hpp"

namespace textbends {

void ProtocolConfig::validate() const {
    if (warm_runs < 1) throw ConfigError("warm_runs must be at least 1");
    if (engines.empty()) throw ConfigError("at least one engine is required");
    if (partitions < 1) throw ConfigError("partitions must be at least 1");
}

bool RunReport::nondeterministic() const {
    if (!divergences.empty()) return true;
    for (const auto& r : results)
        if (!r.error.empty()) return true;
    return false;
}

SampleStats summarize(std::span<const double> samples) {
    SampleStats s;
    if (samples.empty()) return s;
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (double v : samples) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(samples.size()));
    return s;
}

ExecuteFn make_executor(const Corpus& corpus, std::size_t partitions) {
    auto nested = std::make_shared<std::vector<NestedDocument>>(to_nested(corpus));
    const MapReduceOptions options{partitions, corpus.tf_floor()};
    return [&corpus, nested, options](const ExecutionPlan& p, const QuerySpec& spec) {
        switch (p.executor) {
            case Executor::columnar: return execute_columnar(p, corpus, spec);
            case Executor::mapreduce: return execute_mapreduce(p, *nested, spec, options);
            case Executor::oracle: return execute_oracle(corpus, spec);
        }
        throw ConfigError("unknown executor");
    };
}

namespace {

ParamFile bindings_of(std::span<const QuerySpec> specs) {
    ParamFile p;
    for (const auto& s : specs) {
        const auto& f = s.filters;
        if (f.gender && std::find(p.genders.begin(), p.genders.end(), *f.gender) == p.genders.end())
            p.genders.push_back(*f.gender);
        if (f.time_window) {
            p.start_date = f.time_window->start;
            p.end_date = f.time_window->end;
        }
        if (f.geo_box) {
            p.start_x = f.geo_box->x_start;
            p.end_x = f.geo_box->x_end;
            p.start_y = f.geo_box->y_start;
            p.end_y = f.geo_box->y_end;
        }
        if (f.search_terms) p.words = f.search_terms;
        p.k = s.k;
    }
    return p;
}

}  // namespace

RunReport run_benchmark(const Corpus& corpus, const CorpusManifest& manifest, std::span<const QuerySpec> specs,
                        const ProtocolConfig& protocol) {
    return run_benchmark(corpus, manifest, specs, protocol, make_executor(corpus, protocol.partitions));
}

RunReport run_benchmark(const Corpus& corpus, const CorpusManifest& manifest, std::span<const QuerySpec> specs,
                        const ProtocolConfig& protocol, const ExecuteFn& execute) {
    protocol.validate();
    for (const auto& s : specs) validate(s);

    RunReport report;
    report.manifest = manifest;
    report.protocol = protocol;
    if (!specs.empty()) report.params = specs.front().params;
    report.workload = bindings_of(specs);
    report.timestamp = utc_timestamp_now();
    report.host = host_descriptor();

    using clock = std::chrono::steady_clock;
    for (const auto& spec : specs) {
        std::optional<double> sel;
        if (corpus.document_count() > 0 && !corpus.facts().empty()) sel = selectivity(spec, corpus);

        std::vector<std::pair<Executor, RankedResult>> per_engine;
        for (Executor engine : protocol.engines) {
            const auto p = plan(spec, engine);
            ResultRecord rec;
            rec.query_id = spec.query_id;
            rec.gender = spec.filters.gender.value_or(Gender::male);
            rec.scheme = spec.scheme;
            rec.engine = engine;
            rec.sf = manifest.sf;
            rec.k = spec.k;
            rec.selectivity = sel;
            rec.complexity = complexity(spec);

            std::optional<RankedResult> first;
            std::string first_checksum;
            auto check = [&](RankedResult r) {
                const auto sum = result_checksum(r);
                if (!first) {
                    first = std::move(r);
                    first_checksum = sum;
                    return true;
                }
                return sum == first_checksum;
            };

            bool stable = true;
            for (std::uint32_t i = 0; i < protocol.cold_runs && stable; ++i) stable = check(execute(p, spec));
            for (std::uint32_t i = 0; i < protocol.warm_runs && stable; ++i) {
                const auto start = clock::now();
                auto r = execute(p, spec);
                const auto stop = clock::now();
                rec.samples_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
                stable = check(std::move(r));
            }
            if (!stable) {
                rec.error = "nondeterministic result across runs";
                rec.samples_ms.clear();
            } else {
                const auto st = summarize(rec.samples_ms);
                rec.mean_ms = st.mean;
                rec.stddev_ms = st.stddev;
                rec.result_checksum = first_checksum;
                per_engine.emplace_back(engine, std::move(*first));
            }
            report.results.push_back(std::move(rec));
        }

        for (std::size_t i = 1; i < per_engine.size(); ++i) {
            std::string why;
            if (!equivalent(per_engine[0].second, per_engine[i].second, 1e-9, &why)) {
                report.divergences.push_back(std::string(to_string(spec.query_id)) + "/" +
                                             std::string(to_string(spec.scheme)) + "/" +
                                             std::string(to_string(*spec.filters.gender)) + ": " +
                                             std::string(to_string(per_engine[i].first)) + " vs " +
                                             std::string(to_string(per_engine[0].first)) + ": " + why);
            }
        }
    }
    return report;
}

std::vector<RunReport> sweep_scale(const GeneratorConfig& base, std::span<const double> sf_list,
                                   const ParamFile& params, const std::set<Scheme>& schemes, std::uint32_t k,
                                   const WeightParams& weights, const ProtocolConfig& protocol,
                                   const std::optional<std::filesystem::path>& cache_dir) {
    for (std::size_t i = 0; i < sf_list.size(); ++i) {
        if (!(sf_list[i] > 0.0)) throw ConfigError("scale factors must be positive");
        if (i > 0 && !(sf_list[i] > sf_list[i - 1])) throw ConfigError("scale factors must be strictly increasing");
    }
    const auto specs = build_workload(params, schemes, k, weights);

    std::vector<RunReport> reports;
    for (double sf : sf_list) {
        GeneratorConfig config = base;
        config.sf = sf;
        config.validate();

        std::optional<GeneratedCorpus> generated;
        if (cache_dir) {
            std::filesystem::create_directories(*cache_dir);
            std::ostringstream stem;
            stem << "corpus_sf" << sf << "_seed" << config.seed;
            const auto corpus_path = *cache_dir / (stem.str() + ".jsonl");
            const auto manifest_path = *cache_dir / (stem.str() + ".manifest.json");
            const auto config_path = *cache_dir / (stem.str() + ".config.json");
            const auto config_json = generator_config_to_json(config);
            bool hit = false;
            if (std::filesystem::exists(corpus_path) && std::filesystem::exists(manifest_path) &&
                std::filesystem::exists(config_path)) {
                std::ifstream in(config_path, std::ios::binary);
                std::stringstream ss;
                ss << in.rdbuf();
                hit = ss.str() == config_json;
            }
            if (hit) {
                auto corpus = ingest_jsonl(corpus_path, TokenizerMode::pretokenized, config.tf_floor);
                auto manifest = read_manifest(manifest_path);
                if (corpus_checksum(corpus) == manifest.checksum)
                    generated = GeneratedCorpus{std::move(corpus), std::move(manifest)};
            }
            if (!generated) {
                generated = generate(config);
                write_jsonl(generated->corpus, corpus_path);
                write_manifest(generated->manifest, manifest_path);
                std::ofstream(config_path, std::ios::binary) << config_json;
            }
        } else {
            generated = generate(config);
        }
        reports.push_back(run_benchmark(generated->corpus, generated->manifest, specs, protocol));
    }
    return reports;
}

std::string host_descriptor() {
    char name[256] = {};
    if (gethostname(name, sizeof name - 1) != 0) name[0] = '\0';
    std::ostringstream out;
    out << (name[0] ? name : "unknown") << "; " << std::thread::hardware_concurrency() << " hardware threads";
#if defined(__VERSION__)
    out << "; compiler " << __VERSION__;
#endif
    return out.str();
}

std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    return format_iso8601(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

}  // namespace textbends
