#include "textbends/textbends.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "textbends/bench.hpp"
#include "textbends/errors.hpp"

struct tb_corpus {
    textbends::Corpus corpus;
    textbends::CorpusManifest manifest;
};

struct tb_report {
    std::vector<textbends::RunReport> reports;
};

namespace {

using namespace textbends;
using nlohmann::json;

thread_local std::string last_error;

tb_status fail(tb_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

template <class F>
tb_status guarded(F&& f) {
    last_error.clear();
    try {
        return f();
    } catch (const ConfigError& e) {
        return fail(TB_ERR_USAGE, e.what());
    } catch (const NondeterminismError& e) {
        return fail(TB_ERR_NONDETERMINISM, e.what());
    } catch (const Error& e) {
        return fail(TB_ERR_DATA, e.what());
    } catch (const json::exception& e) {
        return fail(TB_ERR_USAGE, std::string("invalid JSON option: ") + e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(TB_ERR_DATA, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TB_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool blank(const char* s) { return s == nullptr || *s == '\0'; }

json parse_options(const char* text) {
    if (blank(text)) return json::object();
    auto j = json::parse(text);
    if (!j.is_object()) throw ConfigError("options must be a JSON object");
    return j;
}

ParamFile load_params(const char* text) { return blank(text) ? reference_params() : parse_param_file(text); }

struct RunOptions {
    std::set<Scheme> schemes{Scheme::tfidf, Scheme::bm25};
    std::uint32_t k = 10;
    WeightParams weights;
    ProtocolConfig protocol;
};

RunOptions run_options(const json& o, const ParamFile& params) {
    RunOptions r;
    if (o.contains("schemes")) {
        r.schemes.clear();
        for (const auto& s : o.at("schemes")) {
            const auto name = s.get<std::string>();
            const auto v = parse_scheme(name);
            if (!v) throw ConfigError("unknown scheme '" + name + "' (expected tfidf or bm25)");
            r.schemes.insert(*v);
        }
        if (r.schemes.empty()) throw ConfigError("at least one scheme is required");
    }
    if (o.contains("engines")) {
        r.protocol.engines.clear();
        for (const auto& e : o.at("engines")) {
            const auto name = e.get<std::string>();
            const auto v = parse_executor(name);
            if (!v || *v == Executor::oracle)
                throw ConfigError("unknown engine '" + name + "' (expected columnar or mapreduce)");
            if (std::find(r.protocol.engines.begin(), r.protocol.engines.end(), *v) == r.protocol.engines.end())
                r.protocol.engines.push_back(*v);
        }
    }
    r.k = params.k.value_or(o.value("k", std::uint32_t{10}));
    r.protocol.warm_runs = o.value("warm_runs", r.protocol.warm_runs);
    r.protocol.cold_runs = o.value("cold_runs", r.protocol.cold_runs);
    r.protocol.partitions = o.value("partitions", r.protocol.partitions);
    r.weights.K = o.value("K", r.weights.K);
    r.weights.k1 = o.value("k1", r.weights.k1);
    r.weights.b = o.value("b", r.weights.b);
    if (o.contains("length_mode")) {
        const auto name = o.at("length_mode").get<std::string>();
        const auto m = parse_length_mode(name);
        if (!m) throw ConfigError("unknown length_mode '" + name + "'");
        r.weights.length_mode = *m;
    }
    r.weights.validate();
    r.protocol.validate();
    return r;
}

GeneratorConfig load_config(const char* text) {
    GeneratorConfig c = blank(text) ? GeneratorConfig{} : generator_config_from_json(text);
    c.validate();
    return c;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& corpus_path) {
    auto p = corpus_path;
    p.replace_extension(".manifest.json");
    return p;
}

bool report_has_divergence(const tb_report& r) {
    for (const auto& rep : r.reports)
        if (rep.nondeterministic()) return true;
    return false;
}

}  // namespace

extern "C" {

const char* tb_last_error(void) { return last_error.c_str(); }

void tb_string_free(char* s) { std::free(s); }

const char* tb_version(void) { return "1.0.0"; }

tb_status tb_corpus_generate(const char* config_json, tb_corpus** out) {
    return guarded([&] {
        if (!out) throw ConfigError("null output handle");
        auto g = generate(load_config(config_json));
        *out = new tb_corpus{std::move(g.corpus), std::move(g.manifest)};
        return TB_OK;
    });
}

tb_status tb_corpus_load_jsonl(const char* path, const char* mode, double tf_floor, tb_corpus** out) {
    return guarded([&] {
        if (!out || blank(path)) throw ConfigError("corpus path is required");
        TokenizerMode m = TokenizerMode::pretokenized;
        if (!blank(mode)) {
            const auto parsed = parse_tokenizer_mode(mode);
            if (!parsed) throw ConfigError(std::string("unknown tokenizer mode '") + mode + "'");
            m = *parsed;
        }
        auto corpus = ingest_jsonl(std::filesystem::path(path), m, tf_floor);
        CorpusManifest manifest;
        const auto mpath = manifest_path_for(path);
        if (std::filesystem::exists(mpath)) {
            manifest = read_manifest(mpath);
            const auto actual = corpus_checksum(corpus);
            if (manifest.checksum != actual)
                throw IntegrityError("corpus checksum " + actual + " does not match manifest " + mpath.string());
        } else {
            manifest = make_manifest(corpus, 0.0, 0);
        }
        *out = new tb_corpus{std::move(corpus), std::move(manifest)};
        return TB_OK;
    });
}

tb_status tb_corpus_load_snowflake(const char* dir, double tf_floor, int check_tf, tb_corpus** out) {
    return guarded([&] {
        if (!out || blank(dir)) throw ConfigError("snowflake directory is required");
        auto corpus = import_snowflake(dir, tf_floor, check_tf ? Corpus::Check::full : Corpus::Check::keys_only);
        auto manifest = make_manifest(corpus, 0.0, 0);
        *out = new tb_corpus{std::move(corpus), std::move(manifest)};
        return TB_OK;
    });
}

tb_status tb_corpus_save_jsonl(const tb_corpus* corpus, const char* path) {
    return guarded([&] {
        if (!corpus || blank(path)) throw ConfigError("corpus and path are required");
        write_jsonl(corpus->corpus, std::filesystem::path(path));
        write_manifest(corpus->manifest, manifest_path_for(path));
        return TB_OK;
    });
}

tb_status tb_corpus_export_snowflake(const tb_corpus* corpus, const char* dir) {
    return guarded([&] {
        if (!corpus || blank(dir)) throw ConfigError("corpus and directory are required");
        export_snowflake(corpus->corpus, dir);
        return TB_OK;
    });
}

tb_status tb_corpus_manifest_json(const tb_corpus* corpus, char** out) {
    return guarded([&] {
        if (!corpus || !out) throw ConfigError("corpus and output are required");
        *out = dup_string(manifest_to_json(corpus->manifest));
        return TB_OK;
    });
}

uint64_t tb_corpus_document_count(const tb_corpus* corpus) { return corpus ? corpus->corpus.document_count() : 0; }

void tb_corpus_free(tb_corpus* corpus) { delete corpus; }

tb_status tb_run(const tb_corpus* corpus, const char* params_json, const char* options_json, tb_report** out) {
    return guarded([&] {
        if (!corpus || !out) throw ConfigError("corpus and output handle are required");
        const auto params = load_params(params_json);
        const auto opts = run_options(parse_options(options_json), params);
        const auto specs = build_workload(params, opts.schemes, opts.k, opts.weights);
        auto report = std::make_unique<tb_report>();
        report->reports.push_back(run_benchmark(corpus->corpus, corpus->manifest, specs, opts.protocol));
        const bool diverged = report_has_divergence(*report);
        *out = report.release();
        if (diverged) return fail(TB_ERR_NONDETERMINISM, "engines or repeated runs disagreed; see report");
        return TB_OK;
    });
}

tb_status tb_sweep(const char* config_json, const char* params_json, const char* options_json, tb_report** out) {
    return guarded([&] {
        if (!out) throw ConfigError("null output handle");
        const auto base = load_config(config_json);
        const auto params = load_params(params_json);
        const auto o = parse_options(options_json);
        const auto opts = run_options(o, params);
        std::vector<double> sf_list = o.value("sf_list", std::vector<double>{});
        std::optional<std::filesystem::path> cache;
        if (o.contains("cache_dir")) cache = o.at("cache_dir").get<std::string>();
        auto report = std::make_unique<tb_report>();
        report->reports =
            sweep_scale(base, sf_list, params, opts.schemes, opts.k, opts.weights, opts.protocol, cache);
        const bool diverged = report_has_divergence(*report);
        *out = report.release();
        if (diverged) return fail(TB_ERR_NONDETERMINISM, "engines or repeated runs disagreed; see report");
        return TB_OK;
    });
}

tb_status tb_report_load(const char* path, tb_report** out) {
    return guarded([&] {
        if (!out || blank(path)) throw ConfigError("report path is required");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError(std::string("cannot open report ") + path);
        std::stringstream ss;
        ss << in.rdbuf();
        auto report = std::make_unique<tb_report>();
        report->reports = parse_reports(ss.str());
        *out = report.release();
        return TB_OK;
    });
}

tb_status tb_report_render(const tb_report* report, const char* format, char** out) {
    return guarded([&] {
        if (!report || !out) throw ConfigError("report and output are required");
        std::ostringstream s;
        emit_report(report->reports, std::string_view(blank(format) ? "json" : format), s);
        *out = dup_string(s.str());
        return TB_OK;
    });
}

tb_status tb_report_write(const tb_report* report, const char* format, const char* path) {
    return guarded([&] {
        if (!report) throw ConfigError("report is required");
        const std::string_view fmt = blank(format) ? "json" : format;
        if (blank(path) || std::strcmp(path, "-") == 0) {
            emit_report(report->reports, fmt, std::cout);
            std::cout.flush();
            return TB_OK;
        }
        std::ostringstream s;
        emit_report(report->reports, fmt, s);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError(std::string("cannot write ") + path);
        f << s.str();
        if (!f) throw IoError(std::string("write failed: ") + path);
        return TB_OK;
    });
}

size_t tb_report_result_count(const tb_report* report) {
    if (!report) return 0;
    size_t n = 0;
    for (const auto& r : report->reports) n += r.results.size();
    return n;
}

size_t tb_report_divergence_count(const tb_report* report) {
    if (!report) return 0;
    size_t n = 0;
    for (const auto& r : report->reports) n += r.divergences.size();
    return n;
}

int tb_report_nondeterministic(const tb_report* report) { return report && report_has_divergence(*report); }

tb_status tb_report_checksums(const tb_report* report, char** out) {
    return guarded([&] {
        if (!report || !out) throw ConfigError("report and output are required");
        std::string s;
        for (const auto& r : report->reports)
            for (const auto& rec : r.results)
                s += std::string(to_string(rec.query_id)) + ' ' + std::string(to_string(rec.scheme)) + ' ' +
                     std::string(to_string(rec.gender)) + ' ' + std::string(to_string(rec.engine)) + ' ' +
                     rec.result_checksum + '\n';
        *out = dup_string(s);
        return TB_OK;
    });
}

void tb_report_free(tb_report* report) { delete report; }

tb_status tb_verify(const tb_corpus* corpus, const char* params_json, size_t max_docs, char** out) {
    return guarded([&] {
        if (!corpus || !out) throw ConfigError("corpus and output are required");
        if (corpus->corpus.document_count() > max_docs)
            throw ConfigError("corpus has " + std::to_string(corpus->corpus.document_count()) +
                              " documents, above the verification guard of " + std::to_string(max_docs));
        const auto params = load_params(params_json);
        const auto specs =
            build_workload(params, {Scheme::tfidf, Scheme::bm25}, params.k.value_or(10), WeightParams{});
        const auto nested = to_nested(corpus->corpus);
        const MapReduceOptions mr{4, corpus->corpus.tf_floor()};

        std::string lines;
        bool all_pass = true;
        for (const auto& spec : specs) {
            const std::string name = std::string(to_string(spec.query_id)) + "/" +
                                     std::string(to_string(spec.scheme)) + "/" +
                                     std::string(to_string(*spec.filters.gender));
            std::string why;
            bool ok = true;
            try {
                const auto oracle = execute_oracle(corpus->corpus, spec, max_docs);
                const auto col = execute_columnar(plan(spec, Executor::columnar), corpus->corpus, spec);
                const auto mrr = execute_mapreduce(plan(spec, Executor::mapreduce), nested, spec, mr);
                std::string w;
                if (!equivalent(oracle, col, 1e-9, &w)) {
                    ok = false;
                    why = "columnar vs oracle: " + w;
                } else if (!equivalent(oracle, mrr, 1e-9, &w)) {
                    ok = false;
                    why = "mapreduce vs oracle: " + w;
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                ok = false;
                why = e.what();
            }
            all_pass = all_pass && ok;
            lines += (ok ? "PASS " : "FAIL ") + name + (ok ? "" : ": " + why) + '\n';
        }
        *out = dup_string(lines);
        if (!all_pass) return fail(TB_ERR_NONDETERMINISM, "executor results disagree");
        return TB_OK;
    });
}

}  // extern "C"
