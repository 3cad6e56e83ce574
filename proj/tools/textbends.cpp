// textbends command-line driver. Talks to the library through the C API only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "textbends/textbends.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum class Level { error = 0, warning = 0, info = 1, debug = 2 };

Level log_level() {
    const char* env = std::getenv("TEXTBENDS_LOG");
    if (!env) return Level::info;
    const std::string v = env;
    if (v == "error") return Level::error;
    if (v == "debug") return Level::debug;
    return Level::info;
}

void log(Level level, const std::string& msg, const char* label = nullptr) {
    static const Level threshold = log_level();
    if (level > threshold) return;
    static const char* names[] = {"error", "info", "debug"};
    std::cerr << "textbends: " << (label ? label : names[static_cast<int>(level)]) << ": " << msg << '\n';
}

void warn(const std::string& msg) { log(Level::warning, msg, "warning"); }

struct Failure {
    int code;
};

int exit_code(tb_status s) {
    switch (s) {
        case TB_OK: return 0;
        case TB_ERR_USAGE: return 1;
        case TB_ERR_NONDETERMINISM: return 3;
        default: return 2;
    }
}

void check(tb_status s) {
    if (s == TB_OK) return;
    log(Level::error, tb_last_error());
    throw Failure{exit_code(s)};
}

void usage_error(const std::string& msg) {
    log(Level::error, msg);
    throw Failure{1};
}

struct CorpusDeleter {
    void operator()(tb_corpus* c) const { tb_corpus_free(c); }
};
struct ReportDeleter {
    void operator()(tb_report* r) const { tb_report_free(r); }
};
struct StringDeleter {
    void operator()(char* s) const { tb_string_free(s); }
};
using CorpusPtr = std::unique_ptr<tb_corpus, CorpusDeleter>;
using ReportPtr = std::unique_ptr<tb_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        log(Level::error, "cannot open " + path);
        throw Failure{2};
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CorpusPtr load_corpus(const std::string& path, double tf_floor, bool check_tf = true) {
    if (!fs::exists(path)) {
        log(Level::error, "corpus not found: " + path);
        throw Failure{2};
    }
    tb_corpus* c = nullptr;
    if (fs::is_directory(path))
        check(tb_corpus_load_snowflake(path.c_str(), tf_floor, check_tf ? 1 : 0, &c));
    else
        check(tb_corpus_load_jsonl(path.c_str(), "pretokenized", tf_floor, &c));
    log(Level::info, "loaded " + std::to_string(tb_corpus_document_count(c)) + " documents from " + path);
    return CorpusPtr(c);
}

// Parameter bindings given as flags. Unset flags are left out.
struct ParamFlags {
    std::string params_file;
    std::vector<std::string> gender;
    std::string start_date, end_date;
    std::optional<double> start_x, end_x, start_y, end_y;
    std::vector<std::string> words;
    std::optional<unsigned> k;

    void add_to(CLI::App* app) {
        app->add_option("--params", params_file, "Parameter file (JSON)");
        app->add_option("--pGender", gender, "Gender binding(s)")->delimiter(',');
        app->add_option("--pStartDate", start_date, "Time window start");
        app->add_option("--pEndDate", end_date, "Time window end");
        app->add_option("--pStartX", start_x);
        app->add_option("--pEndX", end_x);
        app->add_option("--pStartY", start_y);
        app->add_option("--pEndY", end_y);
        app->add_option("--pWords", words, "Search terms")->delimiter(',');
        app->add_option("--k", k, "Result size (default 10)");
    }

    json flags_json() const {
        json j = json::object();
        if (!gender.empty()) j["pGender"] = gender;
        if (!start_date.empty()) j["pStartDate"] = start_date;
        if (!end_date.empty()) j["pEndDate"] = end_date;
        if (start_x) j["pStartX"] = *start_x;
        if (end_x) j["pEndX"] = *end_x;
        if (start_y) j["pStartY"] = *start_y;
        if (end_y) j["pEndY"] = *end_y;
        if (!words.empty()) j["pWords"] = words;
        if (k) j["k"] = *k;
        return j;
    }

    // The parameter file wins over flags; every overridden flag is reported.
    std::string resolve() const {
        const json flags = flags_json();
        json merged;
        if (params_file.empty()) {
            merged = {{"pGender", {"male", "female"}},
                      {"pStartDate", "2015-09-17 00:00:00"},
                      {"pEndDate", "2015-09-18 00:00:00"},
                      {"pStartX", 20},
                      {"pEndX", 40},
                      {"pStartY", -100},
                      {"pEndY", 100},
                      {"pWords", {"think", "today", "friday"}}};
            for (const auto& [key, v] : flags.items()) merged[key] = v;
        } else {
            json file;
            try {
                file = json::parse(read_file(params_file));
            } catch (const json::exception& e) {
                usage_error("invalid parameter file " + params_file + ": " + e.what());
            }
            if (!file.is_object()) usage_error("parameter file must hold a JSON object");
            merged = flags;
            for (const auto& [key, v] : file.items()) {
                const std::string name = key == "peEndDate" ? "pEndDate" : key;
                if (merged.contains(name) && merged[name] != v)
                    warn(name + " from " + params_file + " overrides the command-line flag");
                merged[name] = v;
            }
        }
        log(Level::debug, "effective parameters: " + merged.dump());
        return merged.dump();
    }
};

struct RunFlags {
    std::vector<std::string> schemes{"tfidf", "bm25"};
    std::vector<std::string> engines{"columnar", "mapreduce"};
    unsigned warm_runs = 10;
    unsigned cold_runs = 1;
    unsigned partitions = 4;
    double K = 0.5, k1 = 1.2, b = 0.75;
    std::string length_mode = "tokens";

    void add_to(CLI::App* app) {
        app->add_option("--schemes", schemes, "Weighting schemes")->delimiter(',')->capture_default_str();
        app->add_option("--engines", engines, "Executors")->delimiter(',')->capture_default_str();
        app->add_option("--warm-runs", warm_runs, "Measured runs per query and engine")->capture_default_str();
        app->add_option("--cold-runs", cold_runs, "Unmeasured runs before measuring")->capture_default_str();
        app->add_option("--partitions", partitions, "Map tasks of the mapreduce executor")->capture_default_str();
        app->add_option("--K", K, "Augmented tf floor")->capture_default_str();
        app->add_option("--k1", k1, "BM25 k1")->capture_default_str();
        app->add_option("--b", b, "BM25 b")->capture_default_str();
        app->add_option("--length-mode", length_mode, "tokens or distinct_terms")->capture_default_str();
    }

    json options(const std::optional<unsigned>& k) const {
        json o = {{"schemes", schemes},     {"engines", engines}, {"warm_runs", warm_runs},
                  {"cold_runs", cold_runs}, {"partitions", partitions}, {"K", K},
                  {"k1", k1},               {"b", b},             {"length_mode", length_mode}};
        if (k) o["k"] = *k;
        return o;
    }
};

void write_report(const tb_report* report, const std::string& format, const std::string& out) {
    if (format == "checksums") {
        char* s = nullptr;
        check(tb_report_checksums(report, &s));
        StringPtr owned(s);
        if (out.empty() || out == "-") {
            std::cout << s;
        } else {
            std::ofstream f(out, std::ios::binary);
            f << s;
            if (!f) {
                log(Level::error, "cannot write " + out);
                throw Failure{2};
            }
        }
        return;
    }
    check(tb_report_write(report, format.c_str(), out.empty() ? nullptr : out.c_str()));
    if (!out.empty() && out != "-") log(Level::info, "wrote " + format + " report to " + out);
}

void report_divergences(tb_status s, const tb_report* report) {
    if (s == TB_ERR_NONDETERMINISM && report) {
        log(Level::error, std::to_string(tb_report_divergence_count(report)) +
                              " cross-engine divergence(s) or unstable result(s); see the report");
        throw Failure{3};
    }
    check(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"textbends: textual data warehouse benchmark"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic corpus");
    double g_sf = 0.0;
    unsigned long long g_seed = 42;
    std::string g_out, g_config;
    std::optional<unsigned long long> g_docs_per_sf;
    std::optional<unsigned> g_vocab;
    std::vector<std::string> g_terms;
    gen->add_option("--sf", g_sf, "Scale factor")->required();
    gen->add_option("--seed", g_seed, "Random seed")->capture_default_str();
    gen->add_option("--out", g_out, "Output JSONL path")->required();
    gen->add_option("--config", g_config, "Generator configuration file (JSON)");
    gen->add_option("--docs-per-sf", g_docs_per_sf, "Documents at scale factor 1");
    gen->add_option("--vocab", g_vocab, "Vocabulary size");
    gen->add_option("--guaranteed-terms", g_terms, "Terms planted in a share of documents")->delimiter(',');

    // ingest
    auto* ing = app.add_subcommand("ingest", "Load an external JSONL corpus and write it in canonical form");
    std::string i_in, i_out, i_tokenizer = "pretokenized";
    double i_tf_floor = 0.5;
    ing->add_option("--in", i_in, "Input JSONL")->required();
    ing->add_option("--out", i_out, "Output JSONL")->required();
    ing->add_option("--tokenizer", i_tokenizer, "pretokenized or whitespace_lower")->capture_default_str();
    ing->add_option("--tf-floor", i_tf_floor, "Augmented tf floor K stored with the corpus")->capture_default_str();

    // export
    auto* exp = app.add_subcommand("export", "Write the snowflake tables as CSV files");
    std::string e_corpus, e_out;
    exp->add_option("--corpus", e_corpus, "Corpus JSONL")->required();
    exp->add_option("--out", e_out, "Output directory")->required();

    // run
    auto* run = app.add_subcommand("run", "Run the query workload on a corpus");
    std::string r_corpus, r_out, r_format = "json";
    double r_tf_floor = 0.5;
    ParamFlags r_params;
    RunFlags r_flags;
    run->add_option("--corpus", r_corpus, "Corpus JSONL or snowflake directory")->required();
    run->add_option("--out", r_out, "Report path (stdout when omitted)");
    run->add_option("--format", r_format, "json, csv, plotdata or checksums")->capture_default_str();
    run->add_option("--tf-floor", r_tf_floor, "K the corpus tf column was stored with")->capture_default_str();
    r_params.add_to(run);
    r_flags.add_to(run);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Generate corpora over scale factors and run the workload on each");
    std::vector<double> s_sf_list;
    unsigned long long s_seed = 42;
    std::string s_out, s_format = "json", s_cache, s_config;
    std::optional<unsigned long long> s_docs_per_sf;
    std::optional<unsigned> s_vocab;
    ParamFlags s_params;
    RunFlags s_flags;
    sweep->add_option("--sf-list", s_sf_list, "Increasing scale factors")->delimiter(',')->required();
    sweep->add_option("--seed", s_seed, "Random seed")->capture_default_str();
    sweep->add_option("--config", s_config, "Generator configuration file (JSON)");
    sweep->add_option("--docs-per-sf", s_docs_per_sf, "Documents at scale factor 1");
    sweep->add_option("--vocab", s_vocab, "Vocabulary size");
    sweep->add_option("--cache-dir", s_cache, "Reuse corpora generated with the same configuration");
    sweep->add_option("--out", s_out, "Report path (stdout when omitted)");
    sweep->add_option("--format", s_format, "json, csv, plotdata or checksums")->capture_default_str();
    s_params.add_to(sweep);
    s_flags.add_to(sweep);

    // report
    auto* rep = app.add_subcommand("report", "Convert a JSON report");
    std::string p_in, p_out, p_format = "csv";
    rep->add_option("--in", p_in, "JSON report")->required();
    rep->add_option("--out", p_out, "Output path (stdout when omitted)");
    rep->add_option("--format", p_format, "json, csv, plotdata or checksums")->capture_default_str();

    // verify
    auto* ver = app.add_subcommand("verify", "Cross-check all executors against the oracle");
    std::string v_corpus;
    double v_tf_floor = 0.5;
    std::size_t v_max_docs = 10000;
    ParamFlags v_params;
    ver->add_option("--corpus", v_corpus, "Corpus JSONL or snowflake directory")->required();
    ver->add_option("--max-docs", v_max_docs, "Refuse larger corpora")->capture_default_str();
    ver->add_option("--tf-floor", v_tf_floor, "K the corpus tf column was stored with")->capture_default_str();
    v_params.add_to(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    auto generator_config = [](const std::string& file, double sf, unsigned long long seed,
                               const std::optional<unsigned long long>& docs, const std::optional<unsigned>& vocab,
                               const std::vector<std::string>& terms) {
        json c = json::object();
        if (!file.empty()) {
            try {
                c = json::parse(read_file(file));
            } catch (const json::exception& e) {
                usage_error("invalid generator configuration " + file + ": " + e.what());
            }
        }
        auto set = [&](const char* key, const json& v) {
            if (!file.empty() && c.contains(key) && c[key] != v) {
                warn(std::string(key) + " from " + file + " overrides the command-line flag");
                return;
            }
            c[key] = v;
        };
        if (sf >= 0) set("sf", sf);
        set("seed", seed);
        if (docs) set("docs_per_unit_sf", *docs);
        if (vocab) set("vocab_size", *vocab);
        if (!terms.empty()) set("guaranteed_terms", terms);
        return c.dump();
    };

    try {
        if (*gen) {
            const auto config = generator_config(g_config, g_sf, g_seed, g_docs_per_sf, g_vocab, g_terms);
            log(Level::debug, "generator configuration: " + config);
            tb_corpus* c = nullptr;
            check(tb_corpus_generate(config.c_str(), &c));
            CorpusPtr corpus(c);
            check(tb_corpus_save_jsonl(corpus.get(), g_out.c_str()));
            char* m = nullptr;
            check(tb_corpus_manifest_json(corpus.get(), &m));
            StringPtr manifest(m);
            log(Level::info, "wrote " + std::to_string(tb_corpus_document_count(corpus.get())) + " documents to " +
                                 g_out);
            std::cout << manifest.get() << '\n';
        } else if (*ing) {
            tb_corpus* c = nullptr;
            check(tb_corpus_load_jsonl(i_in.c_str(), i_tokenizer.c_str(), i_tf_floor, &c));
            CorpusPtr corpus(c);
            check(tb_corpus_save_jsonl(corpus.get(), i_out.c_str()));
            log(Level::info, "ingested " + std::to_string(tb_corpus_document_count(corpus.get())) + " documents");
        } else if (*exp) {
            auto corpus = load_corpus(e_corpus, 0.5);
            check(tb_corpus_export_snowflake(corpus.get(), e_out.c_str()));
            log(Level::info, "exported snowflake tables to " + e_out);
        } else if (*run) {
            auto corpus = load_corpus(r_corpus, r_tf_floor);
            const auto params = r_params.resolve();
            const auto options = r_flags.options(r_params.k).dump();
            log(Level::debug, "run options: " + options);
            tb_report* r = nullptr;
            const tb_status s = tb_run(corpus.get(), params.c_str(), options.c_str(), &r);
            ReportPtr report(r);
            if (report) write_report(report.get(), r_format, r_out);
            report_divergences(s, report.get());
        } else if (*sweep) {
            const auto config = generator_config(s_config, -1.0, s_seed, s_docs_per_sf, s_vocab, {});
            const auto params = s_params.resolve();
            json o = s_flags.options(s_params.k);
            o["sf_list"] = s_sf_list;
            if (!s_cache.empty()) o["cache_dir"] = s_cache;
            const auto options = o.dump();
            tb_report* r = nullptr;
            const tb_status s = tb_sweep(config.c_str(), params.c_str(), options.c_str(), &r);
            ReportPtr report(r);
            if (report) write_report(report.get(), s_format, s_out);
            report_divergences(s, report.get());
        } else if (*rep) {
            tb_report* r = nullptr;
            check(tb_report_load(p_in.c_str(), &r));
            ReportPtr report(r);
            write_report(report.get(), p_format, p_out);
        } else if (*ver) {
            auto corpus = load_corpus(v_corpus, v_tf_floor, false);
            const auto params = v_params.resolve();
            char* out = nullptr;
            const tb_status s = tb_verify(corpus.get(), params.c_str(), v_max_docs, &out);
            StringPtr lines(out);
            if (lines) std::cout << lines.get();
            check(s);
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return 0;
}
