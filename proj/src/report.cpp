#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "csv.hpp"
#include "textbends/bench.hpp"
#include "textbends/errors.hpp"

namespace textbends {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json protocol_to_json(const ProtocolConfig& p) {
    ordered_json engines = ordered_json::array();
    for (auto e : p.engines) engines.push_back(to_string(e));
    return {{"warm_runs", p.warm_runs},
            {"cold_runs", p.cold_runs},
            {"engines", engines},
            {"partitions", p.partitions},
            {"clock", "steady_clock"}};
}

ordered_json params_to_json(const WeightParams& w) {
    return {{"K", w.K}, {"k1", w.k1}, {"b", w.b}, {"length_mode", to_string(w.length_mode)}};
}

ordered_json record_to_json(const ResultRecord& r) {
    ordered_json j;
    j["query_id"] = to_string(r.query_id);
    j["gender"] = to_string(r.gender);
    j["scheme"] = to_string(r.scheme);
    j["engine"] = to_string(r.engine);
    j["sf"] = r.sf;
    j["k"] = r.k;
    j["samples_ms"] = r.samples_ms;
    j["mean_ms"] = r.mean_ms;
    j["stddev_ms"] = r.stddev_ms;
    j["selectivity"] = r.selectivity ? ordered_json(*r.selectivity) : ordered_json(nullptr);
    j["complexity"] = r.complexity;
    j["result_checksum"] = r.result_checksum;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

ordered_json report_to_json(const RunReport& r) {
    ordered_json j;
    j["manifest"] = ordered_json::parse(manifest_to_json(r.manifest));
    j["protocol"] = protocol_to_json(r.protocol);
    j["params"] = params_to_json(r.params);
    j["workload"] = ordered_json::parse(param_file_to_json(r.workload));
    j["results"] = ordered_json::array();
    for (const auto& rec : r.results) j["results"].push_back(record_to_json(rec));
    j["divergences"] = r.divergences;
    j["timestamp"] = r.timestamp;
    j["host"] = r.host;
    return j;
}

template <class T, class Parse>
T parse_enum(const json& v, Parse parse, const char* what) {
    const auto s = v.get<std::string>();
    const auto parsed = parse(s);
    if (!parsed) throw IntegrityError(std::string("report: unknown ") + what + " '" + s + "'");
    return *parsed;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.manifest = manifest_from_json(j.at("manifest").dump());

    const auto& p = j.at("protocol");
    r.protocol.warm_runs = p.at("warm_runs").get<std::uint32_t>();
    r.protocol.cold_runs = p.at("cold_runs").get<std::uint32_t>();
    r.protocol.partitions = p.value("partitions", std::size_t{4});
    r.protocol.engines.clear();
    for (const auto& e : p.at("engines")) r.protocol.engines.push_back(parse_enum<Executor>(e, parse_executor, "engine"));

    const auto& w = j.at("params");
    r.params.K = w.at("K").get<double>();
    r.params.k1 = w.at("k1").get<double>();
    r.params.b = w.at("b").get<double>();
    r.params.length_mode = parse_enum<LengthMode>(w.at("length_mode"), parse_length_mode, "length_mode");

    if (j.contains("workload")) r.workload = parse_param_file(j.at("workload").dump());

    for (const auto& x : j.at("results")) {
        ResultRecord rec;
        rec.query_id = parse_enum<QueryId>(x.at("query_id"), parse_query_id, "query_id");
        rec.gender = parse_enum<Gender>(x.at("gender"), parse_gender, "gender");
        rec.scheme = parse_enum<Scheme>(x.at("scheme"), parse_scheme, "scheme");
        rec.engine = parse_enum<Executor>(x.at("engine"), parse_executor, "engine");
        rec.sf = x.at("sf").get<double>();
        rec.k = x.value("k", std::uint32_t{10});
        rec.samples_ms = x.at("samples_ms").get<std::vector<double>>();
        rec.mean_ms = x.at("mean_ms").get<double>();
        rec.stddev_ms = x.at("stddev_ms").get<double>();
        if (!x.at("selectivity").is_null()) rec.selectivity = x.at("selectivity").get<double>();
        rec.complexity = x.at("complexity").get<int>();
        rec.result_checksum = x.at("result_checksum").get<std::string>();
        rec.error = x.value("error", std::string{});
        r.results.push_back(std::move(rec));
    }
    r.divergences = j.value("divergences", std::vector<std::string>{});
    r.timestamp = j.value("timestamp", std::string{});
    r.host = j.value("host", std::string{});
    return r;
}

void emit_json(std::span<const RunReport> reports, std::ostream& out) {
    if (reports.size() == 1) {
        out << report_to_json(reports.front()).dump(2) << '\n';
        return;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    out << arr.dump(2) << '\n';
}

void emit_csv(std::span<const RunReport> reports, std::ostream& out) {
    using detail::format_double;
    detail::write_csv_row(out, {"query_id", "gender", "scheme", "engine", "sf", "k", "warm_runs", "mean_ms",
                                "stddev_ms", "selectivity", "complexity", "result_checksum", "error"});
    for (const auto& r : reports) {
        for (const auto& rec : r.results) {
            detail::write_csv_row(
                out, {std::string(to_string(rec.query_id)), std::string(to_string(rec.gender)),
                      std::string(to_string(rec.scheme)), std::string(to_string(rec.engine)), format_double(rec.sf),
                      std::to_string(rec.k), std::to_string(rec.samples_ms.size()), format_double(rec.mean_ms),
                      format_double(rec.stddev_ms), rec.selectivity ? format_double(*rec.selectivity) : "",
                      std::to_string(rec.complexity), rec.result_checksum, rec.error});
        }
    }
}

// One block per (query, scheme, engine), blank-line separated; rows are
// (sf, gender) points sorted by sf.
void emit_plotdata(std::span<const RunReport> reports, std::ostream& out) {
    using SeriesKey = std::tuple<QueryId, Scheme, Executor>;
    std::map<SeriesKey, std::vector<const ResultRecord*>> series;
    for (const auto& r : reports)
        for (const auto& rec : r.results)
            if (rec.error.empty()) series[{rec.query_id, rec.scheme, rec.engine}].push_back(&rec);

    bool first = true;
    for (auto& [key, recs] : series) {
        std::stable_sort(recs.begin(), recs.end(), [](const ResultRecord* a, const ResultRecord* b) {
            return std::tie(a->sf, a->gender) < std::tie(b->sf, b->gender);
        });
        if (!first) out << "\n\n";
        first = false;
        out << "# series query=" << to_string(std::get<0>(key)) << " scheme=" << to_string(std::get<1>(key))
            << " engine=" << to_string(std::get<2>(key)) << '\n';
        out << "sf\tgender\tmean_ms\tstddev_ms\n";
        for (const auto* rec : recs)
            out << detail::format_double(rec->sf) << '\t' << to_string(rec->gender) << '\t'
                << detail::format_double(rec->mean_ms) << '\t' << detail::format_double(rec->stddev_ms) << '\n';
    }
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "plotdata") return ReportFormat::plotdata;
    return std::nullopt;
}

void emit_report(std::span<const RunReport> reports, ReportFormat format, std::ostream& out) {
    switch (format) {
        case ReportFormat::json: emit_json(reports, out); return;
        case ReportFormat::csv: emit_csv(reports, out); return;
        case ReportFormat::plotdata: emit_plotdata(reports, out); return;
    }
}

void emit_report(std::span<const RunReport> reports, std::string_view format, std::ostream& out) {
    const auto f = parse_report_format(format);
    if (!f) throw ConfigError("unknown report format '" + std::string(format) + "' (expected json, csv or plotdata)");
    emit_report(reports, *f, out);
}

std::vector<RunReport> parse_reports(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw IntegrityError(std::string("report: invalid JSON: ") + e.what());
    }
    std::vector<RunReport> out;
    try {
        if (j.is_array()) {
            for (const auto& r : j) out.push_back(report_from_json(r));
        } else {
            out.push_back(report_from_json(j));
        }
    } catch (const json::exception& e) {
        throw IntegrityError(std::string("report: ") + e.what());
    }
    return out;
}

}  // namespace textbends
