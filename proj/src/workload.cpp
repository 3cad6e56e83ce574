#include "textbends/workload.hpp"

#include <json.hpp>

#include "textbends/errors.hpp"
#include "textbends/timeutil.hpp"

namespace textbends {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {
constexpr std::string_view kQueryNames[] = {"Q1", "Q2", "Q3", "Q4", "Q1d", "Q2d", "Q3d", "Q4d"};
}

std::string_view to_string(QueryId q) { return kQueryNames[static_cast<int>(q)]; }

std::optional<QueryId> parse_query_id(std::string_view s) {
    for (int i = 0; i < 8; ++i)
        if (kQueryNames[i] == s) return static_cast<QueryId>(i);
    return std::nullopt;
}

std::string_view to_string(Task t) { return t == Task::keywords ? "keywords" : "documents"; }

Task task_of(QueryId q) { return static_cast<int>(q) < 4 ? Task::keywords : Task::documents; }

bool uses_time_window(QueryId q) {
    const int shape = static_cast<int>(q) % 4;
    return shape == 1 || shape == 3;
}

bool uses_geo_box(QueryId q) {
    const int shape = static_cast<int>(q) % 4;
    return shape == 2 || shape == 3;
}

bool FilterSet::admits(const Corpus& corpus, DocIndex d) const {
    if (gender && corpus.author_of(d).gender != *gender) return false;
    if (time_window) {
        const auto ts = corpus.time_of(d).full_date;
        if (ts < time_window->start || ts > time_window->end) return false;
    }
    if (geo_box) {
        const auto& loc = corpus.location_of(d);
        if (loc.x < geo_box->x_start || loc.x > geo_box->x_end || loc.y < geo_box->y_start || loc.y > geo_box->y_end)
            return false;
    }
    return true;
}

ParamFile reference_params() {
    ParamFile p;
    p.genders = {Gender::male, Gender::female};
    p.start_date = parse_iso8601("2015-09-17 00:00:00");
    p.end_date = parse_iso8601("2015-09-18 00:00:00");
    p.start_x = 20;
    p.end_x = 40;
    p.start_y = -100;
    p.end_y = 100;
    p.words = std::vector<std::string>{"think", "today", "friday"};
    return p;
}

ParamFile parse_param_file(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed parameter file: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("parameter file must be a JSON object");

    ParamFile p;
    auto gender = [](const json& v) {
        const auto g = v.is_string() ? parse_gender(v.get<std::string>()) : std::nullopt;
        if (!g) throw ConfigError("pGender values must be 'male' or 'female'");
        return *g;
    };
    if (j.contains("pGender")) {
        if (j["pGender"].is_array())
            for (const auto& v : j["pGender"]) p.genders.push_back(gender(v));
        else
            p.genders.push_back(gender(j["pGender"]));
    }
    auto date = [&](const char* key) -> std::optional<std::int64_t> {
        if (!j.contains(key)) return std::nullopt;
        const auto ts = j[key].is_string() ? parse_iso8601(j[key].get<std::string>()) : std::nullopt;
        if (!ts) throw ConfigError(std::string(key) + " is not an ISO-8601 date");
        return ts;
    };
    auto number = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
        return j[key].get<double>();
    };
    p.start_date = date("pStartDate");
    p.end_date = date("pEndDate");
    if (!p.end_date) p.end_date = date("peEndDate");
    p.start_x = number("pStartX");
    p.end_x = number("pEndX");
    p.start_y = number("pStartY");
    p.end_y = number("pEndY");
    if (j.contains("pWords")) {
        std::vector<std::string> words;
        const auto& w = j["pWords"];
        if (w.is_array()) {
            for (const auto& v : w) {
                if (!v.is_string()) throw ConfigError("pWords entries must be strings");
                words.push_back(v.get<std::string>());
            }
        } else if (w.is_string()) {
            for (auto tok : split_tokens(w.get<std::string>())) {
                std::string s(tok);
                while (!s.empty() && s.back() == ',') s.pop_back();
                if (!s.empty()) words.push_back(s);
            }
        } else {
            throw ConfigError("pWords must be an array of strings");
        }
        p.words = std::move(words);
    }
    if (j.contains("k")) {
        if (!j["k"].is_number_unsigned() || j["k"].get<std::uint64_t>() == 0)
            throw ConfigError("k must be a positive integer");
        p.k = j["k"].get<std::uint32_t>();
    }
    return p;
}

std::string param_file_to_json(const ParamFile& p) {
    ordered_json j;
    j["pGender"] = ordered_json::array();
    for (auto g : p.genders) j["pGender"].push_back(to_string(g));
    if (p.start_date) j["pStartDate"] = format_iso8601(*p.start_date);
    if (p.end_date) j["pEndDate"] = format_iso8601(*p.end_date);
    if (p.start_x) j["pStartX"] = *p.start_x;
    if (p.end_x) j["pEndX"] = *p.end_x;
    if (p.start_y) j["pStartY"] = *p.start_y;
    if (p.end_y) j["pEndY"] = *p.end_y;
    if (p.words) j["pWords"] = *p.words;
    if (p.k) j["k"] = *p.k;
    return j.dump(2);
}

void validate(const QuerySpec& s) {
    const std::string q(to_string(s.query_id));
    if (s.task != task_of(s.query_id)) throw ConfigError(q + ": task does not match the query shape");
    if (!s.filters.gender) throw ConfigError(q + ": c1 requires a gender filter");

    const bool wants_time = uses_time_window(s.query_id);
    if (wants_time && !s.filters.time_window) throw ConfigError(q + ": c2 requires a time window");
    if (!wants_time && s.filters.time_window) throw ConfigError(q + ": c2 time window is not part of this query");
    if (s.filters.time_window && !(s.filters.time_window->start < s.filters.time_window->end))
        throw ConfigError(q + ": c2 requires pStartDate < pEndDate");

    const bool wants_geo = uses_geo_box(s.query_id);
    if (wants_geo && !s.filters.geo_box) throw ConfigError(q + ": c3 requires a geographic box");
    if (!wants_geo && s.filters.geo_box) throw ConfigError(q + ": c3 geographic box is not part of this query");
    if (const auto& g = s.filters.geo_box; g && !(g->x_start < g->x_end && g->y_start < g->y_end))
        throw ConfigError(q + ": c3 requires pStartX < pEndX and pStartY < pEndY");

    if (s.task == Task::keywords && s.filters.search_terms)
        throw ConfigError(q + ": c4 search terms are only valid for document queries");
    if (s.task == Task::documents) {
        if (!s.filters.search_terms || s.filters.search_terms->empty())
            throw ConfigError(q + ": c4 requires a non-empty list of search terms");
        for (const auto& t : *s.filters.search_terms)
            if (t.empty()) throw ConfigError(q + ": c4 search terms must be non-empty");
    }
    if (s.k == 0) throw ConfigError(q + ": k must be positive");
    s.params.validate();
}

std::vector<QuerySpec> build_workload(const ParamFile& p, const std::set<Scheme>& schemes, std::uint32_t k,
                                      const WeightParams& weights) {
    auto missing = [](const char* name, QueryId q) {
        return ConfigError("missing parameter " + std::string(name) + " required by " + std::string(to_string(q)));
    };
    std::vector<QuerySpec> specs;
    for (QueryId q : kAllQueries) {
        if (p.genders.empty()) throw missing("pGender", q);
        FilterSet base;
        if (uses_time_window(q)) {
            if (!p.start_date) throw missing("pStartDate", q);
            if (!p.end_date) throw missing("pEndDate", q);
            base.time_window = TimeWindow{*p.start_date, *p.end_date};
        }
        if (uses_geo_box(q)) {
            if (!p.start_x) throw missing("pStartX", q);
            if (!p.end_x) throw missing("pEndX", q);
            if (!p.start_y) throw missing("pStartY", q);
            if (!p.end_y) throw missing("pEndY", q);
            base.geo_box = GeoBox{*p.start_x, *p.end_x, *p.start_y, *p.end_y};
        }
        if (task_of(q) == Task::documents) {
            if (!p.words) throw missing("pWords", q);
            base.search_terms = *p.words;
        }
        for (Scheme scheme : schemes) {
            for (Gender g : p.genders) {
                QuerySpec s;
                s.query_id = q;
                s.task = task_of(q);
                s.scheme = scheme;
                s.filters = base;
                s.filters.gender = g;
                s.k = k;
                s.params = weights;
                validate(s);
                specs.push_back(std::move(s));
            }
        }
    }
    return specs;
}

int complexity(QueryId q, Scheme scheme) {
    const bool documents = task_of(q) == Task::documents;
    // Main query: joins c5 (words) and c6 (authors).
    int traversals = 2;
    // Nested statistic queries: Q_nD or Q_DL, plus Q_nW for documents.
    const int nested = documents ? 2 : 1;
    traversals += nested;
    // Nested results joined back into the main query: Q_DL for BM25, Q_nW for documents.
    if (scheme == Scheme::bm25) ++traversals;
    if (documents) ++traversals;
    // Each extra dimension is traversed by the main query and by every nested query.
    const int per_dimension = 1 + nested;
    if (uses_time_window(q)) traversals += per_dimension;
    if (uses_geo_box(q)) traversals += per_dimension;
    return traversals;
}

int complexity(const QuerySpec& spec) { return complexity(spec.query_id, spec.scheme); }

}  // namespace textbends
