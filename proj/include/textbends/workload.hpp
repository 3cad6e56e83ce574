#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "textbends/model.hpp"
#include "textbends/weighting.hpp"

namespace textbends {

enum class QueryId : std::uint8_t { Q1, Q2, Q3, Q4, Q1d, Q2d, Q3d, Q4d };
enum class Task : std::uint8_t { keywords, documents };

inline constexpr QueryId kAllQueries[] = {QueryId::Q1,  QueryId::Q2,  QueryId::Q3,  QueryId::Q4,
                                          QueryId::Q1d, QueryId::Q2d, QueryId::Q3d, QueryId::Q4d};

std::string_view to_string(QueryId q);
std::optional<QueryId> parse_query_id(std::string_view s);
std::string_view to_string(Task t);

Task task_of(QueryId q);
bool uses_time_window(QueryId q);
bool uses_geo_box(QueryId q);

/// Closed interval [start, end] of epoch seconds.
struct TimeWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;
    bool operator==(const TimeWindow&) const = default;
};

/// Closed box [x_start, x_end] x [y_start, y_end].
struct GeoBox {
    double x_start = 0.0;
    double x_end = 0.0;
    double y_start = 0.0;
    double y_end = 0.0;
    bool operator==(const GeoBox&) const = default;
};

/// Constraints c1 (gender), c2 (time window), c3 (geo box), c4 (search terms).
struct FilterSet {
    std::optional<Gender> gender;
    std::optional<TimeWindow> time_window;
    std::optional<GeoBox> geo_box;
    std::optional<std::vector<std::string>> search_terms;

    /// c1 to c3 only; c4 is a per-term constraint applied by the executors.
    bool admits(const Corpus& corpus, DocIndex d) const;

    bool operator==(const FilterSet&) const = default;
};

struct QuerySpec {
    QueryId query_id = QueryId::Q1;
    Task task = Task::keywords;
    Scheme scheme = Scheme::tfidf;
    FilterSet filters;
    std::uint32_t k = 10;
    WeightParams params;

    bool operator==(const QuerySpec&) const = default;
};

/// Query parameter bindings, named as in the benchmark's parameter table.
struct ParamFile {
    std::vector<Gender> genders;                 // pGender
    std::optional<std::int64_t> start_date;      // pStartDate
    std::optional<std::int64_t> end_date;        // pEndDate
    std::optional<double> start_x;               // pStartX
    std::optional<double> end_x;                 // pEndX
    std::optional<double> start_y;               // pStartY
    std::optional<double> end_y;                 // pEndY
    std::optional<std::vector<std::string>> words;  // pWords
    std::optional<std::uint32_t> k;

    bool operator==(const ParamFile&) const = default;
};

/// The parameter table's published values with both genders.
ParamFile reference_params();

/// Parses the JSON form. pGender may be a string or an array; dates are
/// ISO-8601. "peEndDate" is accepted as an alias of pEndDate.
ParamFile parse_param_file(std::string_view json_text);
std::string param_file_to_json(const ParamFile& p);

/// Throws ConfigError naming the violated constraint (c1..c4).
void validate(const QuerySpec& spec);

/// Every query shape x scheme x gender, in that nesting order.
std::vector<QuerySpec> build_workload(const ParamFile& params, const std::set<Scheme>& schemes, std::uint32_t k,
                                      const WeightParams& weights = {});

/// Relationship traversals performed by the query plan, nested statistic
/// queries included.
int complexity(const QuerySpec& spec);
int complexity(QueryId q, Scheme scheme);

}  // namespace textbends
