#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "textbends/model.hpp"

namespace textbends {

enum class Scheme : std::uint8_t { tfidf, bm25 };

/// How ||d|| is measured for BM25: total token count (default) or number of
/// distinct terms.
enum class LengthMode : std::uint8_t { tokens, distinct_terms };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view s);
std::string_view to_string(LengthMode m);
std::optional<LengthMode> parse_length_mode(std::string_view s);

/// Free parameters of the weighting formulas. Logarithms are natural.
struct WeightParams {
    double K = 0.5;
    double k1 = 1.2;
    double b = 0.75;
    LengthMode length_mode = LengthMode::tokens;

    /// Throws ConfigError unless 0 <= K < 1, 1.2 <= k1 <= 2.0, 0 <= b <= 1.
    void validate() const;

    bool operator==(const WeightParams&) const = default;
};

/// K + (1 - K) * f_td / f_max.
double tf_augmented(std::uint32_t f_td, std::uint32_t f_max, double K);

/// 1 + ln(N / n).
double idf(std::uint64_t N, std::uint64_t n);

/// tf * idf * (k1 + 1) / (tf + k1 * (1 - b + b * doc_len / avgdl)).
/// The numerator carries the full TF-IDF product.
double bm25_weight(double tf, double idf_value, double doc_len, double avgdl, const WeightParams& params);

/// Statistics of a filtered sub-corpus. Nothing here is global: every value
/// is derived from the member documents only.
struct FilteredStats {
    std::vector<std::uint8_t> members;     // by DocIndex
    std::uint64_t N = 0;
    std::vector<std::uint32_t> doc_freq;   // by WordId; n(t) inside the subset
    std::vector<double> doc_length;        // by DocIndex; ||d|| for members, else 0
    double avgdl = 0.0;

    static FilteredStats compute(const Corpus& corpus, std::vector<std::uint8_t> members,
                                 const WeightParams& params);

    bool contains(DocIndex d) const { return d < members.size() && members[d] != 0; }
};

/// Document length under `mode`.
double document_length(const Corpus& corpus, DocIndex d, LengthMode mode);

/// Augmented TF of a fact row. Uses the stored column when `params.K` matches
/// the corpus floor, otherwise recomputes from the counts.
double fact_tf(const Corpus& corpus, const WordFact& fact, const WeightParams& params);

double tfidf(const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d,
             const WeightParams& params);
double bm25(const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d,
            const WeightParams& params);
double term_weight(Scheme scheme, const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d,
                   const WeightParams& params);

/// Sum of the per-document weight of `t` over subset documents containing it.
double score_topk_keywords(const Corpus& corpus, const FilteredStats& stats, WordId t,
                           const WeightParams& params, Scheme scheme);

/// Sum over the query terms of their weight in `d`; absent terms add nothing.
double score_topk_documents(const Corpus& corpus, const FilteredStats& stats, std::span<const WordId> query,
                            DocIndex d, const WeightParams& params, Scheme scheme);

}  // namespace textbends
