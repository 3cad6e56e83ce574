#include "textbends/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "textbends/errors.hpp"

namespace textbends {

std::string_view to_string(Scheme s) { return s == Scheme::tfidf ? "tfidf" : "bm25"; }

std::optional<Scheme> parse_scheme(std::string_view s) {
    if (s == "tfidf") return Scheme::tfidf;
    if (s == "bm25") return Scheme::bm25;
    return std::nullopt;
}

std::string_view to_string(LengthMode m) { return m == LengthMode::tokens ? "tokens" : "distinct_terms"; }

std::optional<LengthMode> parse_length_mode(std::string_view s) {
    if (s == "tokens") return LengthMode::tokens;
    if (s == "distinct_terms") return LengthMode::distinct_terms;
    return std::nullopt;
}

void WeightParams::validate() const {
    if (!(K >= 0.0 && K < 1.0)) throw ConfigError("weight parameter K must lie in [0, 1)");
    if (!(k1 >= 1.2 && k1 <= 2.0)) throw ConfigError("weight parameter k1 must lie in [1.2, 2.0]");
    if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("weight parameter b must lie in [0, 1]");
}

double tf_augmented(std::uint32_t f_td, std::uint32_t f_max, double K) {
    if (f_max == 0) throw DomainError("tf_augmented: f_max is zero");
    if (f_td < 1 || f_td > f_max) throw DomainError("tf_augmented: f_td outside [1, f_max]");
    if (f_td == f_max) return 1.0;
    return K + (1.0 - K) * static_cast<double>(f_td) / static_cast<double>(f_max);
}

double idf(std::uint64_t N, std::uint64_t n) {
    if (N == 0 || n == 0) throw DomainError("idf: N and n must be positive");
    if (n > N) throw DomainError("idf: n exceeds N");
    if (n == N) return 1.0;
    return 1.0 + std::log(static_cast<double>(N) / static_cast<double>(n));
}

double bm25_weight(double tf, double idf_value, double doc_len, double avgdl, const WeightParams& p) {
    if (!(avgdl > 0.0)) throw DomainError("bm25: average document length is zero");
    const double tfidf_value = tf * idf_value;
    return tfidf_value * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * doc_len / avgdl));
}

double document_length(const Corpus& corpus, DocIndex d, LengthMode mode) {
    return mode == LengthMode::tokens ? static_cast<double>(corpus.token_count(d))
                                      : static_cast<double>(corpus.distinct_terms(d));
}

FilteredStats FilteredStats::compute(const Corpus& corpus, std::vector<std::uint8_t> members,
                                     const WeightParams& params) {
    FilteredStats s;
    members.resize(corpus.document_count(), 0);
    s.members = std::move(members);
    s.doc_freq.assign(corpus.vocabulary_size(), 0);
    s.doc_length.assign(corpus.document_count(), 0.0);
    double total = 0.0;
    for (DocIndex d = 0; d < corpus.document_count(); ++d) {
        if (!s.members[d]) continue;
        ++s.N;
        for (const auto& f : corpus.facts_of(d)) ++s.doc_freq[f.word];
        s.doc_length[d] = document_length(corpus, d, params.length_mode);
        total += s.doc_length[d];
    }
    s.avgdl = s.N > 0 ? total / static_cast<double>(s.N) : 0.0;
    return s;
}

double fact_tf(const Corpus& corpus, const WordFact& fact, const WeightParams& params) {
    if (params.K == corpus.tf_floor()) return fact.tf;
    return tf_augmented(fact.count, corpus.max_count(fact.doc), params.K);
}

namespace {

const WordFact& find_fact(const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d) {
    if (!stats.contains(d)) throw DomainError("document is not part of the filtered subset");
    const auto facts = corpus.facts_of(d);
    auto it = std::lower_bound(facts.begin(), facts.end(), t,
                               [](const WordFact& f, WordId w) { return f.word < w; });
    if (it == facts.end() || it->word != t) throw DomainError("term does not occur in the document");
    return *it;
}

double weight_of(Scheme scheme, const Corpus& corpus, const FilteredStats& stats, const WordFact& f,
                 const WeightParams& params) {
    const double tf = fact_tf(corpus, f, params);
    const double idf_value = idf(stats.N, stats.doc_freq[f.word]);
    if (scheme == Scheme::tfidf) return tf * idf_value;
    return bm25_weight(tf, idf_value, stats.doc_length[f.doc], stats.avgdl, params);
}

}  // namespace

double tfidf(const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d, const WeightParams& params) {
    return weight_of(Scheme::tfidf, corpus, stats, find_fact(corpus, stats, t, d), params);
}

double bm25(const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d, const WeightParams& params) {
    return weight_of(Scheme::bm25, corpus, stats, find_fact(corpus, stats, t, d), params);
}

double term_weight(Scheme scheme, const Corpus& corpus, const FilteredStats& stats, WordId t, DocIndex d,
                   const WeightParams& params) {
    return weight_of(scheme, corpus, stats, find_fact(corpus, stats, t, d), params);
}

double score_topk_keywords(const Corpus& corpus, const FilteredStats& stats, WordId t, const WeightParams& params,
                           Scheme scheme) {
    double sum = 0.0;
    for (DocIndex d = 0; d < corpus.document_count(); ++d) {
        if (!stats.contains(d)) continue;
        const auto facts = corpus.facts_of(d);
        auto it = std::lower_bound(facts.begin(), facts.end(), t,
                                   [](const WordFact& f, WordId w) { return f.word < w; });
        if (it != facts.end() && it->word == t) sum += weight_of(scheme, corpus, stats, *it, params);
    }
    return sum;
}

double score_topk_documents(const Corpus& corpus, const FilteredStats& stats, std::span<const WordId> query,
                            DocIndex d, const WeightParams& params, Scheme scheme) {
    if (query.empty()) throw DomainError("score_topk_documents: empty query");
    if (!stats.contains(d)) throw DomainError("document is not part of the filtered subset");
    std::vector<WordId> terms(query.begin(), query.end());
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    const auto facts = corpus.facts_of(d);
    double sum = 0.0;
    for (WordId t : terms) {
        auto it = std::lower_bound(facts.begin(), facts.end(), t,
                                   [](const WordFact& f, WordId w) { return f.word < w; });
        if (it != facts.end() && it->word == t) sum += weight_of(scheme, corpus, stats, *it, params);
    }
    return sum;
}

}  // namespace textbends
