#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "textbends/engine.hpp"
#include "textbends/errors.hpp"

// Reference executor. It deliberately shares nothing with the weighting
// kernels, the fact table or the filter code: every statistic is recounted
// from lemma_text for every query.

namespace textbends {

namespace {

struct OracleDoc {
    std::uint64_t doc_id;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t max_count = 0;
    std::uint64_t length = 0;
};

}  // namespace

RankedResult execute_oracle(const Corpus& corpus, const QuerySpec& spec, std::size_t max_docs) {
    if (corpus.document_count() > max_docs)
        throw ConfigError("oracle guard: corpus has " + std::to_string(corpus.document_count()) +
                          " documents, limit is " + std::to_string(max_docs));
    validate(spec);
    const auto& t = corpus.tables();
    const auto& f = spec.filters;
    const double K = spec.params.K;
    const double k1 = spec.params.k1;
    const double b = spec.params.b;

    std::vector<OracleDoc> subset;
    for (const auto& doc : t.documents) {
        const Author& author = t.authors.at(doc.author_id);
        const TimePoint& when = t.times.at(doc.time_id);
        const GeoLocation& where = t.locations.at(doc.location_id);
        if (f.gender && author.gender != *f.gender) continue;
        if (f.time_window && !(when.full_date >= f.time_window->start && when.full_date <= f.time_window->end)) continue;
        if (f.geo_box && !(where.x >= f.geo_box->x_start && where.x <= f.geo_box->x_end &&
                           where.y >= f.geo_box->y_start && where.y <= f.geo_box->y_end))
            continue;
        OracleDoc od{doc.doc_id, {}, 0, 0};
        std::istringstream tokens(doc.lemma_text);
        std::string tok;
        while (tokens >> tok) {
            ++od.counts[tok];
            ++od.length;
        }
        for (const auto& [w, c] : od.counts) od.max_count = std::max(od.max_count, c);
        if (spec.params.length_mode == LengthMode::distinct_terms) od.length = od.counts.size();
        subset.push_back(std::move(od));
    }

    RankedResult result;
    result.task = spec.task;
    const double N = static_cast<double>(subset.size());
    if (subset.empty()) return result;
    double total_length = 0.0;
    for (const auto& d : subset) total_length += static_cast<double>(d.length);
    const double avgdl = total_length / N;

    auto doc_frequency = [&](const std::string& term) {
        std::uint64_t n = 0;
        for (const auto& d : subset) n += d.counts.count(term);
        return static_cast<double>(n);
    };
    auto weight = [&](const OracleDoc& d, const std::string& term) {
        const double fr = static_cast<double>(d.counts.at(term));
        const double tf = fr == static_cast<double>(d.max_count) ? 1.0 : K + (1.0 - K) * fr / static_cast<double>(d.max_count);
        const double n = doc_frequency(term);
        const double idf = n == N ? 1.0 : 1.0 + std::log(N / n);
        const double tfidf = tf * idf;
        if (spec.scheme == Scheme::tfidf) return tfidf;
        return tfidf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * static_cast<double>(d.length) / avgdl));
    };

    std::vector<RankedEntry> all;
    if (spec.task == Task::keywords) {
        std::map<std::string, int> vocabulary;
        for (const auto& d : subset)
            for (const auto& [w, c] : d.counts) vocabulary[w] = 0;
        for (const auto& [term, unused] : vocabulary) {
            double sum = 0.0;
            for (const auto& d : subset) {
                if (!d.counts.contains(term)) continue;
                sum += weight(d, term);
                ++result.retrieved_rows;
            }
            all.push_back({term, sum});
        }
    } else {
        std::vector<std::string> query;
        for (const auto& term : *f.search_terms)
            if (std::find(query.begin(), query.end(), term) == query.end()) query.push_back(term);
        // Accumulate in order of first appearance across the whole corpus.
        std::map<std::string, std::size_t> first_seen;
        std::size_t position = 0;
        for (const auto& doc : t.documents) {
            std::istringstream tokens(doc.lemma_text);
            std::string tok;
            while (tokens >> tok) first_seen.try_emplace(tok, position++);
        }
        auto rank = [&](const std::string& term) {
            auto it = first_seen.find(term);
            return it == first_seen.end() ? SIZE_MAX : it->second;
        };
        std::stable_sort(query.begin(), query.end(),
                         [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
        for (const auto& d : subset) {
            double sum = 0.0;
            std::uint64_t hits = 0;
            for (const auto& term : query) {
                if (!d.counts.contains(term)) continue;
                sum += weight(d, term);
                ++hits;
            }
            if (hits == 0) continue;
            result.retrieved_rows += hits;
            all.push_back({d.doc_id, sum});
        }
    }
    result.total_matching = all.size();
    std::sort(all.begin(), all.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.key < b.key;
    });
    if (all.size() > spec.k) all.resize(spec.k);
    result.entries = std::move(all);
    return result;
}

}  // namespace textbends
