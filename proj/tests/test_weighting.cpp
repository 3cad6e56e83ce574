#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "support.hpp"
#include "textbends/errors.hpp"
#include "textbends/weighting.hpp"

using namespace textbends;
using tbtest::doc;
using tbtest::rel_close;

namespace {

std::vector<std::uint8_t> all_members(const Corpus& c) { return std::vector<std::uint8_t>(c.document_count(), 1); }

// Brute force from raw lemma_text: every statistic recounted per call.
struct Naive {
    const Corpus& c;
    std::vector<std::uint8_t> members;
    WeightParams p;

    std::map<std::string, int> counts(DocIndex d) const {
        std::map<std::string, int> m;
        std::istringstream in(c.documents()[d].lemma_text);
        std::string tok;
        while (in >> tok) ++m[tok];
        return m;
    }
    double length(DocIndex d) const {
        double n = 0;
        for (const auto& [w, f] : counts(d)) n += p.length_mode == LengthMode::tokens ? f : 1;
        return n;
    }
    double weight(const std::string& t, DocIndex d, Scheme s) const {
        double N = 0, n = 0, total_len = 0;
        for (DocIndex e = 0; e < c.document_count(); ++e) {
            if (!members[e]) continue;
            N += 1;
            total_len += length(e);
            if (counts(e).count(t)) n += 1;
        }
        const auto m = counts(d);
        int fmax = 0;
        for (const auto& [w, f] : m) fmax = std::max(fmax, f);
        const double tf = p.K + (1 - p.K) * m.at(t) / fmax;
        const double w = tf * (1 + std::log(N / n));
        if (s == Scheme::tfidf) return w;
        const double avgdl = total_len / N;
        return w * (p.k1 + 1) / (tf + p.k1 * (1 - p.b + p.b * length(d) / avgdl));
    }
    double keyword(const std::string& t, Scheme s) const {
        double sum = 0;
        for (DocIndex d = 0; d < c.document_count(); ++d)
            if (members[d] && counts(d).count(t)) sum += weight(t, d, s);
        return sum;
    }
};

}  // namespace

TEST_CASE("augmented tf") {
    CHECK(tf_augmented(3, 3, 0.5) == 1.0);
    CHECK(tf_augmented(7, 7, 0.0) == 1.0);
    CHECK(tf_augmented(7, 7, 0.9) == 1.0);
    CHECK(tf_augmented(1, 2, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(tf_augmented(1, 4, 0.5) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK_THROWS_AS(tf_augmented(1, 0, 0.5), DomainError);
    CHECK_THROWS_AS(tf_augmented(0, 2, 0.5), DomainError);
    CHECK_THROWS_AS(tf_augmented(3, 2, 0.5), DomainError);
}

TEST_CASE("idf") {
    CHECK(idf(5, 5) == 1.0);
    CHECK(idf(1, 1) == 1.0);
    CHECK(rel_close(idf(10, 1), 3.302585092994046, 1e-15));
    CHECK(rel_close(idf(4, 2), 1.6931471805599454, 1e-15));
    CHECK_THROWS_AS(idf(0, 0), DomainError);
    CHECK_THROWS_AS(idf(3, 0), DomainError);
    CHECK_THROWS_AS(idf(3, 4), DomainError);
}

TEST_CASE("parameter validation") {
    WeightParams p;
    CHECK_NOTHROW(p.validate());
    p.K = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.k1 = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.k1 = 2.0;
    p.b = 0.0;
    CHECK_NOTHROW(p.validate());
    p.b = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("tfidf of a non-maximal term in a two-document corpus") {
    CorpusBuilder b;
    b.add(doc(1, "a a b"));
    b.add(doc(2, "c"));
    const auto c = std::move(b).build();
    const WeightParams p;
    const auto stats = FilteredStats::compute(c, all_members(c), p);
    CHECK(rel_close(tfidf(c, stats, *c.find_word("b"), 0, p), 1.269860385419959, 1e-12));
    CHECK_THROWS_AS(tfidf(c, stats, *c.find_word("b"), 1, p), DomainError);
}

TEST_CASE("bm25 of a single-document corpus is 1") {
    CorpusBuilder b;
    b.add(doc(1, "x y x"));
    const auto c = std::move(b).build();
    const WeightParams p;
    const auto stats = FilteredStats::compute(c, all_members(c), p);
    CHECK(rel_close(bm25(c, stats, *c.find_word("x"), 0, p), 1.0, 1e-15));
}

TEST_CASE("bm25 kernel") {
    WeightParams p;
    p.b = 0.0;
    // Length-independent denominator: TF + k1.
    CHECK(rel_close(bm25_weight(0.75, 2.0, 10.0, 3.0, p), 0.75 * 2.0 * 2.2 / (0.75 + 1.2), 1e-15));
    CHECK(rel_close(bm25_weight(0.75, 2.0, 1.0, 3.0, p), bm25_weight(0.75, 2.0, 10.0, 3.0, p), 1e-15));
    CHECK_THROWS_AS(bm25_weight(0.75, 2.0, 1.0, 0.0, WeightParams{}), DomainError);
}

TEST_CASE("aggregate scores") {
    CorpusBuilder b;
    b.add(doc(1, "t u"));
    b.add(doc(2, "t u"));
    b.add(doc(3, "t u"));
    b.add(doc(4, "v"));
    const auto c = std::move(b).build();
    const WeightParams p;
    const auto stats = FilteredStats::compute(c, all_members(c), p);
    const auto t = *c.find_word("t");
    const auto v = *c.find_word("v");
    for (auto s : {Scheme::tfidf, Scheme::bm25}) {
        CAPTURE(to_string(s));
        CHECK(rel_close(score_topk_keywords(c, stats, t, p, s), 3 * term_weight(s, c, stats, t, 0, p), 1e-15));
        CHECK(score_topk_keywords(c, stats, v, p, s) == term_weight(s, c, stats, v, 3, p));
        const std::vector<WordId> q1{t};
        CHECK(score_topk_documents(c, stats, q1, 0, p, s) == term_weight(s, c, stats, t, 0, p));
        CHECK(score_topk_documents(c, stats, q1, 3, p, s) == 0.0);
        const std::vector<WordId> none;
        CHECK_THROWS_AS(score_topk_documents(c, stats, none, 0, p, s), DomainError);
    }
}

TEST_CASE("filtered statistics come from the subset only") {
    const auto c = tbtest::hand_corpus();
    std::vector<std::uint8_t> males{1, 1, 0};
    const auto s = FilteredStats::compute(c, males, WeightParams{});
    CHECK(s.N == 2);
    CHECK(s.doc_freq[*c.find_word("a")] == 1);
    CHECK(s.doc_freq[*c.find_word("b")] == 2);
    CHECK(s.avgdl == 2.5);
    CHECK(s.doc_length[2] == 0.0);

    WeightParams distinct;
    distinct.length_mode = LengthMode::distinct_terms;
    const auto d = FilteredStats::compute(c, males, distinct);
    CHECK(d.avgdl == 2.0);
}

TEST_CASE("scores match a brute-force recount on random corpora") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        CAPTURE(seed);
        const auto c = tbtest::random_corpus(seed, 60);
        std::vector<std::uint8_t> members(c.document_count());
        for (DocIndex d = 0; d < c.document_count(); ++d) members[d] = c.author_of(d).gender == Gender::male;
        if (std::count(members.begin(), members.end(), 1) == 0) continue;
        for (auto mode : {LengthMode::tokens, LengthMode::distinct_terms}) {
            WeightParams p;
            p.length_mode = mode;
            p.K = seed % 2 ? 0.5 : 0.3;
            const auto stats = FilteredStats::compute(c, members, p);
            const Naive naive{c, members, p};
            for (WordId w = 0; w < c.vocabulary_size(); ++w) {
                if (stats.doc_freq[w] == 0) continue;
                for (auto s : {Scheme::tfidf, Scheme::bm25})
                    CHECK(rel_close(score_topk_keywords(c, stats, w, p, s), naive.keyword(c.lemma(w), s), 1e-9));
            }
        }
    }
}

TEST_CASE("positivity and range") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto c = tbtest::random_corpus(seed, 80);
        const WeightParams p;
        const auto stats = FilteredStats::compute(c, all_members(c), p);
        for (const auto& f : c.facts()) {
            const double tf = fact_tf(c, f, p);
            CHECK(tf >= p.K);
            CHECK(tf <= 1.0);
            CHECK(tfidf(c, stats, f.word, f.doc, p) > 0.0);
            CHECK(bm25(c, stats, f.word, f.doc, p) > 0.0);
            if (stats.doc_freq[f.word] == stats.N) {
                CHECK(tfidf(c, stats, f.word, f.doc, p) >= 0.5);
                CHECK(tfidf(c, stats, f.word, f.doc, p) <= 1.0);
            }
        }
    }
}

TEST_CASE("documents outside the subset do not affect scores") {
    for (std::uint64_t seed = 200; seed < 215; ++seed) {
        CAPTURE(seed);
        const auto c = tbtest::random_corpus(seed, 40);
        std::vector<std::uint8_t> members(c.document_count());
        for (DocIndex d = 0; d < c.document_count(); ++d) members[d] = c.author_of(d).gender == Gender::female;

        // Rebuild without one non-member document.
        CorpusBuilder b;
        std::vector<std::uint8_t> kept_members;
        bool dropped = false;
        std::vector<DocIndex> mapping;
        for (DocIndex d = 0; d < c.document_count(); ++d) {
            if (!members[d] && !dropped) {
                dropped = true;
                continue;
            }
            const auto& doc_row = c.documents()[d];
            auto in = doc(doc_row.doc_id, doc_row.lemma_text, c.author_of(d).gender, c.time_of(d).full_date,
                          c.location_of(d).x, c.location_of(d).y);
            b.add(in);
            kept_members.push_back(members[d]);
            mapping.push_back(d);
        }
        if (!dropped || kept_members.empty()) continue;
        const auto smaller = std::move(b).build();
        const WeightParams p;
        const auto s1 = FilteredStats::compute(c, members, p);
        const auto s2 = FilteredStats::compute(smaller, kept_members, p);
        for (DocIndex d2 = 0; d2 < smaller.document_count(); ++d2) {
            if (!kept_members[d2]) continue;
            for (const auto& f : smaller.facts_of(d2)) {
                const auto w1 = *c.find_word(smaller.lemma(f.word));
                for (auto s : {Scheme::tfidf, Scheme::bm25})
                    CHECK(term_weight(s, smaller, s2, f.word, d2, p) == term_weight(s, c, s1, w1, mapping[d2], p));
            }
        }
    }
}

TEST_CASE("bm25 penalizes longer documents") {
    CorpusBuilder b;
    b.add(doc(1, "t x"));
    b.add(doc(2, "t y z w"));
    b.add(doc(3, "q"));
    const auto c = std::move(b).build();
    const WeightParams p;
    const auto stats = FilteredStats::compute(c, all_members(c), p);
    const auto t = *c.find_word("t");
    CHECK(bm25(c, stats, t, 0, p) > bm25(c, stats, t, 1, p));
    CHECK(tfidf(c, stats, t, 0, p) == tfidf(c, stats, t, 1, p));
}
