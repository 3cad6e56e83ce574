#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "textbends/gencorpus.hpp"
#include "textbends/model.hpp"
#include "textbends/timeutil.hpp"

namespace tbtest {

using namespace textbends;

inline DocumentInput doc(std::uint64_t id, const std::string& lemmas, Gender g = Gender::male,
                         std::int64_t ts = 1442448000, double x = 30.0, double y = 0.0) {
    DocumentInput in;
    in.doc_id = id;
    in.raw_text = lemmas;
    in.clean_text = lemmas;
    for (auto t : split_tokens(lemmas)) in.tokens.emplace_back(t);
    in.gender = g;
    in.age = 30;
    in.firstname = "Ann";
    in.lastname = "Lee" + std::to_string(id);
    in.timestamp = ts;
    in.x = x;
    in.y = y;
    return in;
}

// d1 = "a a b" (male), d2 = "b c" (male), d3 = "a" (female).
inline Corpus hand_corpus() {
    CorpusBuilder b;
    b.add(doc(1, "a a b", Gender::male));
    b.add(doc(2, "b c", Gender::male));
    b.add(doc(3, "a", Gender::female));
    return std::move(b).build();
}

inline GeneratorConfig small_config(double sf, std::uint64_t seed = 42) {
    GeneratorConfig c;
    c.sf = sf;
    c.seed = seed;
    c.docs_per_unit_sf = 1'000'000;
    return c;
}

// Random corpus for property tests: few documents, tiny vocabulary, so that
// terms collide and filters split the corpus unevenly.
inline Corpus random_corpus(std::uint64_t seed, std::size_t max_docs = 200) {
    std::mt19937_64 rng(seed);
    auto below = [&](std::uint64_t n) { return static_cast<std::uint64_t>(rng() % n); };
    static const char* vocab[] = {"think", "today", "friday", "alpha", "beta", "gamma", "delta",
                                  "eps",   "zeta",  "eta",    "theta", "iota", "kappa", "lambda"};
    const std::size_t n = 1 + below(max_docs);
    CorpusBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        const auto len = 1 + below(12);
        for (std::uint64_t j = 0; j < len; ++j) {
            if (j) text += ' ';
            text += vocab[below(std::size(vocab))];
        }
        const auto g = below(2) ? Gender::female : Gender::male;
        const std::int64_t ts = 1442448000 - 2 * 86400 + static_cast<std::int64_t>(below(5 * 86400));
        const double x = static_cast<double>(below(6001)) / 100.0;
        const double y = static_cast<double>(below(30001)) / 100.0 - 150.0;
        b.add(doc(1000 + i * 7, text, g, ts, x, y));
    }
    return std::move(b).build();
}

inline bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("textbends_" + tag + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace tbtest
