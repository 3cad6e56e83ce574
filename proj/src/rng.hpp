#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace textbends::detail {

/// Portable helpers over std::mt19937_64, whose output sequence is fixed by
/// the standard. The std distributions are implementation-defined, so none are
/// used here.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next() { return engine_(); }
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) {
        const auto v = static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
        return v < n ? v : n - 1;
    }

    /// Fisher-Yates permutation of 0..n-1.
    std::vector<std::uint64_t> permutation(std::uint64_t n) {
        std::vector<std::uint64_t> p(n);
        for (std::uint64_t i = 0; i < n; ++i) p[i] = i;
        for (std::uint64_t i = n; i > 1; --i) std::swap(p[i - 1], p[below(i)]);
        return p;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace textbends::detail
