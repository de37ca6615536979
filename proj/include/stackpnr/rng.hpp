#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace stackpnr {

// splitmix64 finaliser; used to derive per-stage seeds from the flow seed.
constexpr uint64_t mix_seed(uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

enum class Stage : uint64_t
{
    Partition = 1,
    Place = 2,
    Route = 3,
};

// Stage seed = mix_seed(seed ^ mix_seed(stage ordinal)).
constexpr uint64_t derive_seed(uint64_t seed, Stage stage)
{
    return mix_seed(seed ^ mix_seed(static_cast<uint64_t>(stage)));
}

// Thin wrapper around mt19937_64. The distribution code is written out here
// rather than using <random> distributions, whose output is not pinned by the
// standard and would make artifacts differ between standard libraries.
class Rng
{
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). bound must be > 0.
    uint64_t below(uint64_t bound)
    {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    int below(int bound) { return static_cast<int>(below(static_cast<uint64_t>(bound))); }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T> void shuffle(std::vector<T> &v)
    {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(static_cast<uint64_t>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace stackpnr
