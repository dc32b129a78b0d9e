#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "bdris/types.hpp"

namespace bdris {

// SplitMix64 step; used to derive independent stream seeds from (master, index).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. The generator (mt19937_64) and all mappings to
// doubles are pinned by the C++ standard resp. written out explicitly here, so
// results are bit-reproducible for a given (seed, stream path).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Independent stream for (master seed, stream index): trial-parallel runs
    // derive one stream per trial and are merge-consistent by construction.
    static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t s = master_seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
        std::uint64_t b = splitmix64(s);
        return RngStream(b);
    }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Marsaglia polar method (no libm trig dependence)
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // CN(0,1): variance 1/2 per real component
    Complex cgauss() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace bdris
