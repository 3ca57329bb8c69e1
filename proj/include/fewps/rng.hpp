#ifndef FEWPS_RNG_HPP
#define FEWPS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace fewps {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG with splittable streams.  Uniform and normal draws go
/// through explicit bit manipulation / Box-Muller so sequences do not depend
/// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed_from(seed, 0)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : eng_(seed_from(seed, stream)) {}

    /// uniform in [0, 1)
    double uniform() {
        return std::ldexp(static_cast<double>(eng_() >> 11), -53);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// standard normal via Box-Muller (pairs cached)
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    std::uint64_t bits() { return eng_(); }

private:
    static std::uint64_t seed_from(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (0xa0761d6478bd642fULL * (stream + 1));
        return splitmix64(s);
    }

    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace fewps

#endif
