#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace isoglm {

// Seeding and draw helpers for bitwise-reproducible experiments.
//
// std::mt19937_64's raw output sequence is fully specified by the standard,
// but the <random> distribution adaptors are not, so every draw below is
// implemented directly on top of the raw 64-bit stream. Stream discipline:
// each consumer (a dataset generation, a fold plan, an inner holdout split)
// owns a private Rng constructed from derive_seed(root_seed, stream_id), so
// adding draws to one consumer never perturbs another.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n) by rejection, bias-free.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    // Standard normal via Box-Muller; the paired draw is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Fisher-Yates with the bias-free bounded draw above.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Uniform on the unit sphere in R^d.
    std::vector<double> on_sphere(std::size_t d) {
        std::vector<double> x(d);
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (auto& xi : x) {
                xi = normal();
                norm_sq += xi * xi;
            }
        } while (norm_sq == 0.0);
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& xi : x) xi *= inv;
        return x;
    }

    // Uniform in the closed unit ball in R^d.
    std::vector<double> in_ball(std::size_t d) {
        std::vector<double> x = on_sphere(d);
        const double r = std::pow(uniform01(), 1.0 / static_cast<double>(d));
        for (auto& xi : x) xi *= r;
        return x;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace isoglm
