#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace adclin {

// Stream splitting: one master seed fans out into independent per-stage,
// per-signal streams so that signal i of stage s is reproducible no matter
// how many signals were drawn before it.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stage, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stage) ^ index);
}

// Thin wrapper over mt19937_64 with hand-rolled output mappings. The
// distributions in <random> are not bit-reproducible across standard library
// implementations, so every mapping from raw 64-bit output to a sample is
// spelled out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform on [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // One of {pi/4, -pi/4, 3pi/4, -3pi/4}, equiprobable.
    double qpsk_phase() {
        static constexpr double table[4] = {
            std::numbers::pi / 4.0, -std::numbers::pi / 4.0,
            3.0 * std::numbers::pi / 4.0, -3.0 * std::numbers::pi / 4.0};
        return table[eng_() & 3ull];
    }

    // Standard normal via Box-Muller; caches the second deviate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stage tags for derive_seed.
inline constexpr std::uint64_t stage_multitone = 1;
inline constexpr std::uint64_t stage_nullsub = 2;
inline constexpr std::uint64_t stage_noise = 3;

} // namespace adclin
