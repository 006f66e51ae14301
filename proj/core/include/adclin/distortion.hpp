#pragma once

#include <adclin/multitone.hpp>
#include <adclin/signal.hpp>

#include <cstdint>
#include <vector>

namespace adclin {

// Memoryless polynomial v = a0 + a1*x + sum_{p=2}^{P} a_p*x^p.
struct PolynomialDistortion {
    double a0 = 0.0;
    double a1 = 1.0;
    std::vector<double> ap;  // a_p for p = 2..P, index p = 2 + position

    static PolynomialDistortion identity() { return {}; }

    // a_p = (-1)^p * scale / p for p = 2..P; the evaluation model uses
    // scale = 0.15, P = 10. scale = 0 degenerates to the identity.
    static PolynomialDistortion alternating(double scale = 0.15, int P = 10);

    double eval(double x) const;
    int P() const { return ap.empty() ? 1 : 2 + static_cast<int>(ap.size()) - 1; }
};

Signal apply_distortion(const PolynomialDistortion& model, const Signal& x);

// Midtread uniform quantizer: step 2^(1-bits), round half away from zero,
// output clamped to [-1, 1 - step]. Samples must lie in [-1, 1].
Signal quantize_uniform(const Signal& x, int bits);
double quantize_step(int bits);

// Largest G (bisection, relative tolerance 1e-6, feasible endpoint returned)
// such that max |model(G * base)| <= 1 - headroom.
double normalize_gain_base(const std::vector<double>& base, const PolynomialDistortion& model,
                           double headroom);

// Convenience wrapper: realizes the spec at unit gain with the given seed and
// searches G for that realization.
double normalize_gain(const MultiToneSpec& spec, const PolynomialDistortion& model,
                      double headroom, std::size_t L = 8192, std::uint64_t seed = 0);

} // namespace adclin
