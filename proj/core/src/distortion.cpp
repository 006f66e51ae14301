#include <adclin/distortion.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace adclin {

PolynomialDistortion PolynomialDistortion::alternating(double scale, int P) {
    if (P < 2) throw std::invalid_argument("distortion: alternating model needs P >= 2");
    PolynomialDistortion m;
    if (scale == 0.0) return m;
    m.ap.resize(P - 1);
    for (int p = 2; p <= P; ++p) m.ap[p - 2] = (p % 2 == 0 ? scale : -scale) / p;
    return m;
}

double PolynomialDistortion::eval(double x) const {
    double acc = a0 + a1 * x;
    double xp = x;
    for (double a : ap) {
        xp *= x;
        acc += a * xp;
    }
    return acc;
}

Signal apply_distortion(const PolynomialDistortion& model, const Signal& x) {
    Signal v = x;
    for (double& s : v.samples) s = model.eval(s);
    return v;
}

double quantize_step(int bits) {
    if (bits < 1) throw std::invalid_argument("quantizer: bits must be at least 1");
    return std::ldexp(1.0, 1 - bits);
}

Signal quantize_uniform(const Signal& x, int bits) {
    const double step = quantize_step(bits);
    const double top = 1.0 - step;
    Signal y = x;
    for (std::size_t i = 0; i < y.samples.size(); ++i) {
        const double s = y.samples[i];
        if (std::abs(s) > 1.0)
            throw std::invalid_argument("quantizer: sample " + std::to_string(i) +
                                        " has magnitude above 1: " + std::to_string(s));
        double q = step * std::round(s / step);
        if (q > top) q = top;
        if (q < -1.0) q = -1.0;
        y.samples[i] = q;
    }
    return y;
}

double normalize_gain_base(const std::vector<double>& base, const PolynomialDistortion& model,
                           double headroom) {
    if (!(headroom > 0.0 && headroom < 1.0))
        throw std::invalid_argument("normalize_gain: headroom must lie in (0, 1)");
    if (base.empty()) throw std::invalid_argument("normalize_gain: empty base signal");

    const double limit = 1.0 - headroom;
    auto peak_at = [&](double g) {
        double peak = 0.0;
        for (double s : base) peak = std::max(peak, std::abs(model.eval(g * s)));
        return peak;
    };

    if (peak_at(0.0) > limit)
        throw std::runtime_error("normalize_gain: no feasible gain (offset exceeds headroom)");

    double lo = 0.0;
    double hi = 1.0;
    while (peak_at(hi) <= limit) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1048576.0)
            throw std::runtime_error("normalize_gain: failed to bracket the peak constraint");
    }
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (peak_at(mid) <= limit)
            lo = mid;
        else
            hi = mid;
    }
    if (lo == 0.0) throw std::runtime_error("normalize_gain: no feasible gain above zero");
    return lo;
}

double normalize_gain(const MultiToneSpec& spec, const PolynomialDistortion& model,
                      double headroom, std::size_t L, std::uint64_t seed) {
    MultiToneSpec unit = spec;
    unit.gain = 1.0;
    const Signal base = gen_multitone(unit, L, seed);
    return normalize_gain_base(base.samples, model, headroom);
}

} // namespace adclin
