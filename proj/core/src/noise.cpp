#include <adclin/noise.hpp>

#include <adclin/rng.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adclin {

Signal gen_bandpass_noise(const BandpassNoiseSpec& spec, std::size_t L, std::uint64_t seed) {
    using std::numbers::pi;
    if (!(spec.band_lo >= 0.0 && spec.band_hi <= pi && spec.band_lo < spec.band_hi))
        throw std::invalid_argument("bandpass noise: passband must satisfy 0 <= lo < hi <= pi");
    if (spec.filter_order < 2 || spec.filter_order % 2 != 0)
        throw std::invalid_argument("bandpass noise: filter_order must be even and >= 2");
    if (L <= static_cast<std::size_t>(spec.filter_order))
        throw std::invalid_argument("bandpass noise: L must exceed filter_order");
    if (!(spec.peak_target > 0.0))
        throw std::invalid_argument("bandpass noise: peak_target must be positive");

    // Windowed-sinc linear-phase bandpass prototype, Hamming window.
    const int taps = spec.filter_order + 1;
    const int mid = spec.filter_order / 2;
    std::vector<double> h(taps);
    for (int j = 0; j < taps; ++j) {
        const double t = j - mid;
        double ideal;
        if (j == mid)
            ideal = (spec.band_hi - spec.band_lo) / pi;
        else
            ideal = (std::sin(spec.band_hi * t) - std::sin(spec.band_lo * t)) / (pi * t);
        const double hamming = 0.54 - 0.46 * std::cos(2.0 * pi * j / spec.filter_order);
        h[j] = ideal * hamming;
    }

    Rng rng(seed);
    std::vector<double> white(L + spec.filter_order);
    for (double& s : white) s = rng.gaussian();

    Signal out;
    out.samples.assign(L, 0.0);
    out.seed = seed;
    for (std::size_t i = 0; i < L; ++i) {
        double acc = 0.0;
        for (int j = 0; j < taps; ++j) acc += h[j] * white[i + taps - 1 - j];
        out.samples[i] = acc;
    }

    double peak = 0.0;
    for (double s : out.samples) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) throw std::runtime_error("bandpass noise: degenerate all-zero realization");
    const double scale = spec.peak_target / peak;
    for (double& s : out.samples) s *= scale;
    out.gain = scale;
    return out;
}

} // namespace adclin
