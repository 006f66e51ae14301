#pragma once

#include <adclin/signal.hpp>

#include <cstdint>
#include <numbers>

namespace adclin {

// Bandpass-filtered white Gaussian noise. The filter is a linear-phase
// windowed-sinc (Hamming) design with `filter_order + 1` taps; only the valid
// part of the convolution is kept, so the output has no edge transients.
struct BandpassNoiseSpec {
    double band_lo = 0.25 * std::numbers::pi;  // radians/sample
    double band_hi = 0.75 * std::numbers::pi;
    int filter_order = 128;                    // must be even
    double peak_target = 1.0;                  // max |sample| after scaling
};

Signal gen_bandpass_noise(const BandpassNoiseSpec& spec, std::size_t L, std::uint64_t seed);

} // namespace adclin
