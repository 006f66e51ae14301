#pragma once

#include <adclin/signal.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace adclin {

// Multi-tone test signal
//   x(n) = G * sum_{k active} A_k * sin(w_k * n + alpha_k),  w_k = 2*pi*k/total + dw
// over subcarriers k = 1 .. total/2 - 1, sample index n = 1..L. Phases take
// QPSK values {pi/4, -pi/4, 3pi/4, -3pi/4}; dw lies in [-pi/64, pi/64].
// Leaving `phases` empty or `freq_offset` unset requests a seeded random fill
// at generation time: phases for all tones in ascending k, then the offset.
struct MultiToneSpec {
    int total_subcarriers = 64;
    std::vector<std::uint8_t> active;   // size total/2-1; empty -> all on
    std::vector<double> amplitudes;     // size total/2-1; empty -> all 1
    std::vector<double> phases;         // size total/2-1; empty -> drawn
    std::optional<double> freq_offset;  // unset -> drawn
    double gain = 1.0;

    int num_tones() const { return total_subcarriers / 2 - 1; }

    // 64 subcarriers, all 31 tones active at unit amplitude, random fill.
    static MultiToneSpec standard();
};

Signal gen_multitone(const MultiToneSpec& spec, std::size_t L, std::uint64_t seed);

// Same draw stream as gen_multitone (phases, then offset), then `num_nulled`
// of the active tones are picked (seeded) and silenced.
Signal gen_nullsub_multitone(const MultiToneSpec& spec, int num_nulled, std::size_t L,
                             std::uint64_t seed);

} // namespace adclin
