#include <adclin/multitone.hpp>

#include <adclin/rng.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace adclin {

namespace {

constexpr double qpsk_values[4] = {std::numbers::pi / 4.0, -std::numbers::pi / 4.0,
                                   3.0 * std::numbers::pi / 4.0, -3.0 * std::numbers::pi / 4.0};

bool is_qpsk(double phase) {
    for (double q : qpsk_values)
        if (std::abs(phase - q) <= 1e-12) return true;
    return false;
}

Signal gen_impl(const MultiToneSpec& spec, int num_nulled, std::size_t L, std::uint64_t seed) {
    if (L == 0) throw std::invalid_argument("multitone: L must be at least 1");
    const int K = spec.num_tones();
    if (K < 1) throw std::invalid_argument("multitone: total_subcarriers must be at least 4");

    std::vector<std::uint8_t> active = spec.active;
    if (active.empty()) active.assign(K, 1);
    if (static_cast<int>(active.size()) != K)
        throw std::invalid_argument("multitone: active mask size must equal total/2-1");

    std::vector<double> amp = spec.amplitudes;
    if (amp.empty()) amp.assign(K, 1.0);
    if (static_cast<int>(amp.size()) != K)
        throw std::invalid_argument("multitone: amplitudes size must equal total/2-1");

    Rng rng(seed);

    std::vector<double> phases = spec.phases;
    if (phases.empty()) {
        phases.resize(K);
        for (int k = 0; k < K; ++k) phases[k] = rng.qpsk_phase();
    } else {
        if (static_cast<int>(phases.size()) != K)
            throw std::invalid_argument("multitone: phases size must equal total/2-1");
        for (int k = 0; k < K; ++k)
            if (!is_qpsk(phases[k]))
                throw std::invalid_argument("multitone: phase " + std::to_string(phases[k]) +
                                            " for tone " + std::to_string(k + 1) +
                                            " is not a QPSK value");
    }

    const double dw_limit = std::numbers::pi / 64.0;
    double dw;
    if (spec.freq_offset) {
        dw = *spec.freq_offset;
        if (dw < -dw_limit || dw > dw_limit)
            throw std::invalid_argument("multitone: freq_offset outside [-pi/64, pi/64]");
    } else {
        dw = rng.uniform(-dw_limit, dw_limit);
    }

    if (num_nulled > 0) {
        std::vector<int> candidates;
        for (int k = 0; k < K; ++k)
            if (active[k]) candidates.push_back(k);
        if (num_nulled >= static_cast<int>(candidates.size()))
            throw std::invalid_argument(
                "multitone: num_nulled must be less than the active subcarrier count");
        // Partial Fisher-Yates over the active tone indices.
        for (int j = 0; j < num_nulled; ++j) {
            const std::size_t span = candidates.size() - static_cast<std::size_t>(j);
            std::size_t pick = static_cast<std::size_t>(j) +
                               static_cast<std::size_t>(rng.uniform01() * static_cast<double>(span));
            if (pick >= candidates.size()) pick = candidates.size() - 1;
            std::swap(candidates[j], candidates[pick]);
            amp[candidates[j]] = 0.0;
        }
    } else if (num_nulled < 0) {
        throw std::invalid_argument("multitone: num_nulled must be nonnegative");
    }

    std::vector<double> omega(K);
    for (int k = 0; k < K; ++k)
        omega[k] = 2.0 * std::numbers::pi * (k + 1) / spec.total_subcarriers + dw;

    Signal out;
    out.samples.assign(L, 0.0);
    out.seed = seed;
    out.gain = spec.gain;
    for (std::size_t i = 0; i < L; ++i) {
        const double n = static_cast<double>(i + 1);
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            if (!active[k]) continue;
            acc += amp[k] * std::sin(omega[k] * n + phases[k]);
        }
        out.samples[i] = spec.gain * acc;
    }
    return out;
}

} // namespace

MultiToneSpec MultiToneSpec::standard() {
    MultiToneSpec s;
    s.active.assign(s.num_tones(), 1);
    s.amplitudes.assign(s.num_tones(), 1.0);
    return s;
}

Signal gen_multitone(const MultiToneSpec& spec, std::size_t L, std::uint64_t seed) {
    return gen_impl(spec, 0, L, seed);
}

Signal gen_nullsub_multitone(const MultiToneSpec& spec, int num_nulled, std::size_t L,
                             std::uint64_t seed) {
    return gen_impl(spec, num_nulled, L, seed);
}

} // namespace adclin
