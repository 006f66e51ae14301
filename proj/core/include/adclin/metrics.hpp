#pragma once

#include <adclin/linearizer.hpp>
#include <adclin/signal.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace adclin {

// Cap applied when the error power is exactly zero.
inline constexpr double sndr_cap_db = 200.0;

struct SndrReport {
    double sndr_db = 0.0;
    double signal_power = 0.0;  // (1/L) sum x_ref^2
    double error_power = 0.0;   // (1/L) sum (y - x_ref)^2
};

SndrReport sndr(const Signal& x_ref, const Signal& y);

struct EnsembleStats {
    double mean_db = 0.0;
    double variance_db = 0.0;  // population variance
    std::size_t count = 0;

    double stddev_db() const;
};

EnsembleStats ensemble_stats(const std::vector<double>& values_db);

// Applies `lin` to each v and scores against the paired reference.
EnsembleStats ensemble_sndr(const LinearizerVariant& lin,
                            const std::vector<std::pair<Signal, Signal>>& ref_and_distorted,
                            std::vector<double>* per_signal_db = nullptr);

enum class Window { Rectangular, Hann };

// One-sided periodogram on L/2+1 bins over [0, pi]; L must be a power of two.
// `power` is normalized so the rectangular-window total equals the
// time-domain mean-square power; `power_db` is peak-normalized to 0 dB with a
// -400 dB floor. An all-zero input yields empty=true and no dB column.
struct Spectrum {
    std::vector<double> omega;     // radians/sample
    std::vector<double> power;     // linear
    std::vector<double> power_db;  // peak-normalized
    bool empty = false;
};

Spectrum periodogram(const Signal& y, Window window);

} // namespace adclin
