#include <adclin/metrics.hpp>

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adclin {

namespace {

double kahan_sum_sq(const std::vector<double>& a, const std::vector<double>& b, bool diff) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = diff ? b[i] - a[i] : a[i];
        const double term = d * d - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

} // namespace

SndrReport sndr(const Signal& x_ref, const Signal& y) {
    if (x_ref.size() != y.size())
        throw std::invalid_argument("sndr: signal lengths differ");
    if (x_ref.size() == 0) throw std::invalid_argument("sndr: empty signals");
    const double L = static_cast<double>(x_ref.size());
    SndrReport rep;
    rep.signal_power = kahan_sum_sq(x_ref.samples, x_ref.samples, false) / L;
    rep.error_power = kahan_sum_sq(x_ref.samples, y.samples, true) / L;
    if (rep.error_power == 0.0)
        rep.sndr_db = sndr_cap_db;
    else
        rep.sndr_db = 10.0 * std::log10(rep.signal_power / rep.error_power);
    return rep;
}

double EnsembleStats::stddev_db() const { return std::sqrt(variance_db); }

EnsembleStats ensemble_stats(const std::vector<double>& values_db) {
    if (values_db.empty()) throw std::invalid_argument("ensemble_stats: empty value set");
    EnsembleStats st;
    st.count = values_db.size();
    // Plain left fold: the mean is exactly the arithmetic mean of the inputs.
    double sum = 0.0;
    for (double v : values_db) sum += v;
    st.mean_db = sum / static_cast<double>(st.count);
    double acc = 0.0;
    for (double v : values_db) acc += (v - st.mean_db) * (v - st.mean_db);
    st.variance_db = acc / static_cast<double>(st.count);
    return st;
}

EnsembleStats ensemble_sndr(const LinearizerVariant& lin,
                            const std::vector<std::pair<Signal, Signal>>& ref_and_distorted,
                            std::vector<double>* per_signal_db) {
    if (ref_and_distorted.empty())
        throw std::invalid_argument("ensemble_sndr: empty evaluation set");
    std::vector<double> values;
    values.reserve(ref_and_distorted.size());
    for (const auto& [x, v] : ref_and_distorted)
        values.push_back(sndr(x, apply_linearizer(lin, v)).sndr_db);
    if (per_signal_db) *per_signal_db = values;
    return ensemble_stats(values);
}

Spectrum periodogram(const Signal& y, Window window) {
    const std::size_t L = y.size();
    if (L < 2 || (L & (L - 1)) != 0)
        throw std::invalid_argument("periodogram: length must be a power of two");

    std::vector<double> w(L, 1.0);
    if (window == Window::Hann)
        for (std::size_t n = 0; n < L; ++n)
            w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                         static_cast<double>(L)));
    double wsumsq = 0.0;
    for (double wn : w) wsumsq += wn * wn;

    double* in = fftw_alloc_real(L);
    fftw_complex* out = fftw_alloc_complex(L / 2 + 1);
    for (std::size_t n = 0; n < L; ++n) in[n] = y.samples[n] * w[n];
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(L), in, out, FFTW_ESTIMATE);
    fftw_execute(plan);

    Spectrum spec;
    const std::size_t bins = L / 2 + 1;
    spec.omega.resize(bins);
    spec.power.resize(bins);
    const double norm = 1.0 / (static_cast<double>(L) * wsumsq);
    double peak = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        spec.omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L);
        const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        const double sides = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
        spec.power[k] = sides * mag2 * norm;
        peak = std::max(peak, spec.power[k]);
    }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);

    if (peak == 0.0) {
        spec.empty = true;
        return spec;
    }
    spec.power_db.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double rel = spec.power[k] / peak;
        spec.power_db[k] = rel > 0.0 ? std::max(-400.0, 10.0 * std::log10(rel)) : -400.0;
    }
    return spec;
}

} // namespace adclin
