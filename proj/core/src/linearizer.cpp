#include <adclin/linearizer.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace adclin {

namespace {

void validate_branch(const BranchLinearizer& lin) {
    if (lin.biases.size() != lin.weights.size())
        throw std::invalid_argument("branch linearizer: biases/weights size mismatch");
    for (std::size_t m = 1; m < lin.biases.size(); ++m)
        if (!(lin.biases[m] > lin.biases[m - 1]))
            throw std::invalid_argument("branch linearizer: biases must be strictly increasing");
}

void validate_range(const Signal& v, const char* what) {
    for (std::size_t i = 0; i < v.samples.size(); ++i)
        if (std::abs(v.samples[i]) > 1.0)
            throw std::invalid_argument(std::string(what) + ": sample " + std::to_string(i) +
                                        " outside [-1, 1]: " + std::to_string(v.samples[i]));
}

} // namespace

double activation_eval(ActivationKind kind, double v, double b) {
    switch (kind) {
        case ActivationKind::OneBit: return v + b >= 0.0 ? 1.0 : 0.0;
        case ActivationKind::ReLU: return std::max(0.0, v + b);
        case ActivationKind::Modulus: return std::abs(v + b);
    }
    throw std::invalid_argument("activation_eval: unknown activation kind");
}

std::vector<double> lut_biases(int N) {
    if (N < 1) throw std::invalid_argument("lut_biases: N must be at least 1");
    std::vector<double> b(N);
    for (int m = 1; m <= N; ++m) b[m - 1] = -1.0 + 2.0 * m / (N + 1);
    return b;
}

std::vector<double> uniform_biases(int N, double b_max) {
    if (N < 2) throw std::invalid_argument("uniform_biases: N must be at least 2");
    if (!(b_max > 0.0)) throw std::invalid_argument("uniform_biases: b_max must be positive");
    std::vector<double> b(N);
    for (int m = 1; m <= N; ++m) b[m - 1] = -b_max + 2.0 * (m - 1) * b_max / (N - 1);
    return b;
}

Signal apply_branch(const BranchLinearizer& lin, const Signal& v) {
    validate_branch(lin);
    const int N = lin.N();
    Signal y = v;
    for (double& s : y.samples) {
        const double vn = s;
        // Ascending fold from c0; build_lut replays the identical order so the
        // LUT realization matches bit for bit.
        double nl = lin.c0;
        for (int m = 0; m < N; ++m)
            nl += lin.weights[m] * activation_eval(lin.activation, vn, lin.biases[m]);
        s = lin.c1 * vn + nl;
    }
    return y;
}

Signal apply_hammerstein(const HammersteinLinearizer& h, const Signal& v) {
    if (h.d.size() < 2)
        throw std::invalid_argument("hammerstein linearizer: needs coefficients d0 and d1");
    Signal y = v;
    for (double& s : y.samples) {
        const double vn = s;
        double acc = h.d[0] + h.d[1] * vn;
        double vp = vn;
        for (std::size_t k = 2; k < h.d.size(); ++k) {
            vp *= vn;
            acc += h.d[k] * vp;
        }
        s = acc;
    }
    return y;
}

LutLinearizer build_lut(const BranchLinearizer& lin) {
    validate_branch(lin);
    if (lin.activation != ActivationKind::OneBit)
        throw std::invalid_argument("build_lut: requires the one-bit activation");
    const int N = lin.N();
    const std::vector<double> schedule = lut_biases(N);
    for (int m = 0; m < N; ++m)
        if (lin.biases[m] != schedule[m])
            throw std::invalid_argument("build_lut: biases must equal the lut_biases schedule");

    LutLinearizer lut;
    lut.c1 = lin.c1;
    lut.table.resize(N + 1);
    for (int q = 0; q <= N; ++q) {
        double u = lin.c0;
        for (int i = N - q; i < N; ++i) u += lin.weights[i];
        lut.table[q] = u;
    }
    return lut;
}

int lut_address(double v, int N) {
    if (std::abs(v) > 1.0)
        throw std::invalid_argument("lut_address: v outside [-1, 1]");
    const std::vector<double> b = lut_biases(N);
    int q = 0;
    for (int m = 0; m < N; ++m)
        if (v + b[m] >= 0.0) ++q;
    return q;
}

Signal apply_lut(const LutLinearizer& lut, const Signal& v) {
    const int N = lut.N();
    if (N < 1) throw std::invalid_argument("apply_lut: table needs at least 2 entries");
    validate_range(v, "apply_lut");
    const std::vector<double> b = lut_biases(N);
    Signal y = v;
    for (double& s : y.samples) {
        const double vn = s;
        int q = 0;
        for (int m = 0; m < N; ++m)
            if (vn + b[m] >= 0.0) ++q;
        s = lut.c1 * vn + lut.table[q];
    }
    return y;
}

std::vector<double> quantize_coeffs(const std::vector<double>& params, int bits) {
    if (params.empty()) throw std::invalid_argument("quantize_coeffs: empty parameter list");
    if (bits < 2) throw std::invalid_argument("quantize_coeffs: bits must be at least 2");
    double maxabs = 0.0;
    for (double p : params) maxabs = std::max(maxabs, std::abs(p));
    if (maxabs == 0.0) return params;

    int e = 0;
    const double m = std::frexp(maxabs, &e);  // maxabs = m * 2^e, m in [0.5, 1)
    const double scale = (m == 0.5) ? std::ldexp(1.0, e - 1) : std::ldexp(1.0, e);
    const double step = std::ldexp(scale, 1 - bits);

    std::vector<double> out(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        double q = step * std::round(params[i] / step);
        if (q == 0.0) q = 0.0;  // normalize -0.0
        out[i] = q;
    }
    return out;
}

OpCount complexity_count(Method method, int N) {
    if (N < 1) throw std::invalid_argument("complexity_count: N must be at least 1");
    switch (method) {
        case Method::Hammerstein: return {2L * N + 1, static_cast<long>(N) + 1};
        case Method::Branch: return {static_cast<long>(N) + 1, 2L * N + 1};
        case Method::Lut: return {1, 1};
    }
    throw std::invalid_argument("complexity_count: unknown method");
}

Signal apply_linearizer(const LinearizerVariant& lin, const Signal& v) {
    return std::visit(
        [&](const auto& l) -> Signal {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, BranchLinearizer>)
                return apply_branch(l, v);
            else if constexpr (std::is_same_v<T, LutLinearizer>)
                return apply_lut(l, v);
            else
                return apply_hammerstein(l, v);
        },
        lin);
}

} // namespace adclin
