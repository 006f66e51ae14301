#pragma once

#include <adclin/signal.hpp>

#include <cstddef>
#include <variant>
#include <vector>

namespace adclin {

enum class ActivationKind { OneBit, ReLU, Modulus };

// OneBit -> 1 if v + b >= 0 else 0 (the tie fires); ReLU -> max(0, v + b);
// Modulus -> |v + b|.
double activation_eval(ActivationKind kind, double v, double b);

// y = c0 + c1*v + sum_m w_m * f_m(v + b_m), biases strictly increasing.
struct BranchLinearizer {
    double c0 = 0.0;
    double c1 = 1.0;
    std::vector<double> biases;
    std::vector<double> weights;
    ActivationKind activation = ActivationKind::OneBit;

    int N() const { return static_cast<int>(biases.size()); }
};

// y = c1*v + u_q with q the sub-region address of v; table holds u_0..u_N.
struct LutLinearizer {
    double c1 = 1.0;
    std::vector<double> table;

    int N() const { return static_cast<int>(table.size()) - 1; }
};

// y = d0 + d1*v + sum_{k=2}^{K} d_k*v^k; d holds d_0..d_K.
struct HammersteinLinearizer {
    std::vector<double> d;

    int K() const { return static_cast<int>(d.size()) - 1; }
};

// b_m = -1 + 2m/(N+1), m = 1..N: the schedule that splits [-1, 1] into N+1
// equal sub-regions and makes the LUT realization valid. b_N = (N-1)/(N+1).
std::vector<double> lut_biases(int N);

// Baseline schedule b_m = -b_max + 2(m-1)*b_max/(N-1); requires N >= 2.
std::vector<double> uniform_biases(int N, double b_max);

Signal apply_branch(const BranchLinearizer& lin, const Signal& v);
Signal apply_hammerstein(const HammersteinLinearizer& h, const Signal& v);

// Requires OneBit activation and the lut_biases schedule. Each u_q is folded
// in the same ascending order apply_branch uses, so the two realizations
// agree bit for bit.
LutLinearizer build_lut(const BranchLinearizer& lin);

// q = |{m : v + b_m >= 0}| with b_m = lut_biases(N); v must lie in [-1, 1].
int lut_address(double v, int N);

Signal apply_lut(const LutLinearizer& lut, const Signal& v);

// Round each value to the nearest multiple of 2^(1-bits)*S, half away from
// zero, with S the smallest power of two >= max|value| (one shared scale).
std::vector<double> quantize_coeffs(const std::vector<double>& params, int bits);

enum class Method { Hammerstein, Branch, Lut };

struct OpCount {
    long mults = 0;
    long adds = 0;
    bool operator==(const OpCount&) const = default;
};

// Per-output-sample datapath cost: Hammerstein (2N+1, N+1) with N = K-1,
// Branch (N+1, 2N+1), Lut (1, 1).
OpCount complexity_count(Method method, int N);

using LinearizerVariant = std::variant<BranchLinearizer, LutLinearizer, HammersteinLinearizer>;

Signal apply_linearizer(const LinearizerVariant& lin, const Signal& v);

} // namespace adclin
