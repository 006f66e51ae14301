#pragma once

#include <adclin/linearizer.hpp>
#include <adclin/signal.hpp>

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace adclin {

// Pairs (x_r, v_r): clean reference and distorted observation, equal lengths.
struct TrainingSet {
    std::vector<std::pair<Signal, Signal>> pairs;
};

struct DesignConfig {
    double lambda = 2e-4;
    int N = 32;
    ActivationKind activation = ActivationKind::OneBit;
    std::vector<double> bmax_grid;  // baseline sweep only
    int coeff_bits = 12;
};

struct DesignReport {
    double lambda = 0.0;
    int order = 0;  // N for branch designs, K for Hammerstein
    ActivationKind activation = ActivationKind::OneBit;
    std::optional<double> chosen_bmax;
    double mse_before = 0.0;  // training MSE of the uncorrected signal
    double mse_after = 0.0;   // training MSE of the unquantized solution
    double residual_norm = 0.0;
    double rhs_norm = 0.0;
};

// L x (N+2) matrix: columns 1..N hold f_m(v(n) + b_m), column N+1 holds v,
// column N+2 holds ones.
Eigen::MatrixXd build_regressor(const Signal& v, const std::vector<double>& biases,
                                ActivationKind activation);

// Solves (lambda*I + (1/RL) sum A_r' A_r) w = (1/RL) sum A_r' (x_r - v_r)
// for w = (w_1..w_N, dc1, c0); guarantees ||A w - b|| <= 1e-10 ||b||.
Eigen::VectorXd solve_ridge(const TrainingSet& training, const DesignConfig& config,
                            const std::vector<double>& biases);

// One-bit design: predetermined lut_biases schedule, a single ridge solve,
// c1 = 1 + dc1, coefficients quantized to config.coeff_bits.
BranchLinearizer design_onebit(const TrainingSet& training, const DesignConfig& config,
                               DesignReport* report = nullptr);

// ReLU/modulus baseline: one ridge solve per b_max in config.bmax_grid with
// uniform_biases(N, b_max); the design with the lowest training MSE wins.
BranchLinearizer design_branch_sweep(const TrainingSet& training, const DesignConfig& config,
                                     DesignReport* report = nullptr);

// Polynomial fit y = v + dd1*v + sum_{k>=2} d_k v^k + d0, same ridge solve;
// returns d with d1 = 1 + dd1.
HammersteinLinearizer design_hammerstein(const TrainingSet& training, int K, double lambda,
                                         int coeff_bits, DesignReport* report = nullptr);

// Instrumentation: number of normal-equation solves performed.
long solve_count();
void reset_solve_count();

} // namespace adclin
