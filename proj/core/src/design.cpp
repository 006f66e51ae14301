#include <adclin/design.hpp>

#include <Eigen/Cholesky>

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adclin {

namespace {

std::atomic<long> g_solve_count{0};

double kahan_dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double term = a[i] * b[i] - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

void check_training(const TrainingSet& training) {
    if (training.pairs.empty())
        throw std::invalid_argument("design: training set needs at least one signal pair");
    const std::size_t L = training.pairs.front().first.size();
    if (L == 0) throw std::invalid_argument("design: empty training signals");
    for (const auto& [x, v] : training.pairs)
        if (x.size() != L || v.size() != L)
            throw std::invalid_argument("design: training signals must share one length");
}

// Solves (lambda I + (1/RL) sum A_r' A_r) w = (1/RL) sum A_r' t_r.
Eigen::VectorXd solve_normal(const std::vector<Eigen::MatrixXd>& regressors,
                             const std::vector<Eigen::VectorXd>& targets, double lambda,
                             double* residual_out, double* rhs_norm_out) {
    const Eigen::Index P = regressors.front().cols();
    const Eigen::Index L = regressors.front().rows();
    const std::size_t R = regressors.size();
    const double inv_rl = 1.0 / (static_cast<double>(R) * static_cast<double>(L));

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(P, P);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(P);
    for (std::size_t r = 0; r < R; ++r) {
        const Eigen::MatrixXd& Ar = regressors[r];
        const Eigen::VectorXd& tr = targets[r];
        for (Eigen::Index i = 0; i < P; ++i) {
            for (Eigen::Index j = i; j < P; ++j)
                A(i, j) += kahan_dot(Ar.col(i).data(), Ar.col(j).data(), Ar.rows());
            b(i) += kahan_dot(Ar.col(i).data(), tr.data(), Ar.rows());
        }
    }
    A *= inv_rl;
    b *= inv_rl;
    for (Eigen::Index i = 0; i < P; ++i) {
        A(i, i) += lambda;
        for (Eigen::Index j = i + 1; j < P; ++j) A(j, i) = A(i, j);
    }

    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(
            "design: normal equations are not positive definite; use lambda > 0");
    if (lambda == 0.0 && llt.rcond() < 1e-12)
        throw std::runtime_error(
            "design: system ill-conditioned at lambda = 0; use lambda > 0");

    Eigen::VectorXd w = llt.solve(b);
    const double b_norm = b.norm();
    const double tol = 1e-10 * b_norm;
    double residual = (A * w - b).norm();
    for (int pass = 0; pass < 3 && residual > tol; ++pass) {
        w += llt.solve(b - A * w);
        residual = (A * w - b).norm();
    }
    if (b_norm > 0.0 && residual > tol)
        throw std::runtime_error("design: solver residual exceeded 1e-10 * ||b||");

    ++g_solve_count;
    if (residual_out) *residual_out = residual;
    if (rhs_norm_out) *rhs_norm_out = b_norm;
    return w;
}

struct Assembled {
    std::vector<Eigen::MatrixXd> regressors;
    std::vector<Eigen::VectorXd> targets;
    double mse_before = 0.0;
};

Assembled assemble_branch(const TrainingSet& training, const std::vector<double>& biases,
                          ActivationKind activation) {
    Assembled out;
    double acc = 0.0;
    std::size_t total = 0;
    for (const auto& [x, v] : training.pairs) {
        out.regressors.push_back(build_regressor(v, biases, activation));
        Eigen::VectorXd t(v.size());
        for (std::size_t n = 0; n < v.size(); ++n) {
            t(static_cast<Eigen::Index>(n)) = x.samples[n] - v.samples[n];
            acc += (x.samples[n] - v.samples[n]) * (x.samples[n] - v.samples[n]);
        }
        out.targets.push_back(std::move(t));
        total += v.size();
    }
    out.mse_before = acc / static_cast<double>(total);
    return out;
}

double mse_after_solve(const Assembled& a, const Eigen::VectorXd& w) {
    double acc = 0.0;
    std::size_t total = 0;
    for (std::size_t r = 0; r < a.regressors.size(); ++r) {
        acc += (a.targets[r] - a.regressors[r] * w).squaredNorm();
        total += static_cast<std::size_t>(a.regressors[r].rows());
    }
    return acc / static_cast<double>(total);
}

} // namespace

Eigen::MatrixXd build_regressor(const Signal& v, const std::vector<double>& biases,
                                ActivationKind activation) {
    const Eigen::Index L = static_cast<Eigen::Index>(v.size());
    const Eigen::Index N = static_cast<Eigen::Index>(biases.size());
    Eigen::MatrixXd A(L, N + 2);
    for (Eigen::Index n = 0; n < L; ++n) {
        const double vn = v.samples[static_cast<std::size_t>(n)];
        for (Eigen::Index m = 0; m < N; ++m)
            A(n, m) = activation_eval(activation, vn, biases[static_cast<std::size_t>(m)]);
        A(n, N) = vn;
        A(n, N + 1) = 1.0;
    }
    return A;
}

Eigen::VectorXd solve_ridge(const TrainingSet& training, const DesignConfig& config,
                            const std::vector<double>& biases) {
    check_training(training);
    if (config.lambda < 0.0) throw std::invalid_argument("design: lambda must be nonnegative");
    Assembled a = assemble_branch(training, biases, config.activation);
    return solve_normal(a.regressors, a.targets, config.lambda, nullptr, nullptr);
}

BranchLinearizer design_onebit(const TrainingSet& training, const DesignConfig& config,
                               DesignReport* report) {
    check_training(training);
    if (config.activation != ActivationKind::OneBit)
        throw std::invalid_argument("design_onebit: activation must be OneBit");
    const std::vector<double> biases = lut_biases(config.N);

    Assembled a = assemble_branch(training, biases, ActivationKind::OneBit);
    double residual = 0.0, rhs_norm = 0.0;
    const Eigen::VectorXd w = solve_normal(a.regressors, a.targets, config.lambda, &residual,
                                           &rhs_norm);

    std::vector<double> params(w.data(), w.data() + w.size());
    const std::vector<double> q = quantize_coeffs(params, config.coeff_bits);

    BranchLinearizer lin;
    lin.activation = ActivationKind::OneBit;
    lin.biases = biases;
    lin.weights.assign(q.begin(), q.begin() + config.N);
    lin.c1 = 1.0 + q[static_cast<std::size_t>(config.N)];
    lin.c0 = q[static_cast<std::size_t>(config.N) + 1];

    if (report) {
        *report = DesignReport{config.lambda, config.N, ActivationKind::OneBit, std::nullopt,
                               a.mse_before, mse_after_solve(a, w), residual, rhs_norm};
    }
    return lin;
}

BranchLinearizer design_branch_sweep(const TrainingSet& training, const DesignConfig& config,
                                     DesignReport* report) {
    check_training(training);
    if (config.activation != ActivationKind::ReLU && config.activation != ActivationKind::Modulus)
        throw std::invalid_argument("design_branch_sweep: activation must be ReLU or Modulus");
    if (config.bmax_grid.empty())
        throw std::invalid_argument("design_branch_sweep: bmax_grid must be nonempty");

    double best_mse = std::numeric_limits<double>::infinity();
    double best_bmax = 0.0;
    Eigen::VectorXd best_w;
    double best_mse_before = 0.0, best_residual = 0.0, best_rhs = 0.0;

    for (double bmax : config.bmax_grid) {
        const std::vector<double> biases = uniform_biases(config.N, bmax);
        Assembled a = assemble_branch(training, biases, config.activation);
        double residual = 0.0, rhs_norm = 0.0;
        const Eigen::VectorXd w = solve_normal(a.regressors, a.targets, config.lambda, &residual,
                                               &rhs_norm);
        const double mse = mse_after_solve(a, w);
        if (mse < best_mse) {
            best_mse = mse;
            best_bmax = bmax;
            best_w = w;
            best_mse_before = a.mse_before;
            best_residual = residual;
            best_rhs = rhs_norm;
        }
    }

    std::vector<double> params(best_w.data(), best_w.data() + best_w.size());
    const std::vector<double> q = quantize_coeffs(params, config.coeff_bits);

    BranchLinearizer lin;
    lin.activation = config.activation;
    lin.biases = uniform_biases(config.N, best_bmax);
    lin.weights.assign(q.begin(), q.begin() + config.N);
    lin.c1 = 1.0 + q[static_cast<std::size_t>(config.N)];
    lin.c0 = q[static_cast<std::size_t>(config.N) + 1];

    if (report) {
        *report = DesignReport{config.lambda, config.N, config.activation, best_bmax,
                               best_mse_before, best_mse, best_residual, best_rhs};
    }
    return lin;
}

HammersteinLinearizer design_hammerstein(const TrainingSet& training, int K, double lambda,
                                         int coeff_bits, DesignReport* report) {
    check_training(training);
    if (K < 1) throw std::invalid_argument("design_hammerstein: K must be at least 1");

    // Columns v, v^2, .., v^K, 1 -> parameters (dd1, d2..dK, d0).
    std::vector<Eigen::MatrixXd> regressors;
    std::vector<Eigen::VectorXd> targets;
    double acc = 0.0;
    std::size_t total = 0;
    for (const auto& [x, v] : training.pairs) {
        const Eigen::Index L = static_cast<Eigen::Index>(v.size());
        Eigen::MatrixXd A(L, K + 1);
        Eigen::VectorXd t(L);
        for (Eigen::Index n = 0; n < L; ++n) {
            const double vn = v.samples[static_cast<std::size_t>(n)];
            double vp = 1.0;
            for (int k = 1; k <= K; ++k) {
                vp *= vn;
                A(n, k - 1) = vp;
            }
            A(n, K) = 1.0;
            t(n) = x.samples[static_cast<std::size_t>(n)] - vn;
            acc += t(n) * t(n);
        }
        regressors.push_back(std::move(A));
        targets.push_back(std::move(t));
        total += v.size();
    }

    double residual = 0.0, rhs_norm = 0.0;
    const Eigen::VectorXd w = solve_normal(regressors, targets, lambda, &residual, &rhs_norm);

    std::vector<double> params(w.data(), w.data() + w.size());
    const std::vector<double> q = quantize_coeffs(params, coeff_bits);

    HammersteinLinearizer h;
    h.d.resize(K + 1);
    h.d[0] = q[static_cast<std::size_t>(K)];
    h.d[1] = 1.0 + q[0];
    for (int k = 2; k <= K; ++k) h.d[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(k - 1)];

    if (report) {
        double mse_after = 0.0;
        for (std::size_t r = 0; r < regressors.size(); ++r)
            mse_after += (targets[r] - regressors[r] * w).squaredNorm();
        mse_after /= static_cast<double>(total);
        *report = DesignReport{lambda, K, ActivationKind::OneBit, std::nullopt,
                               acc / static_cast<double>(total), mse_after, residual, rhs_norm};
    }
    return h;
}

long solve_count() { return g_solve_count.load(); }
void reset_solve_count() { g_solve_count.store(0); }

} // namespace adclin
