#include <adclin/linearizer.hpp>
#include <adclin/rng.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

using namespace adclin;

namespace {

BranchLinearizer demo_branch() {
    BranchLinearizer lin;
    lin.c0 = 0.1;
    lin.c1 = 1.0;
    lin.biases = lut_biases(4);
    lin.weights = {0.2, 0.3, 0.4, 0.5};
    lin.activation = ActivationKind::OneBit;
    return lin;
}

} // namespace

TEST_CASE("activation values") {
    CHECK(activation_eval(ActivationKind::OneBit, 0.0, 0.0) == 1.0);  // the tie fires
    CHECK(activation_eval(ActivationKind::OneBit, -1e-300, 0.0) == 0.0);
    CHECK(activation_eval(ActivationKind::OneBit, 0.4, -0.5) == 0.0);
    CHECK(activation_eval(ActivationKind::ReLU, -0.5, 0.2) == 0.0);
    CHECK(activation_eval(ActivationKind::ReLU, 0.5, 0.2) == 0.7);
    CHECK(activation_eval(ActivationKind::Modulus, -0.5, 0.2) == doctest::Approx(0.3));
    CHECK(activation_eval(ActivationKind::Modulus, 0.5, 0.2) == 0.7);
}

TEST_CASE("lut bias schedule") {
    CHECK(lut_biases(1) == std::vector<double>{0.0});
    // Frozen doubles of -1 + 2m/(N+1).
    const std::vector<double> b4 = lut_biases(4);
    CHECK(b4[0] == -0.6);
    CHECK(b4[1] == -0.19999999999999996);
    CHECK(b4[2] == 0.19999999999999996);
    CHECK(b4[3] == 0.6000000000000001);
    for (int N : {2, 5, 16, 32, 33}) {
        const std::vector<double> b = lut_biases(N);
        REQUIRE(static_cast<int>(b.size()) == N);
        for (std::size_t m = 1; m < b.size(); ++m) CHECK(b[m] > b[m - 1]);
        // Largest bias is (N-1)/(N+1); symmetric about zero.
        CHECK(b.back() == doctest::Approx((N - 1.0) / (N + 1.0)).epsilon(1e-15));
        CHECK(b.front() == doctest::Approx(-(N - 1.0) / (N + 1.0)).epsilon(1e-15));
    }
    CHECK_THROWS_AS((void)lut_biases(0), std::invalid_argument);
}

TEST_CASE("uniform bias schedule") {
    const std::vector<double> b = uniform_biases(5, 0.8);
    REQUIRE(b.size() == 5);
    CHECK(b[0] == -0.8);
    CHECK(b[1] == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(b[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b[3] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(b[4] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS((void)uniform_biases(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)uniform_biases(4, 0.0), std::invalid_argument);
}

TEST_CASE("branch output hits frozen values") {
    const BranchLinearizer lin = demo_branch();
    Signal v;
    v.samples = {0.2, -0.5, 0.0, 1.0, -1.0};
    const Signal y = apply_branch(lin, v);
    // Frozen from the exact ascending fold; note v = 0.2 still fires branch 2
    // because the double b_2 lands just below 0.2.
    CHECK(y.samples[0] == 1.5);
    CHECK(y.samples[1] == 0.09999999999999998);
    CHECK(y.samples[2] == 1.0);
    CHECK(y.samples[3] == 2.5);
    CHECK(y.samples[4] == -0.9);
}

TEST_CASE("branch output agrees with the reversed-fold oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        BranchLinearizer lin;
        const int N = 1 + static_cast<int>(rng.uniform01() * 32.0);
        lin.biases = lut_biases(N);
        lin.weights.resize(static_cast<std::size_t>(N));
        for (double& w : lin.weights) w = rng.uniform(-0.1, 0.1);
        lin.c0 = rng.uniform(-0.1, 0.1);
        lin.c1 = 1.0 + rng.uniform(-0.05, 0.05);
        lin.activation = static_cast<ActivationKind>(trial % 3);

        Signal v;
        v.samples.resize(256);
        for (double& s : v.samples) s = rng.uniform(-1.0, 1.0);
        const Signal y = apply_branch(lin, v);
        const std::vector<double> ref = oracle::branch(lin, v.samples);
        for (std::size_t i = 0; i < v.samples.size(); ++i)
            CHECK(y.samples[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
}

TEST_CASE("hammerstein applies the polynomial") {
    HammersteinLinearizer h;
    h.d = {0.25, 1.0, -0.5, 0.125};
    Signal v;
    v.samples = {0.0, 1.0, -2.0, 0.5};
    const Signal y = apply_hammerstein(h, v);
    CHECK(y.samples[0] == 0.25);
    CHECK(y.samples[1] == 0.875);            // 0.25 + 1 - 0.5 + 0.125
    CHECK(y.samples[2] == -4.75);            // 0.25 - 2 - 2 - 1
    CHECK(y.samples[3] == 0.640625);         // 0.25 + 0.5 - 0.125 + 0.015625
    HammersteinLinearizer bad;
    bad.d = {1.0};
    CHECK_THROWS_AS((void)apply_hammerstein(bad, v), std::invalid_argument);
}

TEST_CASE("lut construction folds the table in branch order") {
    const LutLinearizer lut = build_lut(demo_branch());
    REQUIRE(lut.table.size() == 5);
    CHECK(lut.c1 == 1.0);
    // u_q = c0 + w_{N-q+1} + .. + w_N, folded ascending.
    CHECK(lut.table[0] == 0.1);
    CHECK(lut.table[1] == 0.6);
    CHECK(lut.table[2] == 1.0);
    CHECK(lut.table[3] == 1.3);
    CHECK(lut.table[4] == 1.5);
}

TEST_CASE("lut rejects non-lut branch linearizers") {
    BranchLinearizer relu = demo_branch();
    relu.activation = ActivationKind::ReLU;
    CHECK_THROWS_AS((void)build_lut(relu), std::invalid_argument);

    BranchLinearizer off_schedule = demo_branch();
    off_schedule.biases = uniform_biases(4, 0.6);
    CHECK_THROWS_AS((void)build_lut(off_schedule), std::invalid_argument);

    BranchLinearizer mismatched = demo_branch();
    mismatched.weights.pop_back();
    CHECK_THROWS_AS((void)build_lut(mismatched), std::invalid_argument);
}

TEST_CASE("lut addressing counts firing branches") {
    CHECK(lut_address(-1.0, 4) == 0);
    CHECK(lut_address(1.0, 4) == 4);
    CHECK(lut_address(0.0, 7) == 4);  // b_4 = 0 exactly, and the tie fires
    CHECK(lut_address(0.2, 4) == 3);
    CHECK(lut_address(-0.7, 4) == 0);
    CHECK_THROWS_AS((void)lut_address(1.5, 4), std::invalid_argument);
}

TEST_CASE("branch and lut agree bit for bit on the lut schedule") {
    const BranchLinearizer lin = demo_branch();
    const LutLinearizer lut = build_lut(lin);
    Signal v;
    for (int i = -1000; i <= 1000; ++i) v.samples.push_back(i / 1000.0);
    const Signal yb = apply_branch(lin, v);
    const Signal yl = apply_lut(lut, v);
    CHECK(yb.samples == yl.samples);
}

TEST_CASE("lut first differences recover quantized weights exactly") {
    // On the shared dyadic grid of quantize_coeffs every partial sum is
    // exact, so adjacent table entries differ by exactly one weight.
    BranchLinearizer lin;
    lin.biases = lut_biases(6);
    std::vector<double> params = {0.013, -0.021, 0.008, 0.017, -0.004, 0.011, 0.002, -0.009};
    const std::vector<double> q = quantize_coeffs(params, 12);
    lin.weights.assign(q.begin(), q.begin() + 6);
    lin.c1 = 1.0 + q[6];
    lin.c0 = q[7];
    const LutLinearizer lut = build_lut(lin);
    for (int qi = 1; qi <= 6; ++qi)
        CHECK(lut.table[static_cast<std::size_t>(qi)] -
                  lut.table[static_cast<std::size_t>(qi - 1)] ==
              lin.weights[static_cast<std::size_t>(6 - qi)]);
}

TEST_CASE("coefficient quantization uses one power-of-two scale") {
    // max = 0.7 -> scale 1, step 2^-3.
    const std::vector<double> q1 = quantize_coeffs({0.3, -0.7}, 4);
    CHECK(q1[0] == 0.25);
    CHECK(q1[1] == -0.75);
    // Exact power of two stays put: scale 0.5, not 1.
    const std::vector<double> q2 = quantize_coeffs({0.5}, 3);
    CHECK(q2[0] == 0.5);
    // 12-bit grid.
    const std::vector<double> q3 = quantize_coeffs({0.1, 0.03, -0.2}, 12);
    CHECK(q3[0] == 0.0999755859375);
    CHECK(q3[1] == 0.030029296875);
    CHECK(q3[2] == -0.199951171875);
    // All zeros pass through; negative zero is normalized away.
    const std::vector<double> q4 = quantize_coeffs({0.0, 0.0}, 8);
    CHECK(q4 == std::vector<double>{0.0, 0.0});
    const std::vector<double> q5 = quantize_coeffs({1.0, -1e-300}, 8);
    CHECK(q5[1] == 0.0);
    CHECK_FALSE(std::signbit(q5[1]));
    CHECK_THROWS_AS((void)quantize_coeffs({}, 8), std::invalid_argument);
    CHECK_THROWS_AS((void)quantize_coeffs({1.0}, 1), std::invalid_argument);
}

TEST_CASE("complexity counts") {
    CHECK(complexity_count(Method::Hammerstein, 4) == OpCount{9, 5});
    CHECK(complexity_count(Method::Branch, 4) == OpCount{5, 9});
    CHECK(complexity_count(Method::Lut, 4) == OpCount{1, 1});
    CHECK(complexity_count(Method::Lut, 64) == OpCount{1, 1});
    CHECK_THROWS_AS((void)complexity_count(Method::Lut, 0), std::invalid_argument);
}

TEST_CASE("linearizer variant dispatch") {
    Signal v;
    v.samples = {0.25, -0.25};
    const LinearizerVariant identity = BranchLinearizer{};
    CHECK(apply_linearizer(identity, v).samples == v.samples);

    const LinearizerVariant lut = build_lut(demo_branch());
    const LinearizerVariant branch = demo_branch();
    CHECK(apply_linearizer(lut, v).samples == apply_linearizer(branch, v).samples);

    HammersteinLinearizer h;
    h.d = {0.0, 2.0};
    const LinearizerVariant ham = h;
    CHECK(apply_linearizer(ham, v).samples == std::vector<double>{0.5, -0.5});
}

TEST_CASE("branch linearizer validation") {
    BranchLinearizer bad = demo_branch();
    bad.biases = {0.0, 0.0, 0.1, 0.2};
    CHECK_THROWS_AS((void)apply_branch(bad, Signal{}), std::invalid_argument);
    bad = demo_branch();
    bad.weights.resize(2);
    CHECK_THROWS_AS((void)apply_branch(bad, Signal{}), std::invalid_argument);

    LutLinearizer tiny;
    tiny.table = {0.0};
    Signal v;
    v.samples = {0.5};
    CHECK_THROWS_AS((void)apply_lut(tiny, v), std::invalid_argument);
    LutLinearizer ok;
    ok.table = {0.0, 0.0};
    Signal wild;
    wild.samples = {1.5};
    CHECK_THROWS_AS((void)apply_lut(ok, wild), std::invalid_argument);
}
