#include <doctest.h>

#include <set>

#include <hstsim/coherence.hpp>
#include <hstsim/estimate.hpp>
#include <hstsim/pilot.hpp>
#include <hstsim/rng.hpp>

using namespace hstsim;

namespace {

VectorXcd sparse_vector(int len, int s, std::mt19937_64& rng) {
    VectorXcd c = VectorXcd::Zero(len);
    std::vector<int> idx(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < s; ++i) {
        std::uniform_int_distribution<int> pick(i, len - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
        c(idx[static_cast<std::size_t>(i)]) = complex_gaussian(rng);
    }
    return c;
}

MatrixXcd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
    MatrixXcd a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = complex_gaussian(rng);
    return a;
}

std::vector<int> support_of(const VectorXcd& c, double tol = 1e-9) {
    std::vector<int> s;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (std::abs(c(i)) > tol) s.push_back(static_cast<int>(i));
    return s;
}

} // namespace

TEST_CASE("omp on the identity recovers a unit vector in one step") {
    VectorXcd y = VectorXcd::Zero(5);
    y(3) = 1.0;
    const auto res = omp(MatrixXcd::Identity(5, 5), y, {1, 0.0});
    CHECK(res.support == std::vector<int>{3});
    CHECK(res.iterations == 1);
    CHECK(res.residual_norm < 1e-14);
    CHECK(std::abs(res.c_hat(3) - 1.0) < 1e-14);
}

TEST_CASE("omp invariants: no repeats, orthogonal residuals") {
    std::mt19937_64 rng(1);
    const auto a = gaussian_matrix(20, 40, rng);
    const VectorXcd y = a * sparse_vector(40, 6, rng);
    const auto res = omp(a, y, {6, 0.0});
    std::set<int> distinct(res.support.begin(), res.support.end());
    CHECK(distinct.size() == res.support.size());
    const VectorXcd residual = y - a * res.c_hat;
    for (int j : res.support) CHECK(std::abs(a.col(j).dot(residual)) < 1e-10);
}

TEST_CASE("omp exact recovery on random Gaussian systems") {
    std::mt19937_64 rng(2);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = gaussian_matrix(20, 64, rng);
        const VectorXcd c = sparse_vector(64, 3, rng);
        const auto res = omp(a, a * c, {3, 0.0});
        if ((res.c_hat - c).norm() < 1e-8 && res.support == support_of(c)) ++hits;
    }
    CHECK(hits >= 99);
}

TEST_CASE("omp exact recovery at the reference scale with a designed pattern") {
    SystemParams p = derive(SystemParams{}); // K=512 P=40 L=64 S=5
    std::mt19937_64 rng(3);
    const auto design =
        design_pilot_pattern(equidistant_pattern(p.subcarriers, p.pilots), p, 0.2, 200, rng);
    const auto a = build_measurement(design.pattern, VectorXcd::Ones(p.pilots), p).a;
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const VectorXcd c = sparse_vector(p.taps, p.sparsity, rng);
        const auto res = omp(a, a * c, {p.sparsity, 0.0});
        if (nmse(res.c_hat, c) < 1e-10 && res.support == support_of(c)) ++hits;
    }
    CHECK(hits >= 99);
}

TEST_CASE("bp trivial cases") {
    std::mt19937_64 rng(4);
    const auto a = gaussian_matrix(10, 20, rng);
    const auto zero = bp(a, VectorXcd::Zero(10), 0.0);
    CHECK(zero.c_hat.norm() == 0.0);
    // noise level above ||y||: origin is feasible
    const VectorXcd y = a * sparse_vector(20, 2, rng);
    const auto lazy = bp(a, y, 2.0 * y.norm());
    CHECK(lazy.c_hat.norm() == 0.0);
}

TEST_CASE("bp matches omp and truth on a noiseless instance") {
    std::mt19937_64 rng(5);
    const auto a = gaussian_matrix(20, 64, rng);
    const VectorXcd c = sparse_vector(64, 3, rng);
    const VectorXcd y = a * c;
    const auto via_bp = bp(a, y, 0.0);
    const auto via_omp = omp(a, y, {3, 0.0});
    CHECK((via_bp.c_hat - c).norm() < 1e-4);
    CHECK(via_bp.support == via_omp.support);
}

TEST_CASE("bp proximal iterations never increase the composite objective") {
    std::mt19937_64 rng(9);
    const auto a = gaussian_matrix(20, 64, rng);
    const VectorXcd y = a * sparse_vector(64, 4, rng);
    const double lipschitz = std::pow(a.operatorNorm(), 2);
    const double lambda = 0.05 * (a.adjoint() * y).cwiseAbs().maxCoeff();
    std::vector<double> trace;
    int iters = 0;
    bool converged = false;
    detail::fista(a, y, lambda, lipschitz, VectorXcd::Zero(64), 2000, 1e-10, iters, converged,
                  &trace);
    REQUIRE(trace.size() > 1);
    for (std::size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] <= trace[i - 1] + 1e-12);
}

TEST_CASE("ls is exact when square and interpolating when underdetermined") {
    std::mt19937_64 rng(6);
    VectorXcd y(4);
    y << 1.0, 2.0, 3.0, 4.0;
    CHECK((ls_estimate(MatrixXcd::Identity(4, 4), y).c_hat - y).norm() < 1e-12);
    const auto a = gaussian_matrix(10, 30, rng);
    const VectorXcd y2 = a * sparse_vector(30, 3, rng);
    const auto res = ls_estimate(a, y2);
    CHECK((a * res.c_hat - y2).norm() < 1e-10);
}

TEST_CASE("ls is markedly worse than omp on sparse truth") {
    SystemParams p = derive(SystemParams{});
    std::mt19937_64 rng(7);
    const auto w = random_pattern(p.subcarriers, p.pilots, rng);
    const auto a = build_measurement(w, VectorXcd::Ones(p.pilots), p).a;
    double ls_err = 0.0, omp_err = 0.0;
    const double sigma = std::pow(10.0, -30.0 / 20.0); // 30 dB
    for (int trial = 0; trial < 50; ++trial) {
        const VectorXcd c = sparse_vector(p.taps, p.sparsity, rng);
        VectorXcd y = a * c;
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sigma * complex_gaussian(rng);
        ls_err += nmse(ls_estimate(a, y).c_hat, c);
        omp_err += nmse(omp(a, y, {p.sparsity, 0.0}).c_hat, c);
    }
    CHECK(ls_err > 10.0 * omp_err);
}

TEST_CASE("reconstructed channel equals the true channel for exact coefficients") {
    SystemParams p;
    p.subcarriers = 64;
    p.pilots = 8;
    p.taps = 8;
    p.sparsity = 3;
    p = derive(p);
    std::mt19937_64 rng(8);
    for (int q_star = 0; q_star <= p.bem_order; ++q_star) {
        const auto c = synthesize_coefficients(p, q_star, 0.0, rng);
        const auto truth = channel_matrix(c, p);
        const auto rebuilt = reconstruct_channel(c.c.segment(q_star * p.taps, p.taps), q_star, p);
        REQUIRE((truth.h - rebuilt.h).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(reconstruct_channel(VectorXcd::Zero(p.taps), 2, p).h.norm() == 0.0);
    // Frobenius error of the rebuild scales as K times the coefficient error
    const auto c = synthesize_coefficients(p, 2, 0.0, rng);
    VectorXcd chat = c.c.segment(2 * p.taps, p.taps);
    chat(0) += std::complex<double>(0.01, -0.02);
    const auto h_err = reconstruct_channel(chat, 2, p).h -
                       reconstruct_channel(c.c.segment(2 * p.taps, p.taps), 2, p).h;
    const VectorXcd delta = chat - c.c.segment(2 * p.taps, p.taps);
    CHECK(h_err.squaredNorm() ==
          doctest::Approx(p.subcarriers * delta.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("nmse definition") {
    VectorXcd c(2);
    c << 1.0, 1.0;
    CHECK(nmse(c, c) == 0.0);
    CHECK(nmse(VectorXcd::Zero(2), c) == doctest::Approx(1.0));
    CHECK(nmse(2.0 * c, c) == doctest::Approx(1.0));
    CHECK_THROWS_AS(nmse(c, VectorXcd::Zero(2)), std::invalid_argument);
}
