#include <doctest.h>

#include <hstsim/geometry.hpp>
#include <hstsim/ofdm.hpp>
#include <hstsim/pilot.hpp>

using namespace hstsim;

namespace {

SystemParams make_params(int k, int p, int l, int s) {
    SystemParams sp;
    sp.subcarriers = k;
    sp.pilots = p;
    sp.taps = l;
    sp.sparsity = s;
    return derive(sp); // 500 km/h defaults -> Q = 4
}

std::vector<int> random_bits(std::size_t n, std::mt19937_64& rng) {
    std::vector<int> bits(n);
    std::uniform_int_distribution<int> b(0, 1);
    for (auto& bit : bits) bit = b(rng);
    return bits;
}

} // namespace

TEST_CASE("receive pattern is the mod-K shifted transmit pattern") {
    const auto p8 = make_params(8, 3, 2, 1);
    CHECK(receive_pattern({0, 3, 7}, 2, p8) == std::vector<int>{0, 3, 7}); // q* = Q/2
    CHECK(receive_pattern({0, 3, 7}, 4, p8) == std::vector<int>{2, 5, 1});
    const auto p512 = make_params(512, 40, 64, 5);
    CHECK(receive_pattern({0}, 0, p512) == std::vector<int>{510});
    CHECK_THROWS_AS(receive_pattern({0}, 5, p512), std::invalid_argument);
    CHECK_THROWS_AS(receive_pattern({0, 0}, 2, p512), std::invalid_argument);
}

TEST_CASE("shift additivity of repeated permutations") {
    const auto p = make_params(64, 8, 8, 3);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> q(0, p.bem_order);
    std::vector<int> w{3, 17, 31, 40, 59};
    for (int rep = 0; rep < 50; ++rep) {
        const int q1 = q(rng), q2 = q(rng);
        const auto twice = receive_pattern(receive_pattern(w, q1, p), q2, p);
        // composing shifts s1 + s2 equals one shift with q = q1 + q2 - Q/2 when in range
        const int combined = q1 + q2 - p.bem_order / 2;
        if (combined >= 0 && combined <= p.bem_order)
            REQUIRE(twice == receive_pattern(w, combined, p));
    }
}

TEST_CASE("extract_pilots is a plain gather") {
    VectorXcd y(8);
    for (int i = 0; i < 8; ++i) y(i) = static_cast<double>(i);
    const auto got = extract_pilots(y, {2, 5, 1});
    CHECK(got(0) == std::complex<double>(2.0));
    CHECK(got(1) == std::complex<double>(5.0));
    CHECK(got(2) == std::complex<double>(1.0));
    CHECK_THROWS_AS(extract_pilots(y, {8}), std::invalid_argument);
}

TEST_CASE("measurement matrix rows are pilot-scaled Fourier rows") {
    const auto p8 = make_params(8, 2, 2, 1);
    const auto unit = build_measurement({0}, VectorXcd::Ones(1), make_params(8, 2, 4, 1));
    CHECK((unit.a - MatrixXcd::Ones(1, 4)).cwiseAbs().maxCoeff() < 1e-15);

    const auto sys = build_measurement({2}, VectorXcd::Ones(1), p8);
    CHECK(std::abs(sys.a(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(sys.a(0, 1) - std::polar(1.0, -std::numbers::pi / 2.0)) < 1e-15);
    CHECK_THROWS_AS(build_measurement({2}, VectorXcd::Ones(2), p8), std::invalid_argument);
}

TEST_CASE("pilot amplitude does not change the normalized Gram") {
    const auto p = make_params(64, 8, 8, 3);
    std::vector<int> w{1, 9, 20, 33, 41, 52, 57, 63};
    const auto base = build_measurement(w, VectorXcd::Ones(8), p);
    const auto scaled = build_measurement(w, VectorXcd::Ones(8) * 3.0, p);
    auto normalized_gram = [](const MatrixXcd& m) {
        MatrixXcd n = m;
        for (Eigen::Index j = 0; j < n.cols(); ++j) n.col(j) /= n.col(j).norm();
        return MatrixXcd(n.adjoint() * n);
    };
    CHECK((normalized_gram(base.a) - normalized_gram(scaled.a)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("permutation restricted to (v, w) is the identity") {
    const auto p = make_params(64, 8, 8, 3);
    std::vector<int> w{1, 9, 20, 33, 41, 52, 57, 63};
    for (int q_star = 0; q_star <= p.bem_order; ++q_star) {
        const auto v = receive_pattern(w, q_star, p);
        const MatrixXcd perm = shift_permutation(64, q_star - p.bem_order / 2);
        MatrixXcd restricted(8, 8);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) restricted(i, j) = perm(v[i], w[j]);
        REQUIRE((restricted - MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("permuted extraction is exactly ICI-free; naive extraction is not") {
    const auto p = make_params(64, 8, 8, 3);
    std::mt19937_64 rng(9);
    std::vector<int> w{1, 9, 20, 33, 41, 52, 57, 63};
    for (int q_star = 0; q_star <= p.bem_order; ++q_star) {
        const auto c = synthesize_coefficients(p, q_star, 0.0, rng);
        const auto sym = assemble_symbol(w, random_bits(2 * (64 - 8), rng), p);
        const auto rx = apply_channel(sym.x, channel_matrix(c, p).h, 0.0, rng, true);
        const auto meas = build_measurement(w, extract_pilots(sym.x, w), p);
        const VectorXcd expected = meas.a * c.c.segment(q_star * p.taps, p.taps);

        const auto permuted = extract_pilots(rx.y, receive_pattern(w, q_star, p));
        REQUIRE((permuted - expected).cwiseAbs().maxCoeff() < 1e-10);

        const auto naive = naive_extract(rx.y, w);
        if (q_star == p.bem_order / 2) {
            REQUIRE((naive - permuted).norm() == 0.0);
        } else {
            REQUIRE((naive - expected).norm() > 1e-6);
        }
    }
}
