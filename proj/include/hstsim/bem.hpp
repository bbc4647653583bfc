// bem.hpp - complex-exponential basis expansion model of the channel
//
// Each tap's time variation over one OFDM symbol is expanded on Q+1
// complex exponentials b_q[k] = exp(j 2pi k (q - Q/2) / K). In the DFT
// domain each basis turns into an exact circular-shift permutation, so
// the K x K frequency channel is strictly banded with bandwidth Q+1:
//
//   H = sum_q P_{q - Q/2} diag(F_L c_q),
//
// with F_L the first L columns of sqrt(K) F and c_q the q-th coefficient
// block. When all power sits on one index q* the channel collapses to a
// single permuted diagonal.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "rng.hpp"
#include "system_params.hpp"

namespace hstsim {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Unitary DFT: F[m,n] = K^{-1/2} exp(-j 2pi m n / K).
inline MatrixXcd dft_matrix(int k) {
    MatrixXcd f(k, k);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (int m = 0; m < k; ++m)
        for (int n = 0; n < k; ++n) {
            const double phase = -2.0 * std::numbers::pi * m * n / k;
            f(m, n) = std::polar(scale, phase);
        }
    return f;
}

// Rows of sqrt(K) F restricted to the first L columns: entries e^{-j2pi k l / K}.
inline MatrixXcd fourier_taps(int k, int l) {
    MatrixXcd fl(k, l);
    for (int row = 0; row < k; ++row)
        for (int col = 0; col < l; ++col)
            fl(row, col) = std::polar(1.0, -2.0 * std::numbers::pi * row * col / k);
    return fl;
}

// Circular shift permutation: P_s[m, n] = 1 iff m == n + s (mod K).
inline MatrixXcd shift_permutation(int k, int s) {
    MatrixXcd p = MatrixXcd::Zero(k, k);
    for (int n = 0; n < k; ++n) p((((n + s) % k) + k) % k, n) = 1.0;
    return p;
}

inline VectorXcd ce_basis(int k, int order, int q) {
    if (q < 0 || q > order) throw std::invalid_argument("basis index out of [0, Q]");
    VectorXcd b(k);
    const double shift = q - order / 2.0;
    for (int n = 0; n < k; ++n)
        b(n) = std::polar(1.0, 2.0 * std::numbers::pi * n * shift / k);
    return b;
}

// Frequency-domain basis D_q = F diag(b_q) F^H, computed numerically.
// Equals shift_permutation(K, q - Q/2) up to roundoff; tests pin this.
inline MatrixXcd basis_freq(int k, int order, int q) {
    const MatrixXcd f = dft_matrix(k);
    return f * ce_basis(k, order, q).asDiagonal() * f.adjoint();
}

struct BemCoefficients {
    VectorXcd c;              // length L(Q+1), c[q*L + l] = c(q, l)
    int q_star = 0;
    std::vector<int> support; // dominant tap indices, sorted
    double leakage = 0.0;     // rho
    int taps = 0;             // L
    int order = 0;            // Q
};

// Draw an S-sparse coefficient vector: dominant power on index q_star,
// optional fraction rho of total power leaked onto the other indices.
// Normalized to unit energy.
inline BemCoefficients synthesize_coefficients(const SystemParams& p, int q_star, double rho,
                                               std::mt19937_64& rng) {
    if (q_star < 0 || q_star > p.bem_order)
        throw std::invalid_argument("q_star out of [0, Q]");
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("leakage rho must be in [0, 1)");

    BemCoefficients out;
    out.q_star = q_star;
    out.leakage = rho;
    out.taps = p.taps;
    out.order = p.bem_order;
    out.c = VectorXcd::Zero(static_cast<Eigen::Index>(p.taps) * (p.bem_order + 1));

    // S tap positions, uniform without replacement
    std::vector<int> all(static_cast<std::size_t>(p.taps));
    for (int l = 0; l < p.taps; ++l) all[static_cast<std::size_t>(l)] = l;
    for (int i = 0; i < p.sparsity; ++i) {
        std::uniform_int_distribution<int> pick(i, p.taps - 1);
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
    }
    out.support.assign(all.begin(), all.begin() + p.sparsity);
    std::sort(out.support.begin(), out.support.end());

    double dominant_power = 0.0;
    for (int l : out.support) {
        auto z = complex_gaussian(rng);
        out.c(q_star * p.taps + l) = z;
        dominant_power += std::norm(z);
    }

    if (rho > 0.0) {
        // non-dominant power totals rho/(1-rho) of the dominant power
        double leak_power = 0.0;
        std::vector<std::complex<double>> draws;
        for (int q = 0; q <= p.bem_order; ++q) {
            if (q == q_star) continue;
            for (int l : out.support) {
                auto z = complex_gaussian(rng);
                draws.push_back(z);
                leak_power += std::norm(z);
            }
        }
        const double target = dominant_power * rho / (1.0 - rho);
        const double scale = leak_power > 0.0 ? std::sqrt(target / leak_power) : 0.0;
        std::size_t i = 0;
        for (int q = 0; q <= p.bem_order; ++q) {
            if (q == q_star) continue;
            for (int l : out.support) out.c(q * p.taps + l) = draws[i++] * scale;
        }
    }

    out.c /= out.c.norm();
    return out;
}

struct ChannelMatrix {
    MatrixXcd h;   // K x K
    int order = 0; // band parameter Q
};

// H = sum_q P_{q - Q/2} diag(F_L c_q), built by writing shifted diagonals.
inline ChannelMatrix channel_matrix(const BemCoefficients& coeffs, const SystemParams& p) {
    const int k = p.subcarriers;
    const int l = coeffs.taps;
    const int order = coeffs.order;
    if (coeffs.c.size() != static_cast<Eigen::Index>(l) * (order + 1))
        throw std::invalid_argument("coefficient vector length != L(Q+1)");

    const MatrixXcd fl = fourier_taps(k, l);
    ChannelMatrix out{MatrixXcd::Zero(k, k), order};
    for (int q = 0; q <= order; ++q) {
        const VectorXcd block = coeffs.c.segment(static_cast<Eigen::Index>(q) * l, l);
        if (block.isZero(0.0)) continue;
        const VectorXcd gain = fl * block;
        const int s = q - order / 2;
        for (int n = 0; n < k; ++n) out.h((((n + s) % k) + k) % k, n) += gain(n);
    }
    return out;
}

// Time-domain taps h(k, l) = sum_q b_q[k] c(q, l); layout h[k*L + l].
// Independent oracle for channel_matrix.
inline VectorXcd time_domain_taps(const BemCoefficients& coeffs, const SystemParams& p) {
    const int k = p.subcarriers;
    const int l = coeffs.taps;
    VectorXcd h = VectorXcd::Zero(static_cast<Eigen::Index>(k) * l);
    for (int q = 0; q <= coeffs.order; ++q) {
        const VectorXcd b = ce_basis(k, coeffs.order, q);
        for (int n = 0; n < k; ++n)
            for (int tap = 0; tap < l; ++tap)
                h(static_cast<Eigen::Index>(n) * l + tap) += b(n) * coeffs.c(q * l + tap);
    }
    return h;
}

inline std::pair<MatrixXcd, MatrixXcd> ici_split(const ChannelMatrix& ch) {
    MatrixXcd free = ch.h.diagonal().asDiagonal();
    return {free, ch.h - free};
}

} // namespace hstsim
