// ofdm.hpp - frequency-domain SIMO-OFDM link
//
// The primary simulation path works entirely in the DFT domain:
// y_r = H_r x + n_r per receive antenna. A time-domain IDFT/CP loopback
// is kept as a cross-validation oracle for the channel model.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "bem.hpp"
#include "rng.hpp"
#include "system_params.hpp"

namespace hstsim {

// Gray-mapped 4-QAM, unit average power:
// 00 -> (+1+j)/sqrt2, 01 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2, 10 -> (+1-j)/sqrt2.
// First bit selects the imaginary sign, second bit the real sign.
inline std::complex<double> qam4_point(int b0, int b1) {
    static constexpr double a = 0.70710678118654752440;
    return {b1 ? -a : a, b0 ? -a : a};
}

inline std::vector<std::complex<double>> qam4_modulate(const std::vector<int>& bits) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("qam4: odd bit count");
    std::vector<std::complex<double>> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = qam4_point(bits[2 * i], bits[2 * i + 1]);
    return out;
}

inline std::vector<int> qam4_demodulate(const std::vector<std::complex<double>>& symbols) {
    std::vector<int> bits(symbols.size() * 2);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const auto z = symbols[i];
        bits[2 * i] = z.imag() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = z.real() < 0.0 ? 1 : 0;
    }
    return bits;
}

struct OfdmSymbol {
    VectorXcd x;                    // length K
    std::vector<int> pilot_indices; // w
    std::vector<int> data_indices;  // complement of w, ascending
    std::vector<int> bits;          // source bits, 2 per data subcarrier
};

// Pilots carry amplitude 1, phase 0; data subcarriers carry 4-QAM.
inline OfdmSymbol assemble_symbol(const std::vector<int>& pilot_indices,
                                  const std::vector<int>& data_bits, const SystemParams& p) {
    const int k = p.subcarriers;
    std::vector<char> is_pilot(static_cast<std::size_t>(k), 0);
    for (int w : pilot_indices) {
        if (w < 0 || w >= k) throw std::invalid_argument("pilot index out of range");
        if (is_pilot[static_cast<std::size_t>(w)])
            throw std::invalid_argument("duplicate pilot index " + std::to_string(w));
        is_pilot[static_cast<std::size_t>(w)] = 1;
    }
    OfdmSymbol sym;
    sym.pilot_indices = pilot_indices;
    sym.bits = data_bits;
    sym.x = VectorXcd::Zero(k);
    for (int i = 0; i < k; ++i)
        if (!is_pilot[static_cast<std::size_t>(i)]) sym.data_indices.push_back(i);
    if (data_bits.size() != 2 * sym.data_indices.size())
        throw std::invalid_argument("need 2 bits per data subcarrier");
    for (int w : pilot_indices) sym.x(w) = 1.0;
    const auto data = qam4_modulate(data_bits);
    for (std::size_t i = 0; i < data.size(); ++i) sym.x(sym.data_indices[i]) = data[i];
    return sym;
}

struct ReceivedSymbol {
    VectorXcd y;
    double snr_db = 0.0;
    double noise_var = 0.0; // per complex entry
};

inline ReceivedSymbol apply_channel(const VectorXcd& x, const MatrixXcd& h, double snr_db,
                                    std::mt19937_64& rng, bool noiseless = false) {
    if (h.rows() != x.size() || h.cols() != x.size())
        throw std::invalid_argument("channel/symbol dimension mismatch");
    ReceivedSymbol r;
    r.snr_db = snr_db;
    r.noise_var = noiseless ? 0.0 : std::pow(10.0, -snr_db / 10.0);
    r.y = h * x;
    if (!noiseless) {
        const double sigma = std::sqrt(r.noise_var);
        for (Eigen::Index i = 0; i < r.y.size(); ++i) r.y(i) += sigma * complex_gaussian(rng);
    }
    return r;
}

inline std::vector<ReceivedSymbol> apply_channel(const VectorXcd& x,
                                                 const std::vector<ChannelMatrix>& channels,
                                                 double snr_db, std::mt19937_64& rng,
                                                 bool noiseless = false) {
    std::vector<ReceivedSymbol> out;
    out.reserve(channels.size());
    for (const auto& ch : channels) out.push_back(apply_channel(x, ch.h, snr_db, rng, noiseless));
    return out;
}

// IDFT -> CP insert -> per-sample time-varying circular-tap convolution ->
// CP strip -> DFT. Noiseless; exists to cross-check the banded model.
inline ReceivedSymbol time_domain_loopback(const VectorXcd& x, const BemCoefficients& coeffs,
                                           const SystemParams& p, int cp_length = -1) {
    const int k = p.subcarriers;
    const int l = coeffs.taps;
    if (cp_length < 0) cp_length = p.taps;
    if (cp_length < l - 1) throw std::invalid_argument("CP shorter than L-1");

    // time-domain transmit sequence with CP
    const MatrixXcd f = dft_matrix(k);
    const VectorXcd xt = f.adjoint() * x;
    std::vector<std::complex<double>> tx(static_cast<std::size_t>(cp_length + k));
    for (int n = 0; n < cp_length; ++n) tx[static_cast<std::size_t>(n)] = xt((k - cp_length + n) % k);
    for (int n = 0; n < k; ++n) tx[static_cast<std::size_t>(cp_length + n)] = xt(n);

    // tap value at symbol-relative time n (may be negative inside the CP)
    auto tap = [&](int n, int lag) {
        std::complex<double> h = 0.0;
        for (int q = 0; q <= coeffs.order; ++q) {
            const double shift = q - coeffs.order / 2.0;
            h += std::polar(1.0, 2.0 * std::numbers::pi * n * shift / k) * coeffs.c(q * l + lag);
        }
        return h;
    };

    VectorXcd rx(k);
    for (int n = 0; n < k; ++n) {
        std::complex<double> acc = 0.0;
        for (int lag = 0; lag < l; ++lag) acc += tap(n, lag) * tx[static_cast<std::size_t>(cp_length + n - lag)];
        rx(n) = acc;
    }
    ReceivedSymbol r;
    r.snr_db = std::numeric_limits<double>::infinity();
    r.noise_var = 0.0;
    r.y = f * rx;
    return r;
}

// Per-subcarrier maximum-ratio ZF across antennas. Each estimated channel
// is a permuted diagonal: gain g_r(k) on transmit subcarrier k received at
// index v_r(k) = (k + q*_r - Q/2) mod K.
struct AntennaEstimate {
    VectorXcd gain;          // length K, diag(F_L c_hat)
    std::vector<int> rx_map; // v_r over all K subcarriers
};

inline VectorXcd zf_combine(const std::vector<ReceivedSymbol>& received,
                            const std::vector<AntennaEstimate>& estimates) {
    if (received.empty() || received.size() != estimates.size())
        throw std::invalid_argument("zf_combine: antenna count mismatch");
    const Eigen::Index k = received[0].y.size();
    VectorXcd xhat = VectorXcd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        std::complex<double> num = 0.0;
        double den = 0.0;
        for (std::size_t r = 0; r < estimates.size(); ++r) {
            const auto g = estimates[r].gain(i);
            num += std::conj(g) * received[r].y(estimates[r].rx_map[static_cast<std::size_t>(i)]);
            den += std::norm(g);
        }
        xhat(i) = den > 0.0 ? num / den : 0.0; // all-zero gain: erasure, demaps to 00
    }
    return xhat;
}

inline double ber(const std::vector<int>& truth, const std::vector<int>& est) {
    if (truth.size() != est.size()) throw std::invalid_argument("ber: length mismatch");
    if (truth.empty()) return 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) errors += truth[i] != est[i];
    return static_cast<double>(errors) / static_cast<double>(truth.size());
}

} // namespace hstsim
