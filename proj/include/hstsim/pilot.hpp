// pilot.hpp - permuted pilot extraction and the sparse measurement system
//
// With the channel in its permuted-diagonal form, the pilot sent on
// subcarrier w_p arrives untouched at v_p = (w_p + q* - Q/2) mod K:
// gathering the received symbol at v instead of w yields ICI-free
// observations y_obs = A c* with A[p, l] = x(w_p) e^{-j 2pi w_p l / K},
// no guard pilots required. The transmit pattern is shared by all
// antennas; only the gather indices differ per antenna.

#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bem.hpp"
#include "system_params.hpp"

namespace hstsim {

struct PilotPattern {
    std::vector<int> tx; // w, distinct indices in [0, K)
};

inline void validate_pattern(const std::vector<int>& w, int k) {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    for (int idx : w) {
        if (idx < 0 || idx >= k) throw std::invalid_argument("pilot index out of [0, K)");
        if (seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("duplicate pilot index " + std::to_string(idx));
        seen[static_cast<std::size_t>(idx)] = 1;
    }
}

// v_p = (w_p + q* - Q/2) mod K
inline std::vector<int> receive_pattern(const std::vector<int>& w, int q_star,
                                        const SystemParams& p) {
    if (q_star < 0 || q_star > p.bem_order)
        throw std::invalid_argument("q_star out of [0, Q]");
    validate_pattern(w, p.subcarriers);
    const int k = p.subcarriers;
    const int s = q_star - p.bem_order / 2;
    std::vector<int> v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = (((w[i] + s) % k) + k) % k;
    return v;
}

inline VectorXcd extract_pilots(const VectorXcd& y, const std::vector<int>& v) {
    VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] >= y.size()) throw std::invalid_argument("gather index out of range");
        out(static_cast<Eigen::Index>(i)) = y(v[i]);
    }
    return out;
}

// Baseline that skips the permutation; exposes the ICI term.
inline VectorXcd naive_extract(const VectorXcd& y, const std::vector<int>& w) {
    return extract_pilots(y, w);
}

struct MeasurementSystem {
    MatrixXcd a; // P x L
};

// A = diag(x(w)) F_L(w, :)
inline MeasurementSystem build_measurement(const std::vector<int>& w,
                                           const VectorXcd& pilot_symbols,
                                           const SystemParams& p) {
    validate_pattern(w, p.subcarriers);
    if (pilot_symbols.size() != static_cast<Eigen::Index>(w.size()))
        throw std::invalid_argument("pilot symbol count != pattern size");
    MeasurementSystem sys;
    sys.a.resize(static_cast<Eigen::Index>(w.size()), p.taps);
    for (std::size_t row = 0; row < w.size(); ++row)
        for (int col = 0; col < p.taps; ++col)
            sys.a(static_cast<Eigen::Index>(row), col) =
                pilot_symbols(static_cast<Eigen::Index>(row)) *
                std::polar(1.0, -2.0 * std::numbers::pi * w[row] * col / p.subcarriers);
    return sys;
}

} // namespace hstsim
