// coherence.hpp - average-coherence metric and pilot pattern search
//
// The design objective is the average coherence of the P x L partial
// Fourier dictionary F_L(w, :): column-normalize, take all off-diagonal
// |Gram| entries at or above delta, and average them (0 if none cross).
// The metric depends only on (K, P, L, delta) -- not on Doppler, position,
// antenna count, or the constant pilot amplitude -- so one pattern serves
// every antenna at every position.
//
// The search is a discrete stochastic approximation: per iteration one
// pilot index is replaced by a random free subcarrier, the move is kept
// only if it strictly lowers the coherence, and a state occupation
// probability vector (step size 1/(m+1)) tracks which accepted state to
// report as the final answer.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "bem.hpp"
#include "pilot.hpp"
#include "system_params.hpp"

namespace hstsim {

// F_L(w, :) for unit pilots: rows e^{-j 2pi w l / K}, l = 0..L-1.
inline MatrixXcd pilot_rows(int k, int l, const std::vector<int>& w) {
    MatrixXcd m(static_cast<Eigen::Index>(w.size()), l);
    for (std::size_t row = 0; row < w.size(); ++row)
        for (int col = 0; col < l; ++col)
            m(static_cast<Eigen::Index>(row), col) =
                std::polar(1.0, -2.0 * std::numbers::pi * w[row] * col / k);
    return m;
}

inline double average_coherence(const MatrixXcd& m, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0, 1)");
    MatrixXcd normalized = m;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double norm = m.col(j).norm();
        if (norm == 0.0) throw std::invalid_argument("average_coherence: zero column");
        normalized.col(j) /= norm;
    }
    const MatrixXcd gram = normalized.adjoint() * normalized;
    double sum = 0.0;
    long count = 0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j) {
            if (i == j) continue;
            const double g = std::abs(gram(i, j));
            if (g >= delta) {
                sum += g;
                ++count;
            }
        }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

inline double pattern_coherence(const std::vector<int>& w, int k, int l, double delta) {
    return average_coherence(pilot_rows(k, l, w), delta);
}

// Replace entry at slot with a uniformly random subcarrier not already in w.
inline std::vector<int> perturb(const std::vector<int>& w, std::size_t slot, int k,
                                std::mt19937_64& rng) {
    if (slot >= w.size()) throw std::invalid_argument("perturb: slot out of range");
    if (static_cast<int>(w.size()) >= k) throw std::invalid_argument("perturb: no free subcarrier");
    // candidate must not appear anywhere in w, including the replaced slot
    std::vector<char> used(static_cast<std::size_t>(k), 0);
    for (int idx : w) used[static_cast<std::size_t>(idx)] = 1;
    std::uniform_int_distribution<int> pick(0, k - 1);
    int candidate = pick(rng);
    while (used[static_cast<std::size_t>(candidate)]) candidate = pick(rng);
    std::vector<int> out = w;
    out[slot] = candidate;
    std::sort(out.begin(), out.end());
    return out;
}

struct DesignIterLog {
    int m = 0;
    double mu = 0.0; // coherence of the accepted pattern after iteration m
    bool accepted = false;
};

struct DesignResult {
    std::vector<int> pattern; // w* = w_hat^(MP)
    double mu = 0.0;
    std::vector<DesignIterLog> log;
};

// Iter must be a multiple of P; M = Iter / P outer rounds.
inline DesignResult design_pilot_pattern(const std::vector<int>& w0, const SystemParams& p,
                                         double delta, int iterations, std::mt19937_64& rng) {
    const int npilots = static_cast<int>(w0.size());
    if (npilots == 0) throw std::invalid_argument("empty initial pattern");
    if (iterations % npilots != 0)
        throw std::invalid_argument("iteration budget must be a multiple of P");
    validate_pattern(w0, p.subcarriers);

    const int total = iterations; // M*P
    std::vector<int> current = w0;
    std::vector<int> best = w0;
    double current_mu = pattern_coherence(current, p.subcarriers, p.taps, delta);

    // occupation probabilities over states 0..MP; state 0 is w0
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(total + 1);
    gamma(0) = 1.0;
    int kappa = 0; // last accepted state
    int iota = 0;  // state the reported pattern follows

    DesignResult out;
    out.log.reserve(static_cast<std::size_t>(total));
    for (int m = 0; m < total; ++m) {
        const std::size_t slot = static_cast<std::size_t>(m % npilots);
        const auto candidate = perturb(current, slot, p.subcarriers, rng);
        const double candidate_mu = pattern_coherence(candidate, p.subcarriers, p.taps, delta);
        bool accepted = candidate_mu < current_mu; // strict; ties rejected
        if (accepted) {
            current = candidate;
            current_mu = candidate_mu;
            kappa = m + 1;
        }
        // Gamma[m+1] = Gamma[m] + (1/(m+1)) (U[m+1] - Gamma[m]), where U[m+1]
        // marks the state the walk currently occupies. Occupation mass then
        // accumulates on states the walk stays in, so the reported pattern
        // tracks long-lived (low-coherence) states.
        const double eta = 1.0 / (m + 1);
        gamma *= (1.0 - eta);
        gamma(kappa) += eta;
        if (gamma(kappa) > gamma(iota)) {
            best = current;
            iota = kappa;
        }
        out.log.push_back({m, current_mu, accepted});
    }
    out.pattern = best;
    out.mu = pattern_coherence(best, p.subcarriers, p.taps, delta);
    return out;
}

inline std::vector<int> equidistant_pattern(int k, int npilots) {
    if (npilots > k) throw std::invalid_argument("more pilots than subcarriers");
    std::vector<int> w(static_cast<std::size_t>(npilots));
    for (int i = 0; i < npilots; ++i)
        w[static_cast<std::size_t>(i)] = static_cast<int>(static_cast<long>(i) * k / npilots);
    return w;
}

inline std::vector<int> random_pattern(int k, int npilots, std::mt19937_64& rng) {
    std::vector<int> all(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) all[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < npilots; ++i) {
        std::uniform_int_distribution<int> pick(i, k - 1);
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<int> w(all.begin(), all.begin() + npilots);
    std::sort(w.begin(), w.end());
    return w;
}

// Baseline: best of n uniformly random patterns.
inline DesignResult exhaustive_search(const SystemParams& p, double delta, int n_candidates,
                                      std::mt19937_64& rng) {
    if (n_candidates < 1) throw std::invalid_argument("need at least one candidate");
    DesignResult out;
    out.mu = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_candidates; ++i) {
        auto w = random_pattern(p.subcarriers, p.pilots, rng);
        const double mu = pattern_coherence(w, p.subcarriers, p.taps, delta);
        if (mu < out.mu) {
            out.mu = mu;
            out.pattern = std::move(w);
        }
    }
    return out;
}

} // namespace hstsim
