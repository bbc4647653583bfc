// estimate.hpp - sparse recovery of the dominant coefficient vector
//
// Three estimators over the P x L system y = A c:
//   omp  - greedy atom selection with least-squares refit per iteration
//   bp   - l1 recovery (basis-pursuit denoising via FISTA with lambda
//          continuation down to the residual target) plus LS debias on
//          the detected support
//   ls   - minimum-norm least squares, the dense baseline

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bem.hpp"
#include "system_params.hpp"

namespace hstsim {

struct EstimateResult {
    VectorXcd c_hat;          // length L
    std::vector<int> support; // sorted recovered indices
    double residual_norm = 0.0;
    int iterations = 0;
    bool degraded = false; // early stop / non-convergence flag
};

namespace detail {

inline VectorXcd ls_on_support(const MatrixXcd& a, const VectorXcd& y,
                               const std::vector<int>& support) {
    MatrixXcd sub(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = a.col(support[i]);
    const VectorXcd coeffs = sub.colPivHouseholderQr().solve(y);
    VectorXcd c = VectorXcd::Zero(a.cols());
    for (std::size_t i = 0; i < support.size(); ++i) c(support[i]) = coeffs(static_cast<Eigen::Index>(i));
    return c;
}

} // namespace detail

struct OmpStop {
    int max_atoms = 0;          // 0: no sparsity cap
    double residual_tol = 0.0;  // stop when ||r|| <= tol
};

inline EstimateResult omp(const MatrixXcd& a, const VectorXcd& y, OmpStop stop) {
    const Eigen::Index ncols = a.cols();
    Eigen::VectorXd col_norms(ncols);
    for (Eigen::Index j = 0; j < ncols; ++j) {
        col_norms(j) = a.col(j).norm();
        if (col_norms(j) == 0.0) throw std::invalid_argument("omp: zero column");
    }
    const int max_atoms =
        stop.max_atoms > 0 ? std::min<int>(stop.max_atoms, static_cast<int>(std::min(a.rows(), ncols)))
                           : static_cast<int>(std::min(a.rows(), ncols));

    EstimateResult res;
    res.c_hat = VectorXcd::Zero(ncols);
    VectorXcd residual = y;
    std::vector<char> picked(static_cast<std::size_t>(ncols), 0);
    while (static_cast<int>(res.support.size()) < max_atoms &&
           residual.norm() > stop.residual_tol) {
        // best atom by normalized correlation
        int best = -1;
        double best_corr = 0.0;
        for (Eigen::Index j = 0; j < ncols; ++j) {
            if (picked[static_cast<std::size_t>(j)]) continue;
            const double corr = std::abs(a.col(j).dot(residual)) / col_norms(j);
            if (corr > best_corr) {
                best_corr = corr;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) {
            res.degraded = true;
            break;
        }
        picked[static_cast<std::size_t>(best)] = 1;
        res.support.push_back(best);
        res.c_hat = detail::ls_on_support(a, y, res.support);
        residual = y - a * res.c_hat;
        ++res.iterations;
    }
    std::sort(res.support.begin(), res.support.end());
    res.residual_norm = residual.norm();
    return res;
}

namespace detail {

inline double l1_objective(const MatrixXcd& a, const VectorXcd& y, const VectorXcd& c,
                           double lambda) {
    return 0.5 * (a * c - y).squaredNorm() + lambda * c.cwiseAbs().sum();
}

// Monotone FISTA on 0.5||Ac - y||^2 + lambda ||c||_1, fixed step 1/||A||_2^2.
// The accepted iterate never increases the composite objective.
inline VectorXcd fista(const MatrixXcd& a, const VectorXcd& y, double lambda, double lipschitz,
                       VectorXcd warm, int max_iter, double rel_tol, int& iters, bool& converged,
                       std::vector<double>* objective_trace = nullptr) {
    const double step = 1.0 / lipschitz;
    VectorXcd c = std::move(warm);
    VectorXcd z = c;
    double t = 1.0;
    double obj = l1_objective(a, y, c, lambda);
    converged = false;
    for (iters = 0; iters < max_iter; ++iters) {
        const VectorXcd grad = a.adjoint() * (a * z - y);
        VectorXcd prox = z - step * grad;
        const double threshold = step * lambda;
        for (Eigen::Index i = 0; i < prox.size(); ++i) {
            const double mag = std::abs(prox(i));
            prox(i) = mag > threshold ? prox(i) * ((mag - threshold) / mag)
                                      : std::complex<double>(0.0, 0.0);
        }
        const double prox_obj = l1_objective(a, y, prox, lambda);
        const VectorXcd next = prox_obj <= obj ? prox : c; // monotone safeguard
        const double next_obj = std::min(prox_obj, obj);

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = next + (t / t_next) * (prox - next) + ((t - 1.0) / t_next) * (next - c);
        const double change = (prox - c).norm(); // candidate movement, not the safeguarded one
        const double scale = std::max(next.norm(), 1e-30);
        c = next;
        obj = next_obj;
        t = t_next;
        if (objective_trace) objective_trace->push_back(obj);
        if (change / scale < rel_tol) {
            converged = true;
            break;
        }
    }
    return c;
}

} // namespace detail

inline EstimateResult bp(const MatrixXcd& a, const VectorXcd& y, double noise_level) {
    EstimateResult res;
    res.c_hat = VectorXcd::Zero(a.cols());
    if (y.norm() <= noise_level) { // origin already feasible
        res.residual_norm = y.norm();
        return res;
    }
    const double lipschitz = std::pow(a.operatorNorm(), 2);
    const double corr_max = (a.adjoint() * y).cwiseAbs().maxCoeff();
    if (corr_max == 0.0) {
        res.residual_norm = y.norm();
        return res;
    }

    // lambda continuation: start where the zero solution is optimal and halve
    // until the residual target is met, keeping the largest feasible lambda so
    // the support stays as sparse as the noise allows
    double lambda = corr_max;
    const double lambda_floor = 1e-10 * corr_max;
    const double target = std::max(noise_level, 1e-10 * y.norm());
    VectorXcd c = res.c_hat;
    bool converged = false;
    while (true) {
        int iters = 0;
        c = detail::fista(a, y, lambda, lipschitz, c, 10000, 1e-8, iters, converged);
        res.iterations += iters;
        if ((y - a * c).norm() <= target || lambda <= lambda_floor) break;
        lambda *= 0.5;
    }
    res.degraded = !converged;

    // LS debias on the detected support
    const double peak = c.cwiseAbs().maxCoeff();
    if (peak > 0.0) {
        for (Eigen::Index i = 0; i < c.size(); ++i)
            if (std::abs(c(i)) > 1e-6 * peak) res.support.push_back(static_cast<int>(i));
        if (!res.support.empty() &&
            static_cast<Eigen::Index>(res.support.size()) <= a.rows())
            res.c_hat = detail::ls_on_support(a, y, res.support);
        else
            res.c_hat = c;
    }
    res.residual_norm = (y - a * res.c_hat).norm();
    return res;
}

inline EstimateResult ls_estimate(const MatrixXcd& a, const VectorXcd& y) {
    EstimateResult res;
    res.c_hat = a.completeOrthogonalDecomposition().solve(y); // minimum-norm solution
    res.residual_norm = (y - a * res.c_hat).norm();
    res.iterations = 1;
    for (Eigen::Index i = 0; i < res.c_hat.size(); ++i)
        if (res.c_hat(i) != std::complex<double>(0.0, 0.0)) res.support.push_back(static_cast<int>(i));
    return res;
}

// Corollary-1 rebuild: H_hat = P_{q* - Q/2} diag(F_L c_hat).
inline ChannelMatrix reconstruct_channel(const VectorXcd& c_hat, int q_star,
                                         const SystemParams& p) {
    if (c_hat.size() != p.taps) throw std::invalid_argument("expected L coefficients");
    const VectorXcd gain = fourier_taps(p.subcarriers, p.taps) * c_hat;
    const int s = q_star - p.bem_order / 2;
    ChannelMatrix out{MatrixXcd::Zero(p.subcarriers, p.subcarriers), p.bem_order};
    for (int n = 0; n < p.subcarriers; ++n)
        out.h((((n + s) % p.subcarriers) + p.subcarriers) % p.subcarriers, n) = gain(n);
    return out;
}

inline double nmse(const VectorXcd& c_hat, const VectorXcd& c_true) {
    const double denom = c_true.squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("nmse: zero reference");
    return (c_hat - c_true).squaredNorm() / denom;
}

} // namespace hstsim
