// harness.hpp - seeded Monte Carlo experiments over the full link
//
// Each experiment expands into a list of (point, trial) cells. Cells get
// independent RNG streams derived from the master seed, run on a small
// worker pool, and land in preallocated slots, so the aggregated CSV is
// byte-identical for any thread count.
//
// CSV contract (one row per point x estimator x design):
//   experiment,snr_db,position_m,antenna_id,estimator,pilot_design,
//   trials,metric_name,metric_value,seed

#pragma once

#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "coherence.hpp"
#include "config.hpp"
#include "estimate.hpp"
#include "geometry.hpp"
#include "ofdm.hpp"
#include "pilot.hpp"
#include "system_params.hpp"

namespace hstsim {

struct ResultRow {
    std::string experiment;
    double snr_db = 0.0;
    double position_m = 0.0;
    int antenna_id = 0;
    std::string estimator;
    std::string pilot_design;
    int trials = 0;
    std::string metric_name;
    double metric_value = 0.0;
    std::uint64_t seed = 0;
};

inline std::string csv_header() {
    return "experiment,snr_db,position_m,antenna_id,estimator,pilot_design,"
           "trials,metric_name,metric_value,seed";
}

inline std::string to_csv(const ResultRow& r) {
    char num[64];
    std::ostringstream out;
    auto fmt = [&num](double v) {
        std::snprintf(num, sizeof(num), "%.12g", v);
        return std::string(num);
    };
    out << r.experiment << ',' << fmt(r.snr_db) << ',' << fmt(r.position_m) << ','
        << r.antenna_id << ',' << r.estimator << ',' << r.pilot_design << ',' << r.trials << ','
        << r.metric_name << ',' << fmt(r.metric_value) << ',' << r.seed;
    return out.str();
}

struct ExperimentSpec {
    SystemParams params = derive(SystemParams{});
    SimOptions sim;
    double delta = 0.2;
    std::vector<std::string> estimators = {"ls", "bp", "omp"};
    std::vector<std::string> designs = {"equidistant", "exhaustive", "algorithm1"};
    int design_iterations = 200; // Algorithm-1 budget and exhaustive candidate count
    int threads = 1;
};

namespace detail {

// Run body(i) for i in [0, n) on spec.threads workers; results must go to
// preallocated slots inside body.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

inline std::vector<int> make_pattern(const std::string& design, const ExperimentSpec& spec) {
    const auto& p = spec.params;
    if (design == "equidistant") return equidistant_pattern(p.subcarriers, p.pilots);
    if (design == "exhaustive") {
        std::mt19937_64 rng(derive_seed(spec.sim.seed, 0xEAu, 0));
        return exhaustive_search(p, spec.delta, spec.design_iterations, rng).pattern;
    }
    if (design == "algorithm1") {
        std::mt19937_64 rng(derive_seed(spec.sim.seed, 0xA1u, 0));
        return design_pilot_pattern(equidistant_pattern(p.subcarriers, p.pilots), p, spec.delta,
                                    spec.design_iterations, rng)
            .pattern;
    }
    throw std::invalid_argument("unknown pilot design '" + design + "'");
}

inline EstimateResult run_estimator(const std::string& name, const MatrixXcd& a,
                                    const VectorXcd& y, const SystemParams& p,
                                    double noise_var) {
    if (name == "omp") return omp(a, y, {p.sparsity, 0.0});
    if (name == "bp")
        return bp(a, y, 1.1 * std::sqrt(static_cast<double>(a.rows()) * noise_var));
    if (name == "ls") return ls_estimate(a, y);
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

inline std::vector<int> random_bits(std::size_t n, std::mt19937_64& rng) {
    std::vector<int> bits(n);
    std::uniform_int_distribution<int> b(0, 1);
    for (auto& bit : bits) bit = b(rng);
    return bits;
}

} // namespace detail

// MSE of each estimator/design pair at the configured position, per antenna.
inline std::vector<ResultRow> run_mse_sweep(const ExperimentSpec& spec) {
    const auto& p = spec.params;
    const auto antennas = antenna_positions(spec.sim.position_m, p);

    std::map<std::string, std::vector<int>> patterns;
    for (const auto& d : spec.designs) patterns[d] = detail::make_pattern(d, spec);

    struct Cell { // one (snr, design) point, all trials, all estimators/antennas
        std::vector<double> sums; // estimator-major, antenna-minor
    };
    const int n_points = static_cast<int>(spec.sim.snr_db.size() * spec.designs.size());
    std::vector<Cell> cells(static_cast<std::size_t>(n_points));

    detail::parallel_for(n_points, spec.threads, [&](int idx) {
        const std::size_t si = static_cast<std::size_t>(idx) / spec.designs.size();
        const std::size_t di = static_cast<std::size_t>(idx) % spec.designs.size();
        const double snr_db = spec.sim.snr_db[si];
        const auto& w = patterns.at(spec.designs[di]);
        auto& cell = cells[static_cast<std::size_t>(idx)];
        cell.sums.assign(spec.estimators.size() * antennas.size(), 0.0);

        for (int trial = 0; trial < spec.sim.trials; ++trial) {
            std::mt19937_64 rng(derive_seed(spec.sim.seed, static_cast<std::uint64_t>(idx), trial));
            const auto sym = assemble_symbol(
                w, detail::random_bits(2 * static_cast<std::size_t>(p.subcarriers - p.pilots), rng), p);
            const auto meas = build_measurement(w, extract_pilots(sym.x, w), p);
            const double noise_var = std::pow(10.0, -snr_db / 10.0);

            for (std::size_t ai = 0; ai < antennas.size(); ++ai) {
                const int q_star = dominant_index_from_position(antennas[ai].alpha_m, p);
                const auto coeffs = synthesize_coefficients(p, q_star, spec.sim.leakage, rng);
                const auto rx = apply_channel(sym.x, channel_matrix(coeffs, p).h, snr_db, rng);
                const auto y_obs = extract_pilots(rx.y, receive_pattern(w, q_star, p));
                const VectorXcd truth = coeffs.c.segment(q_star * p.taps, p.taps);
                for (std::size_t ei = 0; ei < spec.estimators.size(); ++ei) {
                    const auto est =
                        detail::run_estimator(spec.estimators[ei], meas.a, y_obs, p, noise_var);
                    cell.sums[ei * antennas.size() + ai] += nmse(est.c_hat, truth);
                }
            }
        }
    });

    std::vector<ResultRow> rows;
    for (int idx = 0; idx < n_points; ++idx) {
        const std::size_t si = static_cast<std::size_t>(idx) / spec.designs.size();
        const std::size_t di = static_cast<std::size_t>(idx) % spec.designs.size();
        for (std::size_t ei = 0; ei < spec.estimators.size(); ++ei)
            for (std::size_t ai = 0; ai < antennas.size(); ++ai)
                rows.push_back({"mse-sweep", spec.sim.snr_db[si], spec.sim.position_m,
                                antennas[ai].antenna_id, spec.estimators[ei], spec.designs[di],
                                spec.sim.trials, "nmse",
                                cells[static_cast<std::size_t>(idx)].sums[ei * antennas.size() + ai] /
                                    spec.sim.trials,
                                spec.sim.seed});
    }
    return rows;
}

// MSE vs position for the proposed extraction and an oracle arm whose
// transmitted symbol is zero at the data subcarriers, single antenna.
inline std::vector<ResultRow> run_position_sweep(const ExperimentSpec& spec,
                                                 const std::vector<double>& positions) {
    const auto& p = spec.params;
    if (positions.empty()) throw std::invalid_argument("position grid is empty");
    const std::string design = spec.designs.empty() ? "algorithm1" : spec.designs.back();
    const auto w = detail::make_pattern(design, spec);
    const std::string estimator = spec.estimators.empty() ? "omp" : spec.estimators.back();

    struct Cell {
        double proposed = 0.0, oracle = 0.0;
    };
    const int n_points = static_cast<int>(positions.size() * spec.sim.snr_db.size());
    std::vector<Cell> cells(static_cast<std::size_t>(n_points));

    detail::parallel_for(n_points, spec.threads, [&](int idx) {
        const std::size_t pi = static_cast<std::size_t>(idx) / spec.sim.snr_db.size();
        const std::size_t si = static_cast<std::size_t>(idx) % spec.sim.snr_db.size();
        const double snr_db = spec.sim.snr_db[si];
        const double noise_var = std::pow(10.0, -snr_db / 10.0);
        const int q_star = dominant_index_from_position(positions[pi], p);
        auto& cell = cells[static_cast<std::size_t>(idx)];

        for (int trial = 0; trial < spec.sim.trials; ++trial) {
            std::mt19937_64 rng(derive_seed(spec.sim.seed, static_cast<std::uint64_t>(idx), trial));
            const auto coeffs = synthesize_coefficients(p, q_star, spec.sim.leakage, rng);
            const auto h = channel_matrix(coeffs, p);
            const VectorXcd truth = coeffs.c.segment(q_star * p.taps, p.taps);
            const auto v = receive_pattern(w, q_star, p);

            const auto sym = assemble_symbol(
                w, detail::random_bits(2 * static_cast<std::size_t>(p.subcarriers - p.pilots), rng), p);
            VectorXcd pilots_only = VectorXcd::Zero(p.subcarriers);
            for (int widx : w) pilots_only(widx) = sym.x(widx);

            // same noise draw for both arms
            VectorXcd noise(p.subcarriers);
            const double sigma = std::sqrt(noise_var);
            for (int i = 0; i < p.subcarriers; ++i) noise(i) = sigma * complex_gaussian(rng);

            const auto meas = build_measurement(w, extract_pilots(sym.x, w), p);
            const VectorXcd y_full = h.h * sym.x + noise;
            const VectorXcd y_oracle = h.h * pilots_only + noise;
            cell.proposed += nmse(
                detail::run_estimator(estimator, meas.a, extract_pilots(y_full, v), p, noise_var)
                    .c_hat,
                truth);
            cell.oracle += nmse(
                detail::run_estimator(estimator, meas.a, extract_pilots(y_oracle, v), p, noise_var)
                    .c_hat,
                truth);
        }
    });

    std::vector<ResultRow> rows;
    for (int idx = 0; idx < n_points; ++idx) {
        const std::size_t pi = static_cast<std::size_t>(idx) / spec.sim.snr_db.size();
        const std::size_t si = static_cast<std::size_t>(idx) % spec.sim.snr_db.size();
        const auto& cell = cells[static_cast<std::size_t>(idx)];
        rows.push_back({"position-sweep", spec.sim.snr_db[si], positions[pi], 0, estimator, design,
                        spec.sim.trials, "nmse", cell.proposed / spec.sim.trials, spec.sim.seed});
        rows.push_back({"position-sweep", spec.sim.snr_db[si], positions[pi], 0,
                        estimator + "+oracle-ici-free", design, spec.sim.trials, "nmse",
                        cell.oracle / spec.sim.trials, spec.sim.seed});
    }
    return rows;
}

// Full link BER with estimated and perfect CSI, ZF combining across antennas.
inline std::vector<ResultRow> run_ber_sweep(const ExperimentSpec& spec) {
    const auto& p = spec.params;
    const auto antennas = antenna_positions(spec.sim.position_m, p);
    const std::string design = spec.designs.empty() ? "algorithm1" : spec.designs.back();
    const auto w = detail::make_pattern(design, spec);
    const auto fl = fourier_taps(p.subcarriers, p.taps);

    std::vector<int> all_subcarriers(static_cast<std::size_t>(p.subcarriers));
    for (int i = 0; i < p.subcarriers; ++i) all_subcarriers[static_cast<std::size_t>(i)] = i;

    const int n_points = static_cast<int>(spec.sim.snr_db.size());
    struct Cell {
        std::vector<double> estimated; // per estimator
        double perfect = 0.0;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(n_points));

    detail::parallel_for(n_points, spec.threads, [&](int idx) {
        const double snr_db = spec.sim.snr_db[static_cast<std::size_t>(idx)];
        const double noise_var = std::pow(10.0, -snr_db / 10.0);
        auto& cell = cells[static_cast<std::size_t>(idx)];
        cell.estimated.assign(spec.estimators.size(), 0.0);

        for (int trial = 0; trial < spec.sim.trials; ++trial) {
            std::mt19937_64 rng(derive_seed(spec.sim.seed, static_cast<std::uint64_t>(idx), trial));
            const auto bits =
                detail::random_bits(2 * static_cast<std::size_t>(p.subcarriers - p.pilots), rng);
            const auto sym = assemble_symbol(w, bits, p);
            const auto meas = build_measurement(w, extract_pilots(sym.x, w), p);

            std::vector<ReceivedSymbol> rx;
            std::vector<int> q_stars;
            std::vector<VectorXcd> truths;
            std::vector<AntennaEstimate> perfect;
            for (const auto& ant : antennas) {
                const int q_star = dominant_index_from_position(ant.alpha_m, p);
                const auto coeffs = synthesize_coefficients(p, q_star, spec.sim.leakage, rng);
                rx.push_back(apply_channel(sym.x, channel_matrix(coeffs, p).h, snr_db, rng));
                q_stars.push_back(q_star);
                const VectorXcd truth = coeffs.c.segment(q_star * p.taps, p.taps);
                truths.push_back(truth);
                perfect.push_back({fl * truth, receive_pattern(all_subcarriers, q_star, p)});
            }

            auto demap = [&](const std::vector<AntennaEstimate>& est) {
                const VectorXcd xhat = zf_combine(rx, est);
                std::vector<std::complex<double>> data;
                data.reserve(sym.data_indices.size());
                for (int d : sym.data_indices) data.push_back(xhat(d));
                return ber(bits, qam4_demodulate(data));
            };

            cell.perfect += demap(perfect);
            for (std::size_t ei = 0; ei < spec.estimators.size(); ++ei) {
                std::vector<AntennaEstimate> estimated;
                for (std::size_t ai = 0; ai < antennas.size(); ++ai) {
                    const auto y_obs =
                        extract_pilots(rx[ai].y, receive_pattern(w, q_stars[ai], p));
                    const auto est = detail::run_estimator(spec.estimators[ei], meas.a, y_obs, p,
                                                           noise_var);
                    estimated.push_back(
                        {fl * est.c_hat, receive_pattern(all_subcarriers, q_stars[ai], p)});
                }
                cell.estimated[ei] += demap(estimated);
            }
        }
    });

    std::vector<ResultRow> rows;
    for (int idx = 0; idx < n_points; ++idx) {
        const double snr_db = spec.sim.snr_db[static_cast<std::size_t>(idx)];
        const auto& cell = cells[static_cast<std::size_t>(idx)];
        rows.push_back({"ber-sweep", snr_db, spec.sim.position_m, -1, "perfect-csi", design,
                        spec.sim.trials, "ber", cell.perfect / spec.sim.trials, spec.sim.seed});
        for (std::size_t ei = 0; ei < spec.estimators.size(); ++ei)
            rows.push_back({"ber-sweep", snr_db, spec.sim.position_m, -1, spec.estimators[ei],
                            design, spec.sim.trials, "ber", cell.estimated[ei] / spec.sim.trials,
                            spec.sim.seed});
    }
    return rows;
}

// ICI-to-signal power of naive vs permuted extraction across positions.
inline std::vector<ResultRow> run_ici_compare(const ExperimentSpec& spec,
                                              const std::vector<double>& positions) {
    const auto& p = spec.params;
    if (positions.empty()) throw std::invalid_argument("position grid is empty");
    const std::string design = spec.designs.empty() ? "algorithm1" : spec.designs.back();
    const auto w = detail::make_pattern(design, spec);

    struct Cell {
        double naive = 0.0, permuted = 0.0;
    };
    const int n_points = static_cast<int>(positions.size());
    std::vector<Cell> cells(static_cast<std::size_t>(n_points));

    detail::parallel_for(n_points, spec.threads, [&](int idx) {
        const int q_star = dominant_index_from_position(positions[static_cast<std::size_t>(idx)], p);
        auto& cell = cells[static_cast<std::size_t>(idx)];
        for (int trial = 0; trial < spec.sim.trials; ++trial) {
            std::mt19937_64 rng(derive_seed(spec.sim.seed, static_cast<std::uint64_t>(idx), trial));
            const auto coeffs = synthesize_coefficients(p, q_star, spec.sim.leakage, rng);
            const auto sym = assemble_symbol(
                w, detail::random_bits(2 * static_cast<std::size_t>(p.subcarriers - p.pilots), rng), p);
            const auto rx =
                apply_channel(sym.x, channel_matrix(coeffs, p).h, 0.0, rng, /*noiseless=*/true);
            const auto meas = build_measurement(w, extract_pilots(sym.x, w), p);
            const VectorXcd clean = meas.a * coeffs.c.segment(q_star * p.taps, p.taps);
            const double signal = clean.squaredNorm();
            cell.naive += (naive_extract(rx.y, w) - clean).squaredNorm() / signal;
            cell.permuted +=
                (extract_pilots(rx.y, receive_pattern(w, q_star, p)) - clean).squaredNorm() /
                signal;
        }
    });

    std::vector<ResultRow> rows;
    for (int idx = 0; idx < n_points; ++idx) {
        const double pos = positions[static_cast<std::size_t>(idx)];
        const auto& cell = cells[static_cast<std::size_t>(idx)];
        rows.push_back({"ici-compare", 0.0, pos, 0, "naive-extract", design, spec.sim.trials,
                        "ici_to_signal", cell.naive / spec.sim.trials, spec.sim.seed});
        rows.push_back({"ici-compare", 0.0, pos, 0, "permuted-extract", design, spec.sim.trials,
                        "ici_to_signal", cell.permuted / spec.sim.trials, spec.sim.seed});
    }
    return rows;
}

inline std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) out += to_csv(r) + "\n";
    return out;
}

} // namespace hstsim
