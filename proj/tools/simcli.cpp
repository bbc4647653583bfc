// simcli - Monte Carlo experiments for position-based ICI elimination and
// low-coherence pilot design in high-mobility SIMO-OFDM.
//
// Subcommands: design-pilot, mse-sweep, ber-sweep, position-sweep,
// ici-compare. Each writes its outputs (results.csv / pattern.txt /
// run.json, optional SVG charts) into --out.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <hstsim/harness.hpp>
#include <hstsim/svg.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hstsim;

namespace {

struct CliState {
    std::string config_path;
    std::string out_dir = "out";
    double delta = 0.2;
    int iterations = 200;
    int threads = 1;
    bool svg = false;
    // optional overrides of the [sim] section
    std::int64_t seed_override = -1;
    int trials_override = -1;
    // position grid (position-sweep, ici-compare)
    double from = 0.0, to = -1.0, step = 100.0;
};

ExperimentSpec make_spec(const CliState& cli) {
    std::string text;
    if (!cli.config_path.empty()) {
        std::ifstream in(cli.config_path);
        if (!in) throw std::runtime_error("cannot open config file " + cli.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    ExperimentSpec spec;
    spec.params = load_config(text);
    spec.sim = load_sim_options(text);
    spec.delta = cli.delta;
    spec.design_iterations = cli.iterations;
    spec.threads = cli.threads;
    if (cli.seed_override >= 0) spec.sim.seed = static_cast<std::uint64_t>(cli.seed_override);
    if (cli.trials_override >= 0) spec.sim.trials = cli.trials_override;
    return spec;
}

std::vector<double> position_grid(const CliState& cli, const SystemParams& p) {
    const double to = cli.to >= 0.0 ? cli.to : 2.0 * p.half_span_m;
    if (cli.step <= 0.0) throw std::runtime_error("--step must be positive");
    std::vector<double> grid;
    for (double a = cli.from; a <= to + 1e-9; a += cli.step) grid.push_back(std::min(a, to));
    if (grid.empty()) throw std::runtime_error("empty position grid");
    return grid;
}

json spec_to_json(const ExperimentSpec& spec, const std::string& experiment) {
    const auto& p = spec.params;
    return json{{"experiment", experiment},
                {"system",
                 {{"k", p.subcarriers},
                  {"p", p.pilots},
                  {"l", p.taps},
                  {"s", p.sparsity},
                  {"gamma", p.gamma}}},
                {"radio",
                 {{"carrier_hz", p.carrier_hz},
                  {"bandwidth_hz", p.bandwidth_hz},
                  {"packet_duration_s", p.packet_duration_s}}},
                {"geometry",
                 {{"d_max_m", p.d_max_m},
                  {"d_min_m", p.d_min_m},
                  {"bs_range_m", p.bs_range_m},
                  {"train_length_m", p.train_length_m},
                  {"speed_kmh", p.speed_mps * 3.6},
                  {"antennas", p.antennas}}},
                {"derived",
                 {{"doppler_max_hz", p.doppler_max_hz},
                  {"bem_order", p.bem_order},
                  {"normalized_doppler", p.normalized_doppler},
                  {"half_span_m", p.half_span_m}}},
                {"sim",
                 {{"trials", spec.sim.trials},
                  {"seed", spec.sim.seed},
                  {"snr_db", spec.sim.snr_db},
                  {"leakage", spec.sim.leakage},
                  {"position_m", spec.sim.position_m}}},
                {"delta", spec.delta},
                {"design_iterations", spec.design_iterations},
                {"estimators", spec.estimators},
                {"designs", spec.designs},
                {"threads", spec.threads}};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_common(const CliState& cli, const ExperimentSpec& spec, const std::string& experiment,
                  const std::vector<ResultRow>& rows) {
    fs::create_directories(cli.out_dir);
    write_file(fs::path(cli.out_dir) / "results.csv", rows_to_csv(rows));
    write_file(fs::path(cli.out_dir) / "run.json", spec_to_json(spec, experiment).dump(2) + "\n");
    std::cout << rows.size() << " rows -> " << (fs::path(cli.out_dir) / "results.csv").string()
              << "\n";
}

// one polyline per (estimator, design), x from the chosen column
void write_svg(const CliState& cli, const std::vector<ResultRow>& rows, const std::string& name,
               bool by_position) {
    if (!cli.svg || rows.empty()) return;
    std::map<std::string, SvgSeries> series;
    for (const auto& r : rows) {
        const std::string key = r.estimator + " / " + r.pilot_design +
                                (r.antenna_id > 0 ? " / ant" + std::to_string(r.antenna_id) : "");
        auto& s = series[key];
        s.label = key;
        s.x.push_back(by_position ? r.position_m : r.snr_db);
        s.y.push_back(r.metric_value);
    }
    std::vector<SvgSeries> list;
    for (auto& [k, s] : series) list.push_back(std::move(s));
    const std::string metric = rows.front().metric_name;
    write_file(fs::path(cli.out_dir) / (name + ".svg"),
               svg_line_chart(name, by_position ? "position [m]" : "SNR [dB]", metric, list));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-mobility SIMO-OFDM channel estimation simulator"};
    app.require_subcommand(1);

    CliState cli;
    app.add_option("--config", cli.config_path, "INI config file");
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--seed", cli.seed_override, "override [sim] seed");
    app.add_option("--trials", cli.trials_override, "override [sim] trials");
    app.add_option("--delta", cli.delta, "coherence threshold delta in (0,1)");
    app.add_option("--iterations", cli.iterations, "pattern search budget (Iter)");
    app.add_option("--threads", cli.threads, "worker threads");
    app.add_flag("--svg", cli.svg, "also write SVG charts");

    auto* design = app.add_subcommand("design-pilot", "search a low-coherence pilot pattern");
    auto* mse = app.add_subcommand("mse-sweep", "estimator MSE vs SNR");
    auto* ber = app.add_subcommand("ber-sweep", "link BER vs SNR with ZF combining");
    auto* pos = app.add_subcommand("position-sweep", "estimator MSE vs train position");
    auto* ici = app.add_subcommand("ici-compare", "naive vs permuted pilot ICI power");
    for (auto* sub : {pos, ici}) {
        sub->add_option("--from", cli.from, "first position [m]");
        sub->add_option("--to", cli.to, "last position [m], default 2D");
        sub->add_option("--step", cli.step, "grid step [m]");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto spec = make_spec(cli);
        fs::create_directories(cli.out_dir);

        if (design->parsed()) {
            const auto& p = spec.params;
            std::mt19937_64 rng(derive_seed(spec.sim.seed, 0xA1u, 0));
            const auto w0 = equidistant_pattern(p.subcarriers, p.pilots);
            const auto res =
                design_pilot_pattern(w0, p, spec.delta, spec.design_iterations, rng);

            std::string pattern_txt;
            for (int idx : res.pattern) pattern_txt += std::to_string(idx) + "\n";
            write_file(fs::path(cli.out_dir) / "pattern.txt", pattern_txt);

            std::string log_csv = "m,mu,accepted\n";
            for (const auto& step : res.log) {
                char line[64];
                std::snprintf(line, sizeof(line), "%d,%.12g,%d\n", step.m, step.mu,
                              step.accepted ? 1 : 0);
                log_csv += line;
            }
            write_file(fs::path(cli.out_dir) / "design_log.csv", log_csv);
            write_file(fs::path(cli.out_dir) / "run.json",
                       spec_to_json(spec, "design-pilot").dump(2) + "\n");
            std::cout << "mu_delta: " << pattern_coherence(w0, p.subcarriers, p.taps, spec.delta)
                      << " -> " << res.mu << ", pattern -> "
                      << (fs::path(cli.out_dir) / "pattern.txt").string() << "\n";
        } else if (mse->parsed()) {
            const auto rows = run_mse_sweep(spec);
            write_common(cli, spec, "mse-sweep", rows);
            write_svg(cli, rows, "mse-sweep", false);
        } else if (ber->parsed()) {
            const auto rows = run_ber_sweep(spec);
            write_common(cli, spec, "ber-sweep", rows);
            write_svg(cli, rows, "ber-sweep", false);
        } else if (pos->parsed()) {
            auto pspec = spec;
            pspec.sim.snr_db = {15.0, 30.0};
            const auto rows = run_position_sweep(pspec, position_grid(cli, spec.params));
            write_common(cli, pspec, "position-sweep", rows);
            write_svg(cli, rows, "position-sweep", true);
        } else if (ici->parsed()) {
            const auto rows = run_ici_compare(spec, position_grid(cli, spec.params));
            write_common(cli, spec, "ici-compare", rows);
            write_svg(cli, rows, "ici-compare", true);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
