// config.hpp - INI-style config loader
//
// Format: [section] headers, key = value lines, '#' or ';' comments.
// Missing keys keep their defaults; derive() runs before returning.

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "system_params.hpp"

namespace hstsim {

// [sim] section: Monte Carlo knobs not part of the physical setup.
struct SimOptions {
    int trials = 200;
    std::uint64_t seed = 1;
    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    double leakage = 0.0;     // rho
    double position_m = 200.0; // front-antenna alpha
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using IniMap = std::map<std::string, std::string>; // "section.key" -> value

inline IniMap parse_ini(const std::string& text) {
    IniMap out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        out[section + "." + key] = val;
    }
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
    }
}

inline void get(const IniMap& m, const std::string& key, double& field) {
    auto it = m.find(key);
    if (it != m.end()) field = to_double(key, it->second);
}
inline void get(const IniMap& m, const std::string& key, int& field) {
    auto it = m.find(key);
    if (it != m.end()) field = static_cast<int>(to_double(key, it->second));
}
inline void get(const IniMap& m, const std::string& key, std::uint64_t& field) {
    auto it = m.find(key);
    if (it != m.end()) field = static_cast<std::uint64_t>(to_double(key, it->second));
}
inline void get(const IniMap& m, const std::string& key, std::vector<double>& field) {
    auto it = m.find(key);
    if (it == m.end()) return;
    std::vector<double> vals;
    std::string item;
    std::istringstream ss(it->second);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) vals.push_back(to_double(key, item));
    }
    if (vals.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
    field = vals;
}

} // namespace detail

inline SystemParams load_config(const std::string& text) {
    auto ini = detail::parse_ini(text);
    SystemParams p;
    detail::get(ini, "system.k", p.subcarriers);
    detail::get(ini, "system.p", p.pilots);
    detail::get(ini, "system.l", p.taps);
    detail::get(ini, "system.s", p.sparsity);
    detail::get(ini, "system.gamma", p.gamma);
    detail::get(ini, "radio.carrier_hz", p.carrier_hz);
    detail::get(ini, "radio.bandwidth_hz", p.bandwidth_hz);
    detail::get(ini, "radio.packet_duration_s", p.packet_duration_s);
    detail::get(ini, "geometry.d_max_m", p.d_max_m);
    detail::get(ini, "geometry.d_min_m", p.d_min_m);
    detail::get(ini, "geometry.bs_range_m", p.bs_range_m);
    detail::get(ini, "geometry.train_length_m", p.train_length_m);
    detail::get(ini, "geometry.antennas", p.antennas);
    double speed_kmh = p.speed_mps * 3.6;
    detail::get(ini, "geometry.speed_kmh", speed_kmh);
    p.speed_mps = speed_kmh / 3.6;
    return derive(p);
}

inline SimOptions load_sim_options(const std::string& text) {
    auto ini = detail::parse_ini(text);
    SimOptions o;
    detail::get(ini, "sim.trials", o.trials);
    detail::get(ini, "sim.seed", o.seed);
    detail::get(ini, "sim.snr_db", o.snr_db);
    detail::get(ini, "sim.leakage", o.leakage);
    detail::get(ini, "sim.position_m", o.position_m);
    if (o.trials < 1) throw std::invalid_argument("sim.trials must be >= 1");
    if (o.leakage < 0.0 || o.leakage >= 1.0)
        throw std::invalid_argument("sim.leakage must be in [0, 1)");
    return o;
}

} // namespace hstsim
