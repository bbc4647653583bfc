// system_params.hpp - physical and OFDM constants with derived quantities
//
// All knobs of the simulated high-mobility SIMO-OFDM link live here.
// Defaults reproduce the reference scenario: a 512-subcarrier, 5 MHz,
// 2.35 GHz downlink to a train moving at 500 km/h past a base station
// 40..1000 m from the track.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace hstsim {

struct SystemParams {
    // OFDM / sparsity
    int subcarriers = 512;  // K
    int pilots = 40;        // P
    int taps = 64;          // L
    int sparsity = 5;       // S dominant taps
    double gamma = 0.01;    // dominance power threshold (reporting only)

    // radio
    double carrier_hz = 2.35e9;
    double bandwidth_hz = 5e6;
    double packet_duration_s = 1.2e-3;  // T

    // geometry / mobility
    double speed_mps = 500.0 / 3.6;  // config accepts km/h
    double d_max_m = 1000.0;
    double d_min_m = 40.0;
    double bs_range_m = 1000.0;
    double train_length_m = 200.0;
    int antennas = 2;  // R

    static constexpr double light_speed_mps = 3.0e8;

    // derived by derive()
    double doppler_max_hz = 0.0;     // f_max = (v/c) f_c
    int bem_order = 0;               // Q = 2 ceil(f_max T), even
    double normalized_doppler = 0.0; // F = T f_max
    double half_span_m = 0.0;        // D = sqrt(D_max^2 - D_min^2)
};

inline SystemParams derive(SystemParams p) {
    if (p.subcarriers <= 0 || p.pilots <= 0 || p.pilots >= p.subcarriers)
        throw std::invalid_argument("system: need 0 < pilots < subcarriers, got p=" +
                                    std::to_string(p.pilots) + " k=" + std::to_string(p.subcarriers));
    if (p.taps <= 0 || p.taps >= p.subcarriers)
        throw std::invalid_argument("system: need 0 < taps < subcarriers");
    if (p.sparsity <= 0 || p.sparsity > p.taps)
        throw std::invalid_argument("system: need 0 < sparsity <= taps");
    if (p.d_min_m >= p.d_max_m)
        throw std::invalid_argument("geometry: need d_min < d_max");
    if (p.speed_mps < 0.0)
        throw std::invalid_argument("geometry: speed must be >= 0");
    if (p.antennas < 1)
        throw std::invalid_argument("geometry: need at least one antenna");

    p.doppler_max_hz = p.speed_mps / SystemParams::light_speed_mps * p.carrier_hz;
    p.bem_order = 2 * static_cast<int>(std::ceil(p.doppler_max_hz * p.packet_duration_s));
    p.normalized_doppler = p.packet_duration_s * p.doppler_max_hz;
    p.half_span_m = std::sqrt(p.d_max_m * p.d_max_m - p.d_min_m * p.d_min_m);
    return p;
}

} // namespace hstsim
