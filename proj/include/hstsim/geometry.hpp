// geometry.hpp - train position -> Doppler shift -> dominant BEM index
//
// The track runs from A (alpha = 0) past the broadside point B (alpha = D)
// to C (alpha = 2D). An antenna at alpha sees a Doppler shift
// f = f_max (D - alpha) / sqrt((D - alpha)^2 + D_min^2), positive while
// approaching B and negative after. The dominant BEM index q* follows by
// rounding T*f away from the band center Q/2: ceil for f >= 0, floor for
// f < 0, so q* sweeps {Q, ..., Q/2, ..., 0} as the train crosses the cell.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "system_params.hpp"

namespace hstsim {

struct AntennaPosition {
    double alpha_m = 0.0; // distance from A along the railway
    int antenna_id = 0;
};

inline double doppler_at_position(double alpha_m, const SystemParams& p) {
    if (alpha_m < 0.0 || alpha_m > 2.0 * p.half_span_m)
        throw std::invalid_argument("alpha out of range [0, 2D]: " + std::to_string(alpha_m));
    const double x = p.half_span_m - alpha_m;
    return p.doppler_max_hz * x / std::sqrt(x * x + p.d_min_m * p.d_min_m);
}

inline int dominant_index_from_doppler(double f_hz, const SystemParams& p) {
    if (std::abs(f_hz) > p.doppler_max_hz * (1.0 + 1e-4) + 1e-9)
        throw std::invalid_argument("doppler exceeds f_max: " + std::to_string(f_hz));
    const double tf = p.packet_duration_s * f_hz;
    const int half = p.bem_order / 2;
    return f_hz >= 0.0 ? static_cast<int>(std::ceil(tf)) + half
                       : static_cast<int>(std::floor(tf)) + half;
}

inline int dominant_index_from_position(double alpha_m, const SystemParams& p) {
    if (alpha_m < 0.0 || alpha_m > 2.0 * p.half_span_m)
        throw std::invalid_argument("alpha out of range [0, 2D]: " + std::to_string(alpha_m));
    const double x = p.half_span_m - alpha_m;
    const double cosine = x / std::sqrt(x * x + p.d_min_m * p.d_min_m);
    const double tf = p.normalized_doppler * cosine;
    const int half = p.bem_order / 2;
    return alpha_m <= p.half_span_m ? static_cast<int>(std::ceil(tf)) + half
                                    : static_cast<int>(std::floor(tf)) + half;
}

// R antennas evenly spaced over the train length, rear-most last.
inline std::vector<AntennaPosition> antenna_positions(double front_alpha_m,
                                                      const SystemParams& p) {
    const double spacing = p.antennas > 1 ? p.train_length_m / (p.antennas - 1) : 0.0;
    std::vector<AntennaPosition> out;
    out.reserve(static_cast<std::size_t>(p.antennas));
    for (int r = 0; r < p.antennas; ++r) {
        const double alpha = front_alpha_m - r * spacing;
        if (alpha < 0.0)
            throw std::invalid_argument("antenna " + std::to_string(r) +
                                        " falls before A (alpha = " + std::to_string(alpha) + ")");
        if (alpha > 2.0 * p.half_span_m)
            throw std::invalid_argument("antenna " + std::to_string(r) + " falls past C");
        out.push_back({alpha, r});
    }
    return out;
}

} // namespace hstsim
