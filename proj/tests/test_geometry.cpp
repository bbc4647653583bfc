#include <doctest.h>

#include <hstsim/geometry.hpp>

using namespace hstsim;

namespace {
const SystemParams params = derive(SystemParams{});
}

TEST_CASE("doppler at the broadside point is zero") {
    CHECK(doppler_at_position(params.half_span_m, params) == doctest::Approx(0.0));
}

TEST_CASE("doppler at the cell edges approaches +/- f_max") {
    // cos(theta) = D / D_max at alpha = 0
    const double expected = params.doppler_max_hz * params.half_span_m / params.d_max_m;
    CHECK(doppler_at_position(0.0, params) == doctest::Approx(expected));
    CHECK(expected == doctest::Approx(1087.0).epsilon(1e-3));
    CHECK(doppler_at_position(2.0 * params.half_span_m, params) == doctest::Approx(-expected));
}

TEST_CASE("doppler is antisymmetric about the broadside point") {
    for (double x : {10.0, 123.4, 500.0, params.half_span_m}) {
        const double fwd = doppler_at_position(params.half_span_m - x, params);
        const double bwd = doppler_at_position(params.half_span_m + x, params);
        CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-12));
    }
}

TEST_CASE("out-of-range positions are rejected") {
    CHECK_THROWS_AS(doppler_at_position(-1.0, params), std::invalid_argument);
    CHECK_THROWS_AS(doppler_at_position(2.0 * params.half_span_m + 1.0, params),
                    std::invalid_argument);
    CHECK_THROWS_AS(dominant_index_from_doppler(params.doppler_max_hz + 1.0, params),
                    std::invalid_argument);
}

TEST_CASE("dominant index from doppler matches hand-evaluated cases") {
    CHECK(dominant_index_from_doppler(0.0, params) == 2); // Q/2
    // T f = 1.2e-3 * 1088 = 1.3056 -> ceil + 2 = 4
    CHECK(dominant_index_from_doppler(1088.0, params) == 4);
    // floor(-1.3056) + 2 = 0
    CHECK(dominant_index_from_doppler(-1088.0, params) == 0);
}

TEST_CASE("dominant index from position matches hand-evaluated cases") {
    CHECK(dominant_index_from_position(params.half_span_m, params) == 2);
    CHECK(dominant_index_from_position(0.0, params) == 4);
    CHECK(dominant_index_from_position(2.0 * params.half_span_m, params) == 0);
}

TEST_CASE("position and doppler routes agree on a 1 m grid") {
    const int grid = static_cast<int>(2.0 * params.half_span_m);
    for (int i = 0; i <= grid; ++i) {
        const double alpha = static_cast<double>(i);
        const int via_doppler =
            dominant_index_from_doppler(doppler_at_position(alpha, params), params);
        const int via_position = dominant_index_from_position(alpha, params);
        REQUIRE(via_position == via_doppler);
        REQUIRE(via_position >= 0);
        REQUIRE(via_position <= params.bem_order);
    }
}

TEST_CASE("antenna placement arithmetic") {
    auto two = antenna_positions(200.0, params);
    REQUIRE(two.size() == 2);
    CHECK(two[0].alpha_m == doctest::Approx(200.0));
    CHECK(two[1].alpha_m == doctest::Approx(0.0));

    SystemParams single = params;
    single.antennas = 1;
    auto one = antenna_positions(42.0, single);
    REQUIRE(one.size() == 1);
    CHECK(one[0].alpha_m == doctest::Approx(42.0));

    CHECK_THROWS_AS(antenna_positions(100.0, params), std::invalid_argument);
}

TEST_CASE("antennas straddling broadside see opposite-sign doppler") {
    auto both = antenna_positions(params.half_span_m + 100.0, params);
    const double front = doppler_at_position(both[0].alpha_m, params);
    const double rear = doppler_at_position(both[1].alpha_m, params);
    CHECK(front < 0.0);
    CHECK(rear > 0.0);
}
