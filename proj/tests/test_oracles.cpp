#include <cmath>
#include <numbers>

#include "doctest.h"
#include "morsim/errors.hpp"
#include "morsim/oracles.hpp"

using namespace morsim::oracles;
using std::numbers::pi;

namespace {

double at(OracleId id, double r, double theta) { return oracle(id, {r, {}, theta}); }

}  // namespace

TEST_CASE("oracle point values") {
    CHECK(at(OracleId::p_non, 1.0, 0.0) == doctest::Approx(0.059339).epsilon(1e-5));
    CHECK(at(OracleId::p_col, 1.0, 0.0) == doctest::Approx(0.141293).epsilon(1e-5));
    for (double th : {0.0, 0.3, 1.0, 2.5}) CHECK(at(OracleId::i_hhvv, 0.0, th) == 0.0);

    // two-photon coincidence at r = 0.5
    // quoted approximations are only good to about 1e-4
    CHECK(std::abs(at(OracleId::col_ihv, 0.5, 0.0) - 0.41903) < 1e-4);
    CHECK(at(OracleId::col_ihv, 0.5, 0.0) == doctest::Approx(0.4190086).epsilon(1e-6));
    CHECK(at(OracleId::col_ihv, 0.5, pi / 2) == doctest::Approx(0.07374).epsilon(1e-4));
    CHECK(at(OracleId::col_var, 1.0, pi / 2) == doctest::Approx(13.1541).epsilon(1e-5));
    CHECK(std::abs(at(OracleId::vis2_closed, 1.0, 0.0) - 0.46305) < 1e-4);
    CHECK(at(OracleId::vis2_closed, 1.0, 0.0) == doctest::Approx(0.4629520).epsilon(1e-6));

    const double s = std::sinh(1.0), c = std::cosh(1.0);
    CHECK(at(OracleId::i_hhvv, 1.0, 0.0) ==
          doctest::Approx(4 * std::pow(s * c, 4) + 16 * std::pow(s, 6) * c * c + 4 * std::pow(s, 8)).epsilon(1e-14));
}

TEST_CASE("coherent oracles") {
    const std::complex<double> alpha{3.0, -1.0};
    for (double th : {0.0, 0.4, 1.7, pi, 5.0}) {
        const double ix = oracle(OracleId::coh_ix, {0.0, alpha, th});
        const double iy = oracle(OracleId::coh_iy, {0.0, alpha, th});
        CHECK(ix + iy == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(ix >= 0.0);
        CHECK(iy >= 0.0);
    }
    CHECK(oracle(OracleId::coh_iy, {0.0, alpha, pi}) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(oracle(OracleId::coh_var, {0.0, 3.0, pi / 2}) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("trigonometric identity between projection and glauber leading term") {
    for (int i = 0; i <= 200; ++i) {
        const double th = 2 * pi * i / 200.0;
        const double lhs = std::pow(1 + 3 * std::cos(2 * th), 2) / 16;
        const double rhs = std::pow(3 * std::cos(th) * std::cos(th) - 1, 2) / 4;
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
    // leading r⁴ terms agree: I_HHVV / (4 P22) → 1
    for (double th : {0.0, 0.3, 1.2}) {
        const double r = 1e-3;
        CHECK(at(OracleId::i_hhvv, r, th) / (4 * at(OracleId::p_col, r, th)) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("two-photon amplitude triple") {
    const auto zero = two_photon_amplitudes(0.0);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 1.0);

    const auto quarter = two_photon_amplitudes(pi / 4);
    CHECK(quarter[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(quarter[1] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(quarter[2] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));

    const auto half = two_photon_amplitudes(pi / 2);
    CHECK(half[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(half[1] == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(half[2]) < 1e-15);

    for (int i = 0; i < 50; ++i) {
        const auto a = two_photon_amplitudes(0.13 * i);
        CHECK(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(oracle(OracleId::two_photon_amplitudes, {}), morsim::ValidationError);
}

TEST_CASE("oracle names") {
    for (auto id : {OracleId::coh_ix, OracleId::coh_iy, OracleId::coh_var, OracleId::col_ihv, OracleId::col_var,
                    OracleId::p_non, OracleId::p_col, OracleId::i_hhvv, OracleId::two_photon_amplitudes,
                    OracleId::vis2_closed}) {
        CHECK(parse_oracle_id(oracle_name(id)) == id);
    }
    CHECK_THROWS_AS(parse_oracle_id("p_bogus"), morsim::ValidationError);
    CHECK_THROWS_AS(at(OracleId::p_non, -0.1, 0.0), morsim::ValidationError);
}

TEST_CASE("envelope peaks match a brute-force grid search") {
    auto grid_max = [](auto f) {
        double best_r = 0.0, best = -1.0;
        for (int i = 0; i <= 300000; ++i) {
            const double r = 3.0 * i / 300000.0;
            if (const double v = f(r); v > best) {
                best = v;
                best_r = r;
            }
        }
        return std::pair{best_r, best};
    };
    const auto [r_non, v_non] = grid_max([](double r) { return at(OracleId::p_non, r, 0.0); });
    const auto [r_col, v_col] = grid_max([](double r) { return at(OracleId::p_col, r, 0.0); });

    const auto non = noncollinear_envelope_peak();
    const auto col = collinear_envelope_peak();
    CHECK(non.r == doctest::Approx(r_non).epsilon(1e-4));
    CHECK(non.value == doctest::Approx(v_non).epsilon(1e-9));
    CHECK(col.r == doctest::Approx(r_col).epsilon(1e-4));
    CHECK(col.value == doctest::Approx(v_col).epsilon(1e-9));
    CHECK(non.value >= v_non);
    CHECK(col.value >= v_col);
}
