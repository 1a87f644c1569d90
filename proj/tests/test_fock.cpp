#include <cmath>
#include <numbers>
#include <map>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "morsim/errors.hpp"
#include "morsim/fock.hpp"
#include "morsim/sources.hpp"

using namespace morsim;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

Eigen::Matrix2cd jones_rotation(double theta, double theta_plus) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Eigen::Matrix2cd m;
    m << c, -s, s, c;
    return std::polar(1.0, theta_plus + theta / 2) * m;
}

Eigen::Matrix2cd random_unitary(std::mt19937& rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix2cd h;
    h << g(rng), Complex(g(rng), g(rng)), 0, g(rng);
    h(1, 0) = std::conj(h(0, 1));
    return (Complex(0, 1) * h).exp();
}

// Matrix of Σ K_jk a_j† a_k on the n-photon subspace of two modes, basis |n−k, k>.
Eigen::MatrixXcd lifted_generator(const Eigen::Matrix2cd& K, int n) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int col = 0; col <= n; ++col) {
        const int occ[2] = {n - col, col};
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                if (occ[k] == 0) continue;
                int after[2] = {occ[0], occ[1]};
                double amp = std::sqrt(static_cast<double>(after[k]));
                after[k] -= 1;
                amp *= std::sqrt(static_cast<double>(after[j] + 1));
                after[j] += 1;
                out(after[1], col) += K(j, k) * amp;
            }
        }
    }
    return out;
}

KetState random_state(std::mt19937& rng, int max_per_mode) {
    std::uniform_int_distribution<int> count(0, max_per_mode);
    std::normal_distribution<double> g;
    std::vector<KetState::Component> comps;
    double norm = 0;
    for (int i = 0; i < 12; ++i) {
        Occupation occ{};
        for (auto& c : occ) c = static_cast<std::uint32_t>(count(rng));
        const Complex a(g(rng), g(rng));
        comps.emplace_back(occ, a);
    }
    auto s = KetState::from_components(comps);
    for (const auto& [o, a] : s.components()) norm += std::norm(a);
    for (auto& [o, a] : comps) a /= std::sqrt(norm);
    return KetState::from_components(comps);
}

}  // namespace

TEST_CASE("basis states") {
    const auto s = make_basis_state({1, 1, 1, 1});
    CHECK(s.size() == 1);
    CHECK(s.amplitude({1, 1, 1, 1}) == Complex(1, 0));
    CHECK(s.norm2() == 1.0);
    CHECK(s.truncation_tail() == 0.0);
    CHECK(make_basis_state({0, 0, 0, 0}).norm2() == 1.0);
    CHECK(make_basis_state({2, 0, 0, 0}).amplitude({2, 0, 0, 0}) == Complex(1, 0));
}

TEST_CASE("from_components merges duplicates and prunes into the tail") {
    const auto s = KetState::from_components({{{1, 0, 0, 0}, 0.5}, {{1, 0, 0, 0}, 0.5}, {{0, 1, 0, 0}, 1e-16}});
    CHECK(s.size() == 1);
    CHECK(s.amplitude({1, 0, 0, 0}) == Complex(1, 0));
    CHECK(s.truncation_tail() == doctest::Approx(1e-32));
}

TEST_CASE("inner product") {
    const auto psi = noncollinear_state(1.0, 30);
    CHECK(std::abs(inner_product(psi, psi) - psi.norm2()) < 1e-15);
    CHECK(inner_product(make_basis_state({1, 0, 0, 0}), make_basis_state({0, 1, 0, 0})) == Complex{});

    // |1111> is the n = 2, m = 1 term: amplitude −tanh²r / cosh²r.
    const double expected = std::pow(std::tanh(1.0), 4) / std::pow(std::cosh(1.0), 4);
    CHECK(std::norm(inner_product(make_basis_state({1, 1, 1, 1}), psi)) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.059339).epsilon(1e-5));

    const Complex i(0, 1);
    const auto a = KetState::from_components({{{1, 0, 0, 0}, i}});
    const auto b = KetState::from_components({{{1, 0, 0, 0}, 1.0}});
    CHECK(inner_product(a, b) == -i);  // conjugate-linear in the bra
}

TEST_CASE("non-unitary matrices are rejected") {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, 1.001;
    CHECK_THROWS_AS(TwoModeUnitary{m}, ValidationError);
}

TEST_CASE("identity lift") {
    const auto m = two_mode_unitary_subspace_matrix(TwoModeUnitary::identity(), 3);
    CHECK(m.rows() == 4);
    CHECK((m - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Hong-Ou-Mandel cancellation on a 50/50 mixer") {
    Eigen::Matrix2cd mix;
    mix << 1, 1, -1, 1;
    const auto m = two_mode_unitary_subspace_matrix(TwoModeUnitary(mix / kSqrt2), 2);
    // column |1,1>; rows |2,0>, |1,1>, |0,2>
    CHECK(std::abs(m(0, 1) - (-1.0 / kSqrt2)) < 1e-15);
    CHECK(std::abs(m(1, 1)) < 1e-15);
    CHECK(std::abs(m(2, 1) - 1.0 / kSqrt2) < 1e-15);
}

TEST_CASE("Jones rotation on |1,1> gives the two-photon rotation amplitudes") {
    for (double th : {0.3, 1.1, 2.5, -0.7}) {
        const auto m = two_mode_unitary_subspace_matrix(TwoModeUnitary(jones_rotation(th, 0.2)), 2);
        const double ref[3] = {std::sin(th) / kSqrt2, std::cos(th), -std::sin(th) / kSqrt2};
        const Complex overlap = ref[0] * m(0, 1) + ref[1] * m(1, 1) + ref[2] * m(2, 1);
        const Complex phase = overlap / std::abs(overlap);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(m(k, 1) / phase - ref[k]) < 1e-14);
    }
}

TEST_CASE("lifts match matrix exponentials of the generator for n <= 3") {
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Matrix2cd h;
        h << g(rng), Complex(g(rng), g(rng)), 0, g(rng);
        h(1, 0) = std::conj(h(0, 1));
        const Eigen::Matrix2cd u = (Complex(0, 1) * h).exp();
        for (int n = 0; n <= 3; ++n) {
            // Row convention: u = exp(iG) lifts to exp(i Σ (Gᵀ)_jk a_j† a_k).
            const Eigen::MatrixXcd expected = (Complex(0, 1) * lifted_generator(h.transpose(), n)).exp();
            const auto lifted = two_mode_unitary_subspace_matrix(TwoModeUnitary(u), static_cast<std::uint32_t>(n));
            CHECK((lifted - expected).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("lift composition and unitarity") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const TwoModeUnitary u(random_unitary(rng));
        const TwoModeUnitary v(random_unitary(rng));
        for (std::uint32_t n : {1u, 4u, 9u}) {
            const auto mu = two_mode_unitary_subspace_matrix(u, n);
            const auto mv = two_mode_unitary_subspace_matrix(v, n);
            const auto muv = two_mode_unitary_subspace_matrix(u * v, n);
            CHECK((muv - mv * mu).cwiseAbs().maxCoeff() < 1e-10);
            CHECK((mu.adjoint() * mu - Eigen::MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
        }
        const auto state = random_state(rng, 3);
        const auto stepwise = apply_two_mode_unitary(apply_two_mode_unitary(state, {Mode::aH, Mode::bV}, u),
                                                     {Mode::aH, Mode::bV}, v);
        const auto direct = apply_two_mode_unitary(state, {Mode::aH, Mode::bV}, u * v);
        double worst = 0;
        for (const auto& [occ, amp] : stepwise.components()) worst = std::max(worst, std::abs(amp - direct.amplitude(occ)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("lift stays unitary at high photon number") {
    std::mt19937 rng(5);
    const auto m = two_mode_unitary_subspace_matrix(TwoModeUnitary(random_unitary(rng)), 400);
    CHECK((m.adjoint() * m - Eigen::MatrixXcd::Identity(401, 401)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("real-form lift agrees with the complex path") {
    Eigen::Matrix2d rot;
    rot << std::cos(0.45), -std::sin(0.45), std::sin(0.45), std::cos(0.45);
    const auto fast = TwoModeUnitary::phased_real(rot, 0.8);
    const TwoModeUnitary slow(fast.matrix());
    REQUIRE(fast.real_form().has_value());
    REQUIRE_FALSE(slow.real_form().has_value());
    for (std::uint32_t n : {0u, 1u, 6u, 60u}) {
        const auto a = two_mode_unitary_subspace_matrix(fast, n);
        const auto b = two_mode_unitary_subspace_matrix(slow, n);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("apply_two_mode_unitary") {
    std::mt19937 rng(3);
    const auto state = random_state(rng, 4);

    SUBCASE("identity leaves amplitudes untouched") {
        const auto out = apply_two_mode_unitary(state, {Mode::aH, Mode::aV}, TwoModeUnitary::identity());
        REQUIRE(out.size() == state.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out.components()[i].first == state.components()[i].first);
            CHECK(out.components()[i].second == state.components()[i].second);
        }
    }
    SUBCASE("rotation by pi swaps a single photon") {
        const auto out = apply_two_mode_unitary(make_basis_state({1, 0, 0, 0}), {Mode::aH, Mode::aV},
                                                TwoModeUnitary(jones_rotation(std::numbers::pi, 0.0)));
        CHECK(std::abs(out.amplitude({0, 1, 0, 0})) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(out.amplitude({1, 0, 0, 0})) < 1e-15);
    }
    SUBCASE("norm and spectator photon numbers are preserved") {
        const auto out = apply_two_mode_unitary(state, {Mode::aV, Mode::bH}, TwoModeUnitary(random_unitary(rng)));
        CHECK(std::abs(out.norm2() + out.truncation_tail() - state.norm2()) < 1e-12);
        std::map<std::pair<std::uint32_t, std::uint32_t>, double> before, after;
        for (const auto& [o, a] : state.components()) before[{o[0], o[3]}] += std::norm(a);
        for (const auto& [o, a] : out.components()) {
            after[{o[0], o[3]}] += std::norm(a);
            bool found = false;
            for (const auto& [o2, a2] : state.components()) {
                found = found || (o2[0] == o[0] && o2[3] == o[3] && o2[1] + o2[2] == o[1] + o[2]);
            }
            CHECK(found);
        }
        for (const auto& [k, w] : before) CHECK(after[k] == doctest::Approx(w).epsilon(1e-12));
    }
    SUBCASE("identical modes are rejected") {
        CHECK_THROWS_AS(apply_two_mode_unitary(state, {Mode::bH, Mode::bH}, TwoModeUnitary::identity()),
                        ValidationError);
    }
}

TEST_CASE("normally ordered moments and projections") {
    CHECK(normally_ordered_moment(make_basis_state({2, 0, 0, 0}), {0, 0, 0, 0}) == 1.0);
    CHECK(normally_ordered_moment(make_basis_state({2, 0, 0, 0}), {1, 0, 0, 0}) == 2.0);
    CHECK(normally_ordered_moment(make_basis_state({3, 2, 0, 0}), {2, 2, 0, 0}) == 12.0);
    CHECK(normally_ordered_moment(make_basis_state({1, 2, 0, 0}), {2, 2, 0, 0}) == 0.0);
    CHECK(projection_probability(make_basis_state({0, 0, 0, 0}), {0, 0, 0, 0}) == 1.0);
    CHECK(projection_probability(make_basis_state({0, 0, 0, 0}), {1, 0, 0, 0}) == 0.0);
}

TEST_CASE("property: Glauber (2,2) moment dominates 4 x the |2,2> projection") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto state = random_state(rng, 4);
        state = apply_two_mode_unitary(state, {Mode::aH, Mode::aV}, TwoModeUnitary(jones_rotation(angle(rng), angle(rng))));
        const double moment = normally_ordered_moment(state, {2, 2, 0, 0});
        CHECK(moment >= 0.0);
        double p22 = 0;
        for (std::uint32_t b = 0; b <= 4; ++b) {
            for (std::uint32_t c = 0; c <= 4; ++c) p22 += projection_probability(state, {2, 2, b, c});
        }
        CHECK(moment >= 4.0 * p22 - 1e-14);
        CHECK(normally_ordered_moment(state, {1, 0, 2, 1}) >= 0.0);
    }
}
