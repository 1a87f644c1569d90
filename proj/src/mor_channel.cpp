#include "morsim/mor_channel.hpp"

#include <cmath>
#include <string>

#include "morsim/errors.hpp"
#include "morsim/oracles.hpp"

namespace morsim {

MediumSpec MediumSpec::from_susceptibilities(double chi_plus, double chi_minus, double k, double l) {
    MediumSpec m;
    m.chi_plus = chi_plus;
    m.chi_minus = chi_minus;
    m.k = k;
    m.l = l;
    return m;
}

MediumSpec MediumSpec::from_angles(double theta, double theta_plus) {
    MediumSpec m;
    m.theta = theta;
    m.theta_plus = theta_plus;
    return m;
}

namespace {

void require_raw(const MediumSpec& m) {
    if (!(m.chi_plus && m.chi_minus && m.k && m.l)) {
        throw ValidationError("medium needs all of chi_plus, chi_minus, k and l");
    }
    if (*m.l < 0.0) throw ValidationError("medium length l must be >= 0");
}

}  // namespace

double MediumSpec::chi_sum() const {
    require_raw(*this);
    return *chi_plus + *chi_minus;
}

double MediumSpec::omega() const {
    require_raw(*this);
    return *chi_plus - *chi_minus;
}

MediumSpec::Resolved MediumSpec::resolve() const {
    Resolved out;
    if (has_raw()) {
        require_raw(*this);
        const double kl = *k * *l;
        out.angles = {kl * (*chi_plus - *chi_minus), kl * *chi_plus};
    }
    if (has_direct()) {
        out.direct_overrode_raw = has_raw();
        if (theta) out.angles.theta = *theta;
        if (theta_plus) out.angles.theta_plus = *theta_plus;
    }
    return out;
}

const char* geometry_name(Geometry g) {
    return g == Geometry::collinear ? "collinear" : "noncollinear";
}

Geometry parse_geometry(std::string_view name) {
    if (name == "collinear") return Geometry::collinear;
    if (name == "noncollinear") return Geometry::noncollinear;
    throw ValidationError("unknown geometry '" + std::string(name) + "' (expected collinear or noncollinear)");
}

TwoModeUnitary rotation_matrix(double theta, double theta_plus) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Eigen::Matrix2d m;
    m << c, -s, s, c;
    return TwoModeUnitary::phased_real(m, theta_plus + theta / 2.0);
}

KetState apply_mor(const KetState& state, const MorAngles& angles, Geometry geometry, const MorOptions& options) {
    if (geometry == Geometry::collinear) {
        for (const auto& [occ, amp] : state.components()) {
            if (occ[index(Mode::bH)] != 0 || occ[index(Mode::bV)] != 0) {
                throw ValidationError("collinear geometry requires empty b modes");
            }
        }
    }
    KetState out = apply_two_mode_unitary(state, {Mode::aH, Mode::aV},
                                          rotation_matrix(angles.theta, angles.theta_plus));
    if (geometry == Geometry::noncollinear) {
        // b modes travel against B: θ and θ₊ flip sign.
        const double sign = options.inject_b_sign_error ? 1.0 : -1.0;
        out = apply_two_mode_unitary(out, {Mode::bH, Mode::bV},
                                     rotation_matrix(sign * angles.theta, sign * angles.theta_plus));
    }
    return out;
}

std::array<double, 3> two_photon_closed_form(double theta) {
    return oracles::two_photon_amplitudes(theta);
}

}  // namespace morsim
