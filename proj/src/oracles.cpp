#include "morsim/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "morsim/errors.hpp"

namespace morsim::oracles {

namespace {

struct NamedId {
    const char* name;
    OracleId id;
};

constexpr NamedId kNames[] = {
    {"coh_ix", OracleId::coh_ix},   {"coh_iy", OracleId::coh_iy},
    {"coh_var", OracleId::coh_var}, {"col_ihv", OracleId::col_ihv},
    {"col_var", OracleId::col_var}, {"p_non", OracleId::p_non},
    {"p_col", OracleId::p_col},     {"i_hhvv", OracleId::i_hhvv},
    {"two_photon_amplitudes", OracleId::two_photon_amplitudes},
    {"vis2_closed", OracleId::vis2_closed},
};

void check_r(double r) {
    if (!(r >= 0.0)) throw ValidationError("oracle: r must be >= 0");
}

}  // namespace

OracleId parse_oracle_id(std::string_view name) {
    for (const auto& n : kNames) {
        if (name == n.name) return n.id;
    }
    throw ValidationError("unknown oracle id '" + std::string(name) + "'");
}

const char* oracle_name(OracleId id) {
    for (const auto& n : kNames) {
        if (n.id == id) return n.name;
    }
    return "?";
}

double oracle(OracleId id, const OracleParams& p) {
    const double a2 = std::norm(p.alpha);
    const double th = p.theta;
    switch (id) {
        case OracleId::coh_ix: return a2 * std::pow(std::cos(th / 2.0), 2);
        case OracleId::coh_iy: return a2 * std::pow(std::sin(th / 2.0), 2);
        case OracleId::coh_var: return a2 * std::pow(std::sin(th), 2);
        default: break;
    }

    check_r(p.r);
    const double s = std::sinh(p.r);
    const double c = std::cosh(p.r);
    const double t = std::tanh(p.r);
    const double s2 = s * s;
    const double c2 = c * c;
    const double cos2 = std::pow(std::cos(th), 2);
    switch (id) {
        case OracleId::col_ihv:
            return cos2 * s2 * c2 + s2 * s2;
        case OracleId::col_var:
            return 4.0 * s2 * c2 * std::pow(std::sin(th), 2);
        case OracleId::p_non:
            return std::pow(t, 4) / (c2 * c2) * std::pow(std::cos(2.0 * th), 2);
        case OracleId::p_col:
            return std::pow(t, 4) / c2 / 16.0 * std::pow(1.0 + 3.0 * std::cos(2.0 * th), 2);
        case OracleId::i_hhvv:
            return std::pow(3.0 * cos2 - 1.0, 2) * s2 * s2 * c2 * c2 +
                   4.0 * (3.0 * cos2 + 1.0) * s2 * s2 * s2 * c2 + 4.0 * s2 * s2 * s2 * s2;
        case OracleId::vis2_closed:
            return 1.0 / (1.0 + 2.0 * t * t);
        case OracleId::two_photon_amplitudes:
            throw ValidationError("two_photon_amplitudes is an amplitude triple; use two_photon_amplitudes()");
        default:
            break;
    }
    throw ValidationError("unknown oracle id");
}

std::array<double, 3> two_photon_amplitudes(double theta) {
    const double s = std::sin(theta) / std::numbers::sqrt2;
    return {s, -s, std::cos(theta)};
}

// d/dr ln(tanh⁴r / cosh^{2k}r) = 0  =>  tanh²r = 2/k
EnvelopePeak noncollinear_envelope_peak() {
    const double t2 = 0.5;
    return {std::atanh(std::sqrt(t2)), t2 * t2 * (1.0 - t2) * (1.0 - t2)};
}

EnvelopePeak collinear_envelope_peak() {
    const double t2 = 2.0 / 3.0;
    return {std::atanh(std::sqrt(t2)), t2 * t2 * (1.0 - t2)};
}

}  // namespace morsim::oracles
