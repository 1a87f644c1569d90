#include "morsim/sources.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "morsim/errors.hpp"

namespace morsim {

const char* source_kind_name(SourceKind k) {
    switch (k) {
        case SourceKind::coherent: return "coherent";
        case SourceKind::collinear_pdc: return "collinear";
        case SourceKind::noncollinear_pdc: return "noncollinear";
    }
    return "?";
}

SourceKind parse_source_kind(std::string_view name) {
    if (name == "coherent") return SourceKind::coherent;
    if (name == "collinear" || name == "collinear_pdc") return SourceKind::collinear_pdc;
    if (name == "noncollinear" || name == "noncollinear_pdc") return SourceKind::noncollinear_pdc;
    throw ValidationError("unknown source '" + std::string(name) + "' (expected coherent, collinear or noncollinear)");
}

SourceSpec SourceSpec::coherent(Complex alpha) {
    SourceSpec s;
    s.kind = SourceKind::coherent;
    s.alpha = alpha;
    return s;
}

SourceSpec SourceSpec::collinear(double r, double phi) {
    SourceSpec s;
    s.kind = SourceKind::collinear_pdc;
    s.r = r;
    s.phi = phi;
    return s;
}

SourceSpec SourceSpec::noncollinear(double r) {
    SourceSpec s;
    s.kind = SourceKind::noncollinear_pdc;
    s.r = r;
    return s;
}

namespace {

void check_r(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("interaction parameter r must be finite and >= 0");
}

void check_n_max(int n_max) {
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
}

}  // namespace

KetState collinear_state(double r, double phi, int n_max) {
    check_r(r);
    check_n_max(n_max);
    const double t = std::tanh(r);
    const double norm = 1.0 / std::cosh(r);
    std::vector<KetState::Component> comps;
    comps.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        // (−e^{iφ} tanh r)^n = tanh^n r · e^{i n (φ + π)}
        const double mag = std::pow(t, n) * norm;
        const double arg = std::remainder(n * (phi + std::numbers::pi), 2.0 * std::numbers::pi);
        const auto k = static_cast<std::uint32_t>(n);
        comps.emplace_back(Occupation{k, k, 0, 0}, std::polar(mag, arg));
    }
    return KetState::from_components(std::move(comps), truncation_tail(SourceKind::collinear_pdc, r, n_max));
}

KetState noncollinear_state(double r, int n_max) {
    check_r(r);
    check_n_max(n_max);
    const double t = std::tanh(r);
    const double c = std::cosh(r);
    const double norm = 1.0 / (c * c);
    std::vector<KetState::Component> comps;
    for (int n = 0; n <= n_max; ++n) {
        const double mag = std::pow(t, n) * norm;
        for (int m = 0; m <= n; ++m) {
            const auto a = static_cast<std::uint32_t>(n - m);
            const auto b = static_cast<std::uint32_t>(m);
            comps.emplace_back(Occupation{a, b, b, a}, Complex{m % 2 == 0 ? mag : -mag, 0.0});
        }
    }
    return KetState::from_components(std::move(comps), truncation_tail(SourceKind::noncollinear_pdc, r, n_max));
}

std::pair<double, double> coherent_intensity_pair(Complex alpha, double theta) {
    const double n = std::norm(alpha);
    const double c = std::cos(theta / 2.0);
    const double ix = n * c * c;
    return {ix, n - ix};
}

MeanPhotonNumber mean_photon_number(const SourceSpec& spec) {
    switch (spec.kind) {
        case SourceKind::coherent:
            return {std::norm(spec.alpha)};
        case SourceKind::collinear_pdc: {
            check_r(spec.r);
            const double s = std::sinh(spec.r);
            return {2.0 * s * s};
        }
        case SourceKind::noncollinear_pdc: {
            check_r(spec.r);
            const double s = std::sinh(spec.r);
            return {4.0 * s * s};
        }
    }
    throw ValidationError("unknown source kind");
}

double truncation_tail(SourceKind kind, double r, int n_max) {
    check_r(r);
    check_n_max(n_max);
    const double t = std::tanh(r) * std::tanh(r);
    const int k = n_max + 1;
    switch (kind) {
        case SourceKind::collinear_pdc:
            return std::pow(t, k);
        case SourceKind::noncollinear_pdc:
            return std::pow(t, k) * (k * (1.0 - t) + 1.0);
        case SourceKind::coherent:
            throw ValidationError("coherent sources are not Fock-truncated");
    }
    return 0.0;
}

double weighted_truncation_tail(SourceKind kind, double r, int n_max, int moment_order) {
    check_r(r);
    check_n_max(n_max);
    if (kind == SourceKind::coherent) throw ValidationError("coherent sources are not Fock-truncated");
    const double t = std::tanh(r) * std::tanh(r);
    if (t == 0.0) return 0.0;
    const double one_minus = 1.0 - t;  // 1/cosh²r
    double sum = 0.0;
    // Terms eventually decay geometrically; stop once they are negligible.
    for (long n = n_max + 1;; ++n) {
        const double dn = static_cast<double>(n);
        double p = std::pow(t, dn) * one_minus;
        if (kind == SourceKind::noncollinear_pdc) p *= (dn + 1.0) * one_minus;
        const double term = p * std::pow(2.0 * dn, moment_order);
        sum += term;
        if (p == 0.0 || (n > 2L * (n_max + 1) + moment_order / (1.0 - t) && term < 1e-18 * sum) || n > 1'000'000) break;
    }
    return sum;
}

int select_n_max(SourceKind kind, double r, double epsilon, int moment_order, int cap) {
    if (!(epsilon > 0.0)) throw ValidationError("truncation target epsilon must be > 0");
    for (int n = 1; n <= cap; ++n) {
        if (weighted_truncation_tail(kind, r, n, moment_order) < epsilon) return n;
    }
    char msg[200];
    std::snprintf(msg, sizeof msg,
                  "cannot reach truncation target %g at r = %g within %d photon pairs; "
                  "lower r, loosen epsilon or raise the pair cap",
                  epsilon, r, cap);
    throw TruncationError(msg);
}

KetState prepare_state(const SourceSpec& spec, int moment_order) {
    const int n_max = spec.n_max ? *spec.n_max : select_n_max(spec.kind, spec.r, spec.epsilon, moment_order, spec.n_max_cap);
    switch (spec.kind) {
        case SourceKind::collinear_pdc: return collinear_state(spec.r, spec.phi, n_max);
        case SourceKind::noncollinear_pdc: return noncollinear_state(spec.r, n_max);
        case SourceKind::coherent: break;
    }
    throw ValidationError("coherent sources are handled analytically and have no Fock state");
}

}  // namespace morsim
