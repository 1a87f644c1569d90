#include "morsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "morsim/detection.hpp"
#include "morsim/errors.hpp"
#include "morsim/oracles.hpp"
#include "morsim/sweep.hpp"

namespace morsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelTol = 1e-8;
constexpr double kZeroTol = 1e-12;
constexpr double kZeroFloor = 1e-10;  // |exact| below this counts as a fringe zero
constexpr double kEngineEpsilon = 1e-13;
constexpr double kRs[] = {0.1, 0.5, 1.0, 1.3};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Four-photon observables shrink like sinh⁴r for weak sources, so the
// truncation budget shrinks with them to keep the relative error fixed.
SourceSpec with_epsilon(SourceSpec s) {
    const double scale = s.kind == SourceKind::coherent ? 1.0 : std::min(1.0, std::pow(std::sinh(s.r), 4));
    s.epsilon = std::max(kEngineEpsilon * scale, 1e-300);
    return s;
}

struct OracleCase {
    const char* name;
    SourceKind kind;
    Geometry geometry;
    ObservableSpec obs;
};

CheckResult oracle_equivalence(const OracleCase& c, const MorOptions& mor, unsigned threads) {
    const auto grid = linspace(0.0, 2.0 * kPi, 33);
    double max_rel = 0.0;
    double max_abs_zero = 0.0;
    for (double r : kRs) {
        SourceSpec src = with_epsilon(c.kind == SourceKind::collinear_pdc ? SourceSpec::collinear(r)
                                                                          : SourceSpec::noncollinear(r));
        const auto series = fringe_scan(src, 0.0, grid, c.geometry, c.obs, threads, mor);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double exact = evaluate_exact(src, {grid[i], 0.0}, c.geometry, c.obs);
            const double diff = std::abs(series.values[i] - exact);
            if (std::abs(exact) < kZeroFloor) {
                max_abs_zero = std::max(max_abs_zero, diff);
            } else {
                max_rel = std::max(max_rel, diff / std::abs(exact));
            }
        }
    }
    return {c.name, max_rel, kRelTol, max_rel < kRelTol && max_abs_zero < kZeroTol,
            "max_abs_at_zeros=" + fmt(max_abs_zero)};
}

CheckResult basis_amplitude_check() {
    double worst = 0.0;
    const auto grid = linspace(-kPi, kPi, 100);
    for (double th : grid) {
        const KetState out = apply_mor(make_basis_state({1, 1, 0, 0}), {th, 0.37}, Geometry::collinear);
        const Complex num[3] = {out.amplitude({2, 0, 0, 0}), out.amplitude({0, 2, 0, 0}), out.amplitude({1, 1, 0, 0})};
        const auto ref = oracles::two_photon_amplitudes(th);
        Complex overlap{};
        for (int k = 0; k < 3; ++k) overlap += ref[k] * num[k];
        const Complex phase = overlap / std::abs(overlap);
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(num[k] * std::conj(phase) - ref[k]));
    }
    return {"two_photon_basis_amplitudes", worst, 1e-12, worst < 1e-12, "100 theta values"};
}

CheckResult frequency_check() {
    std::vector<double> grid(128);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 2.0 * kPi * static_cast<double>(i) / 128.0;
    const int f_coh = dominant_frequency(
        fringe_scan(SourceSpec::coherent(3.0), 0.0, grid, Geometry::collinear, ObservableSpec::intensity(Mode::aH)));
    const int f_two = dominant_frequency(
        fringe_scan(SourceSpec::collinear(0.5), 0.0, grid, Geometry::collinear, ObservableSpec::two_photon()));
    const int f_four = dominant_frequency(fringe_scan(SourceSpec::noncollinear(0.5), 0.0, grid,
                                                      Geometry::noncollinear,
                                                      ObservableSpec::projection({1, 1, 1, 1})));
    const bool ok = f_coh == 1 && f_two == 2 * f_coh && f_four == 4 * f_coh;
    return {"fringe_frequency_hierarchy", ok ? 0.0 : 1.0, 0.0, ok,
            "coherent=" + std::to_string(f_coh) + " two_photon=" + std::to_string(f_two) +
                " four_photon_noncollinear=" + std::to_string(f_four)};
}

double two_photon_visibility(double r, bool exact, unsigned threads) {
    const auto grid = linspace(0.0, kPi, exact ? 1025 : 257);
    const auto src = with_epsilon(SourceSpec::collinear(r));
    const auto obs = ObservableSpec::two_photon();
    return visibility(exact ? fringe_scan_exact(src, grid, Geometry::collinear, obs)
                            : fringe_scan(src, 0.0, grid, Geometry::collinear, obs, threads))
        .v;
}

CheckResult visibility_check(unsigned threads) {
    double worst = 0.0;
    bool monotone = true;
    double prev = 2.0;
    for (double r : linspace(0.01, 3.0, 60)) {
        const double v = two_photon_visibility(r, true, threads);
        worst = std::max(worst, std::abs(v - oracles::oracle(oracles::OracleId::vis2_closed, {r, {}, 0.0})));
        monotone = monotone && v < prev;
        prev = v;
    }
    for (double r : linspace(0.01, 1.3, 14)) {
        const double v = two_photon_visibility(r, false, threads);
        worst = std::max(worst, std::abs(v - oracles::oracle(oracles::OracleId::vis2_closed, {r, {}, 0.0})));
    }
    const auto glauber = fringe_scan(with_epsilon(SourceSpec::collinear(0.01)), 0.0, linspace(0.0, kPi, 1025),
                                     Geometry::collinear, ObservableSpec::glauber4(), threads);
    const double v4 = visibility(glauber).v;
    return {"visibility_curve", worst, 1e-6, worst < 1e-6 && monotone && v4 > 0.999,
            std::string("monotone=") + (monotone ? "yes" : "no") + " four_photon_v(r=0.01)=" + fmt(v4)};
}

CheckResult sensitivity_check() {
    std::vector<double> ns, coh, col;
    for (int i = 0; i <= 60; ++i) {
        const double n = std::pow(10.0, 1.0 + 3.0 * i / 60.0);
        ns.push_back(n);
        coh.push_back(min_detectable_angle(SourceSpec::coherent(std::sqrt(n))));
        col.push_back(min_detectable_angle(SourceSpec::collinear(std::asinh(std::sqrt(n / 2.0)))));
    }
    const double s_coh = sweep::loglog_slope(ns, coh);
    const double s_col = sweep::loglog_slope(ns, col);
    const double err = std::max(std::abs(s_coh + 0.5), std::abs(s_col + 1.0));
    return {"sensitivity_scaling", err, 0.02, err <= 0.02,
            "slope_coherent=" + fmt(s_coh) + " slope_collinear=" + fmt(s_col)};
}

CheckResult variance_check() {
    double worst = 0.0;
    double worst_zero = 0.0;
    for (double r : {0.1, 0.5, 1.0, 1.3}) {
        const auto src = with_epsilon(SourceSpec::collinear(r));
        const Evaluator eval(src, Geometry::collinear, ObservableSpec::nd());
        for (double th : linspace(0.0, kPi, 17)) {
            const double exact = oracles::oracle(oracles::OracleId::col_var, {r, {}, th});
            const double num = eval({th, 0.0});
            if (std::abs(exact) < kZeroFloor) {
                worst_zero = std::max(worst_zero, std::abs(num - exact));
            } else {
                worst = std::max(worst, std::abs(num - exact) / exact);
            }
        }
    }
    return {"nd_variance_collinear", worst, 1e-6, worst < 1e-6 && worst_zero < kZeroTol,
            "max_abs_at_zeros=" + fmt(worst_zero)};
}

CheckResult glauber_vs_projection_check() {
    double min_margin = 1e300;
    for (double r : {0.01, 0.1, 0.5, 1.0, 1.3}) {
        const auto src = with_epsilon(SourceSpec::collinear(r));
        const Evaluator glauber(src, Geometry::collinear, ObservableSpec::glauber4());
        const Evaluator proj(src, Geometry::collinear, ObservableSpec::projection({2, 2, 0, 0}));
        for (double th : linspace(0.0, kPi, 33)) {
            const double g = glauber({th, 0.0});
            const double p = proj({th, 0.0});
            min_margin = std::min(min_margin, g - 4.0 * p + 1e-15 * g);
        }
    }
    // Ratio at θ = 0 for a weak source, where the leading orders coincide.
    const auto weak = with_epsilon(SourceSpec::collinear(0.01));
    const double ratio = evaluate(weak, {0.0, 0.0}, Geometry::collinear, ObservableSpec::glauber4()) /
                         (4.0 * evaluate(weak, {0.0, 0.0}, Geometry::collinear, ObservableSpec::projection({2, 2, 0, 0})));
    const bool ok = min_margin >= 0.0 && std::abs(ratio - 1.0) < 0.01;
    return {"glauber_vs_projection", std::abs(ratio - 1.0), 0.01, ok,
            "min(I_HHVV - 4 P22)=" + fmt(min_margin) + " ratio(r=0.01)=" + fmt(ratio)};
}

CheckResult normalization_check() {
    double worst = 0.0;
    for (double r : {0.0, 0.3, 1.0, 2.0}) {
        for (int n_max : {1, 5, 20, 40}) {
            const auto col = collinear_state(r, 0.4, n_max);
            const auto non = noncollinear_state(r, n_max);
            worst = std::max(worst, std::abs(col.norm2() + col.truncation_tail() - 1.0));
            worst = std::max(worst, std::abs(non.norm2() + non.truncation_tail() - 1.0));
            for (double th : {0.3, 2.1}) {
                const auto out = apply_mor(non, {th, 0.9}, Geometry::noncollinear);
                worst = std::max(worst, std::abs(out.norm2() - non.norm2()));
            }
        }
    }
    return {"normalization_unitarity", worst, 1e-12, worst < 1e-12, "r in {0,0.3,1,2}, n_max in {1,5,20,40}"};
}

CheckResult phase_invariance_check() {
    double worst = 0.0;
    const std::pair<SourceKind, ObservableSpec> cases[] = {
        {SourceKind::collinear_pdc, ObservableSpec::two_photon()},
        {SourceKind::collinear_pdc, ObservableSpec::glauber4()},
        {SourceKind::collinear_pdc, ObservableSpec::projection({2, 2, 0, 0})},
        {SourceKind::collinear_pdc, ObservableSpec::intensity(Mode::aH)},
        {SourceKind::collinear_pdc, ObservableSpec::nd()},
        {SourceKind::noncollinear_pdc, ObservableSpec::projection({1, 1, 1, 1})},
        {SourceKind::noncollinear_pdc, ObservableSpec::intensity(Mode::bV)},
    };
    for (const auto& [kind, obs] : cases) {
        const Geometry geo = kind == SourceKind::collinear_pdc ? Geometry::collinear : Geometry::noncollinear;
        for (double th : {0.0, 0.4, 1.9}) {
            double ref = 0.0;
            bool first = true;
            for (double phi : {0.0, 1.3}) {
                for (double tp : {0.0, 0.7, kPi}) {
                    SourceSpec src = kind == SourceKind::collinear_pdc ? SourceSpec::collinear(0.8, phi)
                                                                       : SourceSpec::noncollinear(0.8);
                    src.n_max = 30;
                    const double v = evaluate(src, {th, tp}, geo, obs);
                    if (first) {
                        ref = v;
                        first = false;
                    }
                    worst = std::max(worst, std::abs(v - ref) / std::max(1.0, std::abs(ref)));
                }
            }
        }
    }
    return {"phase_invariance", worst, 1e-12, worst < 1e-12, "theta_plus in {0,0.7,pi}, phi in {0,1.3}"};
}

}  // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(const VerifyOptions& options) {
    const MorOptions mor{options.inject_b_sign_error};
    const unsigned threads = std::max(1u, options.threads);
    const OracleCase cases[] = {
        {"oracle_two_photon", SourceKind::collinear_pdc, Geometry::collinear, ObservableSpec::two_photon()},
        {"oracle_noncollinear_projection", SourceKind::noncollinear_pdc, Geometry::noncollinear,
         ObservableSpec::projection({1, 1, 1, 1})},
        {"oracle_collinear_projection", SourceKind::collinear_pdc, Geometry::collinear,
         ObservableSpec::projection({2, 2, 0, 0})},
        {"oracle_glauber", SourceKind::collinear_pdc, Geometry::collinear, ObservableSpec::glauber4()},
    };
    VerifyReport report;
    for (const auto& c : cases) report.checks.push_back(oracle_equivalence(c, mor, threads));
    report.checks.push_back(basis_amplitude_check());
    report.checks.push_back(frequency_check());
    report.checks.push_back(visibility_check(threads));
    report.checks.push_back(sensitivity_check());
    report.checks.push_back(variance_check());
    report.checks.push_back(glauber_vs_projection_check());
    report.checks.push_back(normalization_check());
    report.checks.push_back(phase_invariance_check());
    return report;
}

void write_report(const VerifyReport& report, std::ostream& out) {
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " max_error=" << fmt(c.max_error)
            << " tolerance=" << fmt(c.tolerance) << " " << c.detail << "\n";
    }
    out << (report.all_passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
}

}  // namespace morsim
