#include "morsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "morsim/errors.hpp"

namespace morsim::sweep {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool wants_numeric(OutputMode m) { return m != OutputMode::exact; }
bool wants_exact(OutputMode m) { return m != OutputMode::numeric; }

}  // namespace

OutputMode parse_output_mode(std::string_view name) {
    if (name == "numeric") return OutputMode::numeric;
    if (name == "exact") return OutputMode::exact;
    if (name == "both") return OutputMode::both;
    throw ValidationError("unknown mode '" + std::string(name) + "' (expected numeric, exact or both)");
}

void validate_grid(const SweepConfig& c) {
    if (c.points < 2) throw ValidationError("grid needs at least 2 points");
    if (!(c.grid_min < c.grid_max)) throw ValidationError("grid minimum must be below its maximum");
}

SourceSpec make_source(const SweepConfig& c, double r) {
    SourceSpec s;
    switch (c.source) {
        case SourceKind::coherent: s = SourceSpec::coherent(c.alpha); break;
        case SourceKind::collinear_pdc: s = SourceSpec::collinear(r, c.phi); break;
        case SourceKind::noncollinear_pdc: s = SourceSpec::noncollinear(r); break;
    }
    s.epsilon = c.epsilon;
    s.n_max_cap = c.pair_cap;
    s.n_max = c.n_max;
    return s;
}

ObservableSpec make_observable(const SweepConfig& c) {
    switch (c.observable) {
        case ObservableKind::intensity: return ObservableSpec::intensity(c.mode);
        case ObservableKind::two_photon_coincidence: return ObservableSpec::two_photon(c.pair);
        case ObservableKind::four_photon_glauber: return ObservableSpec::glauber4(c.pair);
        case ObservableKind::nd_variance: return ObservableSpec::nd(c.pair);
        case ObservableKind::four_photon_projection: {
            const Occupation fallback = c.geometry == Geometry::noncollinear ? Occupation{1, 1, 1, 1}
                                                                             : Occupation{2, 2, 0, 0};
            return ObservableSpec::projection(c.target.value_or(fallback));
        }
    }
    throw ValidationError("unknown observable");
}

void run_fringe(const SweepConfig& c, std::ostream& out, std::ostream& diag) {
    validate_grid(c);
    const auto resolved = c.medium.resolve();
    if (resolved.direct_overrode_raw) diag << "warning: direct angles override the susceptibility-derived ones\n";
    if (c.medium.has_raw()) diag << "warning: the theta grid overrides theta from the susceptibilities\n";

    const auto source = make_source(c, c.r);
    const auto obs = make_observable(c);
    const auto grid = linspace(c.grid_min, c.grid_max, c.points);

    FringeSeries numeric, exact;
    if (wants_numeric(c.output)) {
        numeric = fringe_scan(source, resolved.angles.theta_plus, grid, c.geometry, obs, c.threads);
    }
    if (wants_exact(c.output)) exact = fringe_scan_exact(source, grid, c.geometry, obs);

    out << "theta,value" << (c.output == OutputMode::both ? ",value_exact" : "") << "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << num(grid[i]) << ',';
        switch (c.output) {
            case OutputMode::numeric: out << num(numeric.values[i]); break;
            case OutputMode::exact: out << num(exact.values[i]); break;
            case OutputMode::both: out << num(numeric.values[i]) << ',' << num(exact.values[i]); break;
        }
        out << "\n";
    }
}

void run_visibility(const SweepConfig& c, std::ostream& out) {
    validate_grid(c);
    if (!(c.grid_min > 0.0)) throw ValidationError("visibility needs a positive r grid");
    if (c.theta_points < 257) throw ValidationError("visibility needs at least 257 theta points per fringe");
    const auto obs = make_observable(c);

    auto period_for = [&](const SourceSpec& src) {
        if (auto p = known_period(src, c.geometry, obs)) return *p;
        const auto probe = fringe_scan(src, 0.0, linspace(0.0, 2.0 * std::numbers::pi, 257), c.geometry, obs, c.threads);
        return detect_period(probe).value_or(2.0 * std::numbers::pi);
    };

    out << "r,visibility" << (c.output == OutputMode::both ? ",visibility_exact" : "") << "\n";
    for (double r : linspace(c.grid_min, c.grid_max, c.points)) {
        const auto src = make_source(c, r);
        const auto theta = linspace(0.0, period_for(src), c.theta_points);
        out << num(r);
        if (wants_numeric(c.output)) out << ',' << num(visibility(fringe_scan(src, 0.0, theta, c.geometry, obs, c.threads)).v);
        if (wants_exact(c.output)) out << ',' << num(visibility(fringe_scan_exact(src, theta, c.geometry, obs)).v);
        out << "\n";
    }
}

void run_envelope(const SweepConfig& c, std::ostream& out) {
    validate_grid(c);
    if (c.grid_min < 0.0) throw ValidationError("envelope needs r >= 0");
    if (c.source == SourceKind::coherent) throw ValidationError("envelope is defined for PDC sources only");
    const Occupation target = c.target.value_or(c.geometry == Geometry::noncollinear ? Occupation{1, 1, 1, 1}
                                                                                     : Occupation{2, 2, 0, 0});
    const auto obs = ObservableSpec::projection(target);

    auto numeric = [&](double r) { return evaluate(make_source(c, r), {0.0, 0.0}, c.geometry, obs); };
    auto exact = [&](double r) { return evaluate_exact(make_source(c, r), {0.0, 0.0}, c.geometry, obs); };
    const std::function<double(double)> primary =
        wants_numeric(c.output) ? std::function<double(double)>(numeric) : std::function<double(double)>(exact);

    const auto grid = linspace(c.grid_min, c.grid_max, c.points);
    std::vector<double> values;
    out << "r,value" << (c.output == OutputMode::both ? ",value_exact" : "") << "\n";
    for (double r : grid) {
        values.push_back(primary(r));
        out << num(r) << ',' << num(values.back());
        if (c.output == OutputMode::both) out << ',' << num(exact(r));
        out << "\n";
    }

    const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const double arg = golden_section_max(primary, lo, hi);
    out << "# argmax_r=" << num(arg) << ",max=" << num(primary(arg)) << "\n";
}

void run_sensitivity(const SweepConfig& c, std::ostream& out) {
    validate_grid(c);
    if (!(c.grid_min > 1.0)) throw ValidationError("sensitivity needs a mean photon number grid above 1");

    std::vector<double> ns;
    for (std::size_t i = 0; i < c.points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(c.points - 1);
        ns.push_back(std::exp(std::log(c.grid_min) + f * (std::log(c.grid_max) - std::log(c.grid_min))));
    }

    auto source_for = [&](double n) {
        SweepConfig cc = c;
        switch (c.source) {
            case SourceKind::coherent: cc.alpha = std::sqrt(n); return make_source(cc, 0.0);
            case SourceKind::collinear_pdc: return make_source(cc, std::asinh(std::sqrt(n / 2.0)));
            case SourceKind::noncollinear_pdc: return make_source(cc, std::asinh(std::sqrt(n / 4.0)));
        }
        throw ValidationError("unknown source");
    };
    auto numeric = [&](double n) {
        const auto src = source_for(n);
        const Geometry geo = src.kind == SourceKind::noncollinear_pdc ? Geometry::noncollinear : Geometry::collinear;
        const Evaluator var(src, geo, ObservableSpec::nd());
        return solve_noise_floor([&](double th) { return var({th, 0.0}); });
    };
    auto exact = [&](double n) {
        const auto src = source_for(n);
        if (src.kind == SourceKind::noncollinear_pdc) {
            throw ValidationError("no closed-form minimum detectable angle for the non-collinear source");
        }
        return min_detectable_angle(src);
    };

    std::vector<double> tn, te;
    for (double n : ns) {
        if (wants_numeric(c.output)) tn.push_back(numeric(n));
        if (wants_exact(c.output)) te.push_back(exact(n));
    }

    out << "mean_n,theta_m" << (c.output == OutputMode::both ? ",theta_m_exact" : "") << "\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        out << num(ns[i]);
        if (wants_numeric(c.output)) out << ',' << num(tn[i]);
        if (wants_exact(c.output)) out << ',' << num(te[i]);
        out << "\n";
    }
    out << "# slope=" << num(loglog_slope(ns, wants_numeric(c.output) ? tn : te));
    if (c.output == OutputMode::both) out << ",slope_exact=" << num(loglog_slope(ns, te));
    out << "\n";
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least 2 paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace morsim::sweep
