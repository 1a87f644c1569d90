#include "morsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "morsim/errors.hpp"

namespace morsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NamedKind {
    const char* name;
    ObservableKind kind;
};

constexpr NamedKind kKinds[] = {
    {"intensity", ObservableKind::intensity},
    {"two_photon", ObservableKind::two_photon_coincidence},
    {"glauber4", ObservableKind::four_photon_glauber},
    {"projection", ObservableKind::four_photon_projection},
    {"nd_variance", ObservableKind::nd_variance},
};

bool is_a_pair(ModePair p) {
    return (p.first == Mode::aH && p.second == Mode::aV) || (p.first == Mode::aV && p.second == Mode::aH);
}

std::array<std::uint32_t, kNumModes> powers_on(ModePair p, std::uint32_t k) {
    std::array<std::uint32_t, kNumModes> powers{};
    powers[index(p.first)] = k;
    powers[index(p.second)] = k;
    return powers;
}

}  // namespace

const char* observable_kind_name(ObservableKind k) {
    for (const auto& n : kKinds) {
        if (n.kind == k) return n.name;
    }
    return "?";
}

ObservableKind parse_observable_kind(std::string_view name) {
    for (const auto& n : kKinds) {
        if (name == n.name) return n.kind;
    }
    throw ValidationError("unknown observable '" + std::string(name) +
                          "' (expected intensity, two_photon, glauber4, projection or nd_variance)");
}

ObservableSpec ObservableSpec::intensity(Mode m) {
    ObservableSpec o;
    o.kind = ObservableKind::intensity;
    o.mode = m;
    return o;
}

ObservableSpec ObservableSpec::two_photon(ModePair p) {
    ObservableSpec o;
    o.kind = ObservableKind::two_photon_coincidence;
    o.pair = p;
    return o;
}

ObservableSpec ObservableSpec::glauber4(ModePair p) {
    ObservableSpec o;
    o.kind = ObservableKind::four_photon_glauber;
    o.pair = p;
    return o;
}

ObservableSpec ObservableSpec::projection(const Occupation& target) {
    ObservableSpec o;
    o.kind = ObservableKind::four_photon_projection;
    o.target = target;
    return o;
}

ObservableSpec ObservableSpec::nd(ModePair p) {
    ObservableSpec o;
    o.kind = ObservableKind::nd_variance;
    o.pair = p;
    return o;
}

void ObservableSpec::validate() const {
    switch (kind) {
        case ObservableKind::intensity:
            return;
        case ObservableKind::four_photon_projection:
            if (total_photons(target) != 4) throw ValidationError("projection target must hold exactly 4 photons");
            return;
        default:
            if (pair.first == pair.second) throw ValidationError("observable pair modes must be distinct");
    }
}

int ObservableSpec::moment_order() const {
    switch (kind) {
        case ObservableKind::intensity: return 1;
        case ObservableKind::two_photon_coincidence: return 2;
        case ObservableKind::four_photon_glauber: return 4;
        case ObservableKind::four_photon_projection: return 0;
        case ObservableKind::nd_variance: return 2;
    }
    return 4;
}

double measure(const KetState& state, const ObservableSpec& obs) {
    obs.validate();
    switch (obs.kind) {
        case ObservableKind::intensity: {
            std::array<std::uint32_t, kNumModes> powers{};
            powers[index(obs.mode)] = 1;
            return normally_ordered_moment(state, powers);
        }
        case ObservableKind::two_photon_coincidence:
            return normally_ordered_moment(state, powers_on(obs.pair, 1));
        case ObservableKind::four_photon_glauber:
            return normally_ordered_moment(state, powers_on(obs.pair, 2));
        case ObservableKind::four_photon_projection:
            return projection_probability(state, obs.target);
        case ObservableKind::nd_variance: {
            double mean = 0.0;
            double second = 0.0;
            for (const auto& [occ, amp] : state.components()) {
                const double d = static_cast<double>(occ[index(obs.pair.second)]) -
                                 static_cast<double>(occ[index(obs.pair.first)]);
                const double p = std::norm(amp);
                mean += p * d;
                second += p * d * d;
            }
            return std::max(0.0, second - mean * mean);
        }
    }
    throw ValidationError("unknown observable kind");
}

Evaluator::Evaluator(const SourceSpec& source, Geometry geometry, const ObservableSpec& obs, MorOptions options)
    : source_(source), geometry_(geometry), obs_(obs), options_(options) {
    obs_.validate();
    if (source_.kind == SourceKind::coherent) {
        if (geometry_ != Geometry::collinear) {
            throw ValidationError("coherent source is only defined for the collinear geometry");
        }
        if (obs_.kind != ObservableKind::intensity &&
            !(obs_.kind == ObservableKind::nd_variance && is_a_pair(obs_.pair))) {
            throw ValidationError("coherent source supports only intensity and nd_variance on (aH, aV)");
        }
        return;
    }
    if (source_.kind == SourceKind::noncollinear_pdc && geometry_ == Geometry::collinear) {
        throw ValidationError("non-collinear source needs the noncollinear geometry");
    }

    if (obs_.kind == ObservableKind::four_photon_projection && !source_.n_max) {
        // Both pair-preserving rotations conserve photon number, so the target's
        // pair sector alone determines the projection exactly.
        SourceSpec exact = source_;
        exact.n_max = std::max<int>(1, static_cast<int>(total_photons(obs_.target) / 2));
        input_ = prepare_state(exact, 0);
    } else {
        input_ = prepare_state(source_, obs_.moment_order());
    }
}

double Evaluator::operator()(const MorAngles& angles) const {
    if (source_.kind == SourceKind::coherent) {
        const auto [ix, iy] = coherent_intensity_pair(source_.alpha, angles.theta);
        if (obs_.kind == ObservableKind::nd_variance) {
            return std::norm(source_.alpha) * std::pow(std::sin(angles.theta), 2);
        }
        switch (obs_.mode) {
            case Mode::aH: return ix;
            case Mode::aV: return iy;
            default: return 0.0;  // b modes carry vacuum
        }
    }
    return measure(apply_mor(input_, angles, geometry_, options_), obs_);
}

double evaluate(const SourceSpec& source, const MorAngles& angles, Geometry geometry, const ObservableSpec& obs,
                const MorOptions& options) {
    return Evaluator(source, geometry, obs, options)(angles);
}

std::optional<oracles::OracleId> closed_form_for(const SourceSpec& source, Geometry geometry,
                                                 const ObservableSpec& obs) {
    using oracles::OracleId;
    const bool a_pair = is_a_pair(obs.pair);
    switch (source.kind) {
        case SourceKind::coherent:
            if (geometry != Geometry::collinear) return std::nullopt;
            if (obs.kind == ObservableKind::intensity && obs.mode == Mode::aH) return OracleId::coh_ix;
            if (obs.kind == ObservableKind::intensity && obs.mode == Mode::aV) return OracleId::coh_iy;
            if (obs.kind == ObservableKind::nd_variance && a_pair) return OracleId::coh_var;
            return std::nullopt;
        case SourceKind::collinear_pdc:
            if (obs.kind == ObservableKind::two_photon_coincidence && a_pair) return OracleId::col_ihv;
            if (obs.kind == ObservableKind::four_photon_glauber && a_pair) return OracleId::i_hhvv;
            if (obs.kind == ObservableKind::nd_variance && a_pair) return OracleId::col_var;
            if (obs.kind == ObservableKind::four_photon_projection && obs.target == Occupation{2, 2, 0, 0}) {
                return OracleId::p_col;
            }
            return std::nullopt;
        case SourceKind::noncollinear_pdc:
            if (geometry == Geometry::noncollinear && obs.kind == ObservableKind::four_photon_projection &&
                obs.target == Occupation{1, 1, 1, 1}) {
                return OracleId::p_non;
            }
            return std::nullopt;
    }
    return std::nullopt;
}

double evaluate_exact(const SourceSpec& source, const MorAngles& angles, Geometry geometry,
                      const ObservableSpec& obs) {
    obs.validate();
    const auto id = closed_form_for(source, geometry, obs);
    if (!id) {
        throw ValidationError(std::string("no closed form for ") + observable_kind_name(obs.kind) + " with a " +
                              source_kind_name(source.kind) + " source in the " + geometry_name(geometry) +
                              " geometry");
    }
    return oracles::oracle(*id, {source.r, source.alpha, angles.theta});
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("theta grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ValidationError("theta grid must be strictly increasing");
    }
}

}  // namespace

FringeSeries fringe_scan(const SourceSpec& source, double theta_plus, const std::vector<double>& theta_grid,
                         Geometry geometry, const ObservableSpec& obs, unsigned threads,
                         const MorOptions& options) {
    check_grid(theta_grid);
    const Evaluator eval(source, geometry, obs, options);
    FringeSeries out{theta_grid, std::vector<double>(theta_grid.size()), source, obs, geometry};

    const std::size_t n = theta_grid.size();
    const unsigned workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(n));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < n; i += workers) out.values[i] = eval({theta_grid[i], theta_plus});
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    return out;
}

FringeSeries fringe_scan_exact(const SourceSpec& source, const std::vector<double>& theta_grid, Geometry geometry,
                               const ObservableSpec& obs) {
    check_grid(theta_grid);
    FringeSeries out{theta_grid, {}, source, obs, geometry};
    out.values.reserve(theta_grid.size());
    for (double th : theta_grid) out.values.push_back(evaluate_exact(source, {th, 0.0}, geometry, obs));
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {lo};
    std::vector<double> g(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

VisibilityResult visibility(const FringeSeries& series) {
    if (series.values.empty()) throw ValidationError("visibility of an empty series");
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    const double sum = *hi + *lo;
    if (!(sum > 0.0)) throw UndefinedVisibilityError("visibility undefined: max + min = 0");
    const auto i_max = static_cast<std::size_t>(hi - series.values.begin());
    const auto i_min = static_cast<std::size_t>(lo - series.values.begin());
    return {(*hi - *lo) / sum, series.theta_grid[i_max], series.theta_grid[i_min]};
}

std::optional<double> known_period(const SourceSpec& source, Geometry geometry, const ObservableSpec& obs) {
    using oracles::OracleId;
    const auto id = closed_form_for(source, geometry, obs);
    if (!id) return std::nullopt;
    switch (*id) {
        case OracleId::coh_ix:
        case OracleId::coh_iy: return kTwoPi;
        case OracleId::p_non: return std::numbers::pi / 2.0;
        default: return std::numbers::pi;
    }
}

std::optional<double> detect_period(const FringeSeries& series, double rel_tol) {
    const auto& v = series.values;
    const std::size_t n = v.size();
    if (n < 4) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double scale = std::max(*hi - *lo, std::abs(*hi));
    const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
    if (*hi - *lo <= tol) return std::nullopt;  // flat: no period
    for (std::size_t lag = 1; lag <= n / 2; ++lag) {
        bool match = true;
        for (std::size_t i = 0; i + lag < n && match; ++i) match = std::abs(v[i + lag] - v[i]) <= tol;
        if (match) return series.theta_grid[lag] - series.theta_grid[0];
    }
    return std::nullopt;
}

int dominant_frequency(const FringeSeries& series) {
    const auto& g = series.theta_grid;
    std::size_t n = g.size();
    if (n < 4) throw ValidationError("dominant_frequency needs at least 4 samples");
    const double span = g.back() - g.front();
    if (std::abs(span - kTwoPi) < 1e-9) --n;  // drop duplicated endpoint
    const double step = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(g[i] - g[i - 1] - step) > 1e-9) {
            throw ValidationError("dominant_frequency needs a uniform grid over one 2π window");
        }
    }
    int best = 0;
    double best_mag = -1.0;
    for (std::size_t f = 1; f <= n / 2; ++f) {
        Complex acc{};
        for (std::size_t i = 0; i < n; ++i) {
            acc += series.values[i] * std::polar(1.0, -kTwoPi * static_cast<double>(f * i % n) / static_cast<double>(n));
        }
        if (std::abs(acc) > best_mag * (1.0 + 1e-9)) {
            best_mag = std::abs(acc);
            best = static_cast<int>(f);
        }
    }
    return best;
}

double nd_variance(const SourceSpec& source, const MorAngles& angles, Geometry geometry) {
    return evaluate(source, angles, geometry, ObservableSpec::nd());
}

double solve_noise_floor(const std::function<double(double)>& variance) {
    constexpr int kScan = 64;
    const double hi_end = std::numbers::pi / 2.0;
    if (variance(0.0) >= 1.0) {
        throw NoSolutionError("ΔN_d is already at or above the unit noise floor without rotation");
    }
    double lo = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double th = hi_end * i / kScan;
        if (variance(th) >= 1.0) {
            double hi = th;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                (variance(mid) >= 1.0 ? hi : lo) = mid;
            }
            return hi;
        }
        lo = th;
    }
    throw NoSolutionError("ΔN_d stays below the unit noise floor; no minimum detectable angle");
}

double min_detectable_angle(const SourceSpec& source) {
    switch (source.kind) {
        case SourceKind::coherent: {
            const double a = std::abs(source.alpha);
            if (!(a > 1.0)) throw NoSolutionError("coherent |α| <= 1: ΔN_d never reaches 1");
            return std::asin(1.0 / a);
        }
        case SourceKind::collinear_pdc: {
            if (!(source.r >= 0.0)) throw ValidationError("r must be >= 0");
            const double s2r = std::sinh(2.0 * source.r);
            if (!(s2r > 1.0)) throw NoSolutionError("collinear sinh 2r <= 1: ΔN_d never reaches 1");
            return std::asin(1.0 / s2r);
        }
        case SourceKind::noncollinear_pdc: {
            const Evaluator eval(source, Geometry::noncollinear, ObservableSpec::nd());
            return solve_noise_floor([&](double th) { return eval({th, 0.0}); });
        }
    }
    throw ValidationError("unknown source kind");
}

double error_propagation_angle(const SourceSpec& source, double theta) {
    const Geometry geometry =
        source.kind == SourceKind::noncollinear_pdc ? Geometry::noncollinear : Geometry::collinear;
    const Evaluator ih(source, geometry, ObservableSpec::intensity(Mode::aH));
    const Evaluator iv(source, geometry, ObservableSpec::intensity(Mode::aV));
    const Evaluator var(source, geometry, ObservableSpec::nd());
    auto mean = [&](double th) { return iv({th, 0.0}) - ih({th, 0.0}); };
    const double h = 1e-5;
    const double slope = (mean(theta + h) - mean(theta - h)) / (2.0 * h);
    const double spread = std::sqrt(var({theta, 0.0}));
    const double scale = std::max(1.0, std::abs(mean(theta)));
    if (std::abs(slope) <= 1e-8 * scale) return std::numeric_limits<double>::infinity();
    return spread / std::abs(slope);
}

}  // namespace morsim
