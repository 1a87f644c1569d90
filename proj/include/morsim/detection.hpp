#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "morsim/fock.hpp"
#include "morsim/mor_channel.hpp"
#include "morsim/oracles.hpp"
#include "morsim/sources.hpp"

namespace morsim {

enum class ObservableKind {
    intensity,                // ⟨a†a⟩ on one mode
    two_photon_coincidence,   // ⟨a†b†ab⟩ on a pair
    four_photon_glauber,      // ⟨a†²b†²a²b²⟩ on a pair
    four_photon_projection,   // |⟨target|ψ⟩|²
    nd_variance,              // Var(n_second − n_first) on a pair
};

const char* observable_kind_name(ObservableKind k);
ObservableKind parse_observable_kind(std::string_view name);

struct ObservableSpec {
    ObservableKind kind = ObservableKind::two_photon_coincidence;
    Mode mode = Mode::aH;
    ModePair pair{Mode::aH, Mode::aV};
    Occupation target{};

    static ObservableSpec intensity(Mode m);
    static ObservableSpec two_photon(ModePair p = {Mode::aH, Mode::aV});
    static ObservableSpec glauber4(ModePair p = {Mode::aH, Mode::aV});
    static ObservableSpec projection(const Occupation& target);
    static ObservableSpec nd(ModePair p = {Mode::aH, Mode::aV});

    /// Throws ValidationError on identical pair modes or a projection target without 4 photons.
    void validate() const;

    /// Order of the normally ordered moments the observable needs (0 for projections).
    int moment_order() const;
};

/// Measure an (already evolved) state. Moments are taken over stored components only.
double measure(const KetState& state, const ObservableSpec& obs);

/// Prepares the source once and evaluates the observable at any medium angles.
class Evaluator {
public:
    Evaluator(const SourceSpec& source, Geometry geometry, const ObservableSpec& obs, MorOptions options = {});

    double operator()(const MorAngles& angles) const;

    /// Fock state fed into the medium; empty for coherent sources.
    const KetState& input_state() const { return input_; }

private:
    SourceSpec source_;
    Geometry geometry_;
    ObservableSpec obs_;
    MorOptions options_;
    KetState input_;
};

double evaluate(const SourceSpec& source, const MorAngles& angles, Geometry geometry, const ObservableSpec& obs,
                const MorOptions& options = {});

/// Closed form matching a source/geometry/observable combination, if one exists.
std::optional<oracles::OracleId> closed_form_for(const SourceSpec& source, Geometry geometry,
                                                 const ObservableSpec& obs);

/// Evaluate through the closed form. Throws ValidationError when none exists.
double evaluate_exact(const SourceSpec& source, const MorAngles& angles, Geometry geometry,
                      const ObservableSpec& obs);

struct FringeSeries {
    std::vector<double> theta_grid;
    std::vector<double> values;
    SourceSpec source;
    ObservableSpec observable;
    Geometry geometry = Geometry::collinear;
};

/// Evaluate on every grid point with fixed θ₊. Grid points are independent,
/// so the result does not depend on `threads`.
FringeSeries fringe_scan(const SourceSpec& source, double theta_plus, const std::vector<double>& theta_grid,
                         Geometry geometry, const ObservableSpec& obs, unsigned threads = 1,
                         const MorOptions& options = {});

/// Same, through the closed form.
FringeSeries fringe_scan_exact(const SourceSpec& source, const std::vector<double>& theta_grid,
                               Geometry geometry, const ObservableSpec& obs);

/// `points` values spanning [lo, hi] inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t points);

struct VisibilityResult {
    double v;
    double theta_at_max;
    double theta_at_min;
};

/// (max − min) / (max + min) over the series.
VisibilityResult visibility(const FringeSeries& series);

/// Fringe period in θ known from the closed forms, if any.
std::optional<double> known_period(const SourceSpec& source, Geometry geometry, const ObservableSpec& obs);

/// Smallest lag at which the sampled series repeats itself (uniform grid assumed).
std::optional<double> detect_period(const FringeSeries& series, double rel_tol = 1e-9);

/// Dominant nonzero Fourier frequency, in cycles per 2π, of a series sampled
/// uniformly over one 2π window. A duplicated endpoint (θ_last = θ_0 + 2π) is dropped.
int dominant_frequency(const FringeSeries& series);

/// (ΔN_d)² on the (aH, aV) outputs.
double nd_variance(const SourceSpec& source, const MorAngles& angles, Geometry geometry);

/// Smallest θ > 0 with ΔN_d(θ) = 1. Closed form for coherent and collinear
/// sources; the non-collinear case is solved by bisection on the Fock variance,
/// which has no solution because that variance is already above 1 at θ = 0.
double min_detectable_angle(const SourceSpec& source);

/// Smallest θ in (0, π/2] where `variance(θ)` reaches 1, by scan + bisection.
/// Throws NoSolutionError if the variance never reaches 1 or already does at θ = 0.
double solve_noise_floor(const std::function<double(double)>& variance);

/// Error-propagation estimate ΔN_d / |d⟨N_d⟩/dθ| at θ. Infinite when ⟨N_d⟩ is flat.
double error_propagation_angle(const SourceSpec& source, double theta);

}  // namespace morsim
