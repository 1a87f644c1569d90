#pragma once

// Parameter sweeps written as CSV. Every float is printed with
// 17 significant digits; metadata rows start with '#'.

#include <iosfwd>
#include <optional>

#include "morsim/detection.hpp"

namespace morsim::sweep {

enum class OutputMode { numeric, exact, both };

OutputMode parse_output_mode(std::string_view name);

struct SweepConfig {
    SourceKind source = SourceKind::collinear_pdc;
    double alpha = 1.0;  // coherent amplitude (real)
    double r = 0.5;
    double phi = 0.0;
    Geometry geometry = Geometry::collinear;
    ObservableKind observable = ObservableKind::two_photon_coincidence;
    Mode mode = Mode::aH;
    ModePair pair{Mode::aH, Mode::aV};
    std::optional<Occupation> target;  // projection; defaults by geometry
    MediumSpec medium;                 // supplies θ₊ for fringe scans

    double grid_min = 0.0;
    double grid_max = 6.283185307179586;
    std::size_t points = 201;
    /// θ samples per visibility fringe.
    std::size_t theta_points = 1025;

    OutputMode output = OutputMode::numeric;
    unsigned threads = 1;
    double epsilon = kDefaultEpsilon;
    int pair_cap = kDefaultPairCap;
    std::optional<int> n_max;
};

/// Throws ValidationError for points < 2 or min >= max.
void validate_grid(const SweepConfig& config);

SourceSpec make_source(const SweepConfig& config, double r);
ObservableSpec make_observable(const SweepConfig& config);

/// CSV `theta,value[,value_exact]`.
void run_fringe(const SweepConfig& config, std::ostream& out, std::ostream& diag);

/// CSV `r,visibility[,visibility_exact]`.
void run_visibility(const SweepConfig& config, std::ostream& out);

/// CSV `r,value[,value_exact]` of the four-photon projection at θ = 0, then
/// `# argmax_r=...,max=...`.
void run_envelope(const SweepConfig& config, std::ostream& out);

/// CSV `mean_n,theta_m[,theta_m_exact]` on a log-spaced ⟨N⟩ grid, then `# slope=...`.
void run_sensitivity(const SweepConfig& config, std::ostream& out);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Golden-section maximization of a unimodal f on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

}  // namespace morsim::sweep
