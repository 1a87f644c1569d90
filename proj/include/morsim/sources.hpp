#pragma once

#include <complex>
#include <optional>

#include "morsim/fock.hpp"

namespace morsim {

enum class SourceKind { coherent, collinear_pdc, noncollinear_pdc };

const char* source_kind_name(SourceKind k);
SourceKind parse_source_kind(std::string_view name);

/// Default absolute accuracy target for auto-selected truncation.
inline constexpr double kDefaultEpsilon = 1e-10;
/// Largest number of photon pairs the auto-selection may keep.
inline constexpr int kDefaultPairCap = 256;

struct SourceSpec {
    SourceKind kind = SourceKind::collinear_pdc;
    Complex alpha{};   // coherent only
    double r = 0.0;    // PDC interaction parameter
    double phi = 0.0;  // pump phase, collinear PDC only
    /// Fixed number of retained photon pairs. When empty, chosen from `epsilon`.
    std::optional<int> n_max;
    double epsilon = kDefaultEpsilon;
    int n_max_cap = kDefaultPairCap;

    static SourceSpec coherent(Complex alpha);
    static SourceSpec collinear(double r, double phi = 0.0);
    static SourceSpec noncollinear(double r);
};

struct MeanPhotonNumber {
    double value = 0.0;
};

/// Σ (−e^{iφ} tanh r)^n |n>_aH |n>_aV / cosh r for n ≤ n_max.
KetState collinear_state(double r, double phi, int n_max);

/// Σ_n Σ_m (−1)^m tanh^n r / cosh²r |n−m, m, m, n−m> for n ≤ n_max.
KetState noncollinear_state(double r, int n_max);

/// Output intensities (I_x, I_y) for an x-polarized coherent input rotated by θ.
std::pair<double, double> coherent_intensity_pair(Complex alpha, double theta);

MeanPhotonNumber mean_photon_number(const SourceSpec& spec);

/// Probability weight of the pair sectors n > n_max.
double truncation_tail(SourceKind kind, double r, int n_max);

/// Upper bound on the contribution of discarded pair sectors n > n_max to any
/// moment of total order `moment_order` on one spatial mode pair. A sector
/// holds at most 2n photons in a pair, so the bound is Σ_{n > n_max} p(n) (2n)^k,
/// summed to convergence.
double weighted_truncation_tail(SourceKind kind, double r, int n_max, int moment_order);

/// Smallest n_max with weighted_truncation_tail < epsilon.
/// Throws TruncationError if the cap is reached first.
int select_n_max(SourceKind kind, double r, double epsilon, int moment_order, int cap = kDefaultPairCap);

/// Fock state of a PDC source: explicit n_max if set, otherwise auto-selected
/// for moments of the given order. Coherent sources are analytic-only and rejected.
KetState prepare_state(const SourceSpec& spec, int moment_order);

}  // namespace morsim
