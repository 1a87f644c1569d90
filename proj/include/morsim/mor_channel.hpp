#pragma once

#include <array>
#include <optional>

#include "morsim/fock.hpp"

namespace morsim {

/// Rotation angle θ and global phase angle θ₊ seen by a mode travelling along B.
struct MorAngles {
    double theta = 0.0;
    double theta_plus = 0.0;
};

/// Medium description: either susceptibilities with k and l, or the angles
/// directly. When both are present the direct angles win.
struct MediumSpec {
    std::optional<double> chi_plus;
    std::optional<double> chi_minus;
    std::optional<double> k;
    std::optional<double> l;
    std::optional<double> theta;
    std::optional<double> theta_plus;

    static MediumSpec from_susceptibilities(double chi_plus, double chi_minus, double k, double l);
    static MediumSpec from_angles(double theta, double theta_plus = 0.0);

    bool has_raw() const { return chi_plus || chi_minus || k || l; }
    bool has_direct() const { return theta || theta_plus; }

    /// χ₊ + χ₋ and Ω = χ₊ − χ₋; only defined for the raw form.
    double chi_sum() const;
    double omega() const;

    struct Resolved {
        MorAngles angles;
        bool direct_overrode_raw = false;
    };
    /// θ = k l (χ₊ − χ₋), θ₊ = k l χ₊, unless overridden by direct values.
    Resolved resolve() const;
};

enum class Geometry { collinear, noncollinear };

const char* geometry_name(Geometry g);
Geometry parse_geometry(std::string_view name);

/// e^{iθ₊} e^{iθ/2} [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]].
TwoModeUnitary rotation_matrix(double theta, double theta_plus);

struct MorOptions {
    /// Test hook: rotate the counter-propagating b modes by +θ instead of −θ.
    bool inject_b_sign_error = false;
};

/// Propagate through the medium. Collinear: rotation on (aH, aV) only, b modes
/// must be empty. Non-collinear: additionally rotation_matrix(−θ, −θ₊) on (bH, bV).
KetState apply_mor(const KetState& state, const MorAngles& angles, Geometry geometry,
                   const MorOptions& options = {});

/// Amplitudes (c, d, f) on (|2,0>, |0,2>, |1,1>) of |1,1> after rotation, global phase removed.
std::array<double, 3> two_photon_closed_form(double theta);

}  // namespace morsim
