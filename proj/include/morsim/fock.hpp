#pragma once

// Truncated four-mode bosonic Fock states and photon-number-conserving
// two-mode unitaries.
//
// Lift convention (used everywhere in this library): a TwoModeUnitary u acting
// on the ordered mode pair (first, second) maps creation operators as
//
//     first†  -> u(0,0) first† + u(0,1) second†
//     second† -> u(1,0) first† + u(1,1) second†
//
// so that the ket evolves as |ψ> -> U|ψ>. With this convention the Schrödinger
// propagator of the circularly birefringent medium is the lift of the Jones
// rotation R(θ), and R(θ) applied to |1,1> gives
// (sinθ/√2)|2,0> − (sinθ/√2)|0,2> + cosθ|1,1> up to a global phase.
// Lifting is an anti-homomorphism: applying u and then v equals applying u·v.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace morsim {

using Complex = std::complex<double>;

/// Canonical mode order aH < aV < bH < bV.
enum class Mode : std::uint8_t { aH = 0, aV = 1, bH = 2, bV = 3 };

inline constexpr std::size_t kNumModes = 4;

constexpr std::size_t index(Mode m) { return static_cast<std::size_t>(m); }

const char* mode_name(Mode m);
Mode parse_mode(std::string_view name);

/// Photon count per mode, laid out in canonical mode order.
using Occupation = std::array<std::uint32_t, kNumModes>;

std::uint32_t total_photons(const Occupation& occ);

struct ModePair {
    Mode first;
    Mode second;
};

/// Components with |amplitude| below this are dropped and their weight moved to the tail.
inline constexpr double kPruneThreshold = 1e-15;

/// Immutable sparse pure state. Components are kept sorted by occupation
/// (lexicographic in canonical mode order) with unique keys.
class KetState {
public:
    using Component = std::pair<Occupation, Complex>;

    KetState() = default;

    /// Duplicate occupations are summed; components below kPruneThreshold are
    /// dropped and their squared magnitude added to `tail`.
    static KetState from_components(std::vector<Component> components, double tail = 0.0);

    std::span<const Component> components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    bool empty() const { return components_.empty(); }

    /// Weight of components discarded by source truncation or pruning.
    double truncation_tail() const { return tail_; }

    /// Squared norm of the stored amplitudes.
    double norm2() const;

    Complex amplitude(const Occupation& occ) const;

private:
    std::vector<Component> components_;
    double tail_ = 0.0;
};

KetState make_basis_state(const Occupation& occ);

/// ⟨bra|ket⟩, conjugate-linear in `bra`.
Complex inner_product(const KetState& bra, const KetState& ket);

/// |⟨occ|state⟩|².
double projection_probability(const KetState& state, const Occupation& occ);

/// ⟨∏_m a_m†^{p_m} a_m^{p_m}⟩ = Σ |A(occ)|² ∏_m n_m!/(n_m − p_m)!.
double normally_ordered_moment(const KetState& state, const std::array<std::uint32_t, kNumModes>& powers);

/// 2×2 unitary on an ordered mode pair. Construction validates unitarity.
class TwoModeUnitary {
public:
    static constexpr double kTolerance = 1e-12;

    explicit TwoModeUnitary(const Eigen::Matrix2cd& m);

    /// e^{i phase_angle} · rotation with `rotation` real orthogonal. Lifts of
    /// this form run in real arithmetic with the phase applied per photon.
    static TwoModeUnitary phased_real(const Eigen::Matrix2d& rotation, double phase_angle);

    static TwoModeUnitary identity() { return TwoModeUnitary(Eigen::Matrix2cd::Identity()); }

    const Eigen::Matrix2cd& matrix() const { return m_; }

    struct RealForm {
        Eigen::Matrix2d rotation;
        double phase_angle;
    };
    const std::optional<RealForm>& real_form() const { return real_form_; }

    TwoModeUnitary operator*(const TwoModeUnitary& rhs) const { return TwoModeUnitary(m_ * rhs.m_); }

private:
    Eigen::Matrix2cd m_;
    std::optional<RealForm> real_form_;
};

/// Matrix of the lifted unitary on the n-photon subspace of a mode pair.
/// Basis index k stands for |n−k, k> (n−k photons in the first mode).
Eigen::MatrixXcd two_mode_unitary_subspace_matrix(const TwoModeUnitary& u, std::uint32_t n);

KetState apply_two_mode_unitary(const KetState& state, ModePair pair, const TwoModeUnitary& u);

}  // namespace morsim
