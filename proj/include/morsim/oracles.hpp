#pragma once

// Closed-form MOR results. This header deliberately has no dependency on the
// Fock engine so the two can serve as independent checks on each other.

#include <array>
#include <complex>
#include <string_view>

namespace morsim::oracles {

enum class OracleId {
    coh_ix,               // |α|² cos²(θ/2)
    coh_iy,               // |α|² sin²(θ/2)
    coh_var,              // |α|² sin²θ
    col_ihv,              // cos²θ sinh²r cosh²r + sinh⁴r
    col_var,              // 4 sinh²r cosh²r sin²θ
    p_non,                // tanh⁴r / cosh⁴r · cos²(2θ)
    p_col,                // tanh⁴r / cosh²r · (1 + 3 cos 2θ)² / 16
    i_hhvv,               // collinear four-photon Glauber coincidence
    two_photon_amplitudes,  // amplitude triple, see two_photon_amplitudes()
    vis2_closed,          // 1 / (1 + 2 tanh²r)
};

OracleId parse_oracle_id(std::string_view name);
const char* oracle_name(OracleId id);

struct OracleParams {
    double r = 0.0;
    std::complex<double> alpha{};
    double theta = 0.0;
};

/// Scalar oracles. two_photon_amplitudes is not scalar and is rejected here.
double oracle(OracleId id, const OracleParams& params);

/// Amplitudes on (|2,0>, |0,2>, |1,1>) of the rotated |1,1> pair state, global phase removed.
std::array<double, 3> two_photon_amplitudes(double theta);

/// Argmax and max of the θ = 0 envelopes of p_non and p_col over r.
struct EnvelopePeak {
    double r;
    double value;
};
EnvelopePeak noncollinear_envelope_peak();
EnvelopePeak collinear_envelope_peak();

}  // namespace morsim::oracles
