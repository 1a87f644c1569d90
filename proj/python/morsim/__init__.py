"""Fock-space simulator of magneto-optical rotation with coherent and PDC light."""

from ._core import (
    Geometry,
    KetState,
    Mode,
    NoSolutionError,
    SourceKind,
    SourceSpec,
    TruncationError,
    UndefinedVisibilityError,
    ValidationError,
    apply_mor,
    basis_state,
    coherent,
    collinear,
    collinear_state,
    evaluate,
    fringe_scan,
    mean_photon_number,
    min_detectable_angle,
    noncollinear,
    noncollinear_state,
    nd_variance,
    oracle,
    rotation_matrix,
    subspace_matrix,
    two_photon_amplitudes,
    verify,
    visibility,
)

__all__ = [name for name in dir() if not name.startswith("_")]
