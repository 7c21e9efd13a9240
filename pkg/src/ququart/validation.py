"""Input validation helpers: arrays in, validated (and normalized) arrays out.

Every public entry point of the package funnels its array-like inputs
through these checks, so downstream code can assume well-formed values.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ValidationError",
    "as_complex_array",
    "as_real_array",
    "validate_counts",
    "validate_density_matrix",
    "validate_pure_state",
    "validate_stokes",
]


class ValidationError(ValueError):
    """An input failed a structural or physical check."""


def as_complex_array(values, shape, name="value"):
    """Coerce to a complex array of the given shape, rejecting non-finite data."""
    try:
        arr = np.asarray(values, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} is not numeric: {exc}") from None
    if arr.shape != tuple(shape):
        raise ValidationError(f"{name} must have shape {tuple(shape)}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def as_real_array(values, shape, name="value"):
    """Coerce to a float array of the given shape, rejecting non-finite data."""
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} is not real-valued: {exc}") from None
    if arr.shape != tuple(shape):
        raise ValidationError(f"{name} must have shape {tuple(shape)}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def validate_pure_state(psi, *, atol=1e-6, name="pure state"):
    """Validate a length-4 state vector and return it renormalized exactly.

    The norm may deviate from 1 by at most `atol`; larger deviations are an
    error rather than silently rescaled.
    """
    vec = as_complex_array(psi, (4,), name)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > atol:
        raise ValidationError(
            f"{name} norm {norm:.9g} deviates from 1 by more than {atol:g}"
        )
    return vec / norm


def validate_density_matrix(rho, *, atol=1e-9, eig_floor=1e-10, name="density matrix"):
    """Validate Hermiticity, unit trace, and positivity; return (rho + rho†)/2.

    `atol` bounds the Hermiticity defect and the trace deviation; `eig_floor`
    is how far below zero an eigenvalue may sit before the matrix is rejected
    as indefinite.  Reference data published with rounded entries is accepted
    by passing looser tolerances.
    """
    mat = as_complex_array(rho, (4, 4), name)
    herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
    if herm_defect > atol:
        raise ValidationError(
            f"{name} is not Hermitian: max |rho - rho†| = {herm_defect:.3e} > {atol:g}"
        )
    trace = complex(np.trace(mat))
    if abs(trace - 1.0) > atol:
        raise ValidationError(f"{name} trace {trace:.9g} deviates from 1 by more than {atol:g}")
    sym = 0.5 * (mat + mat.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym).min())
    if min_eig < -eig_floor:
        raise ValidationError(
            f"{name} has eigenvalue {min_eig:.3e}, below the positivity tolerance -{eig_floor:g}"
        )
    return sym


def validate_stokes(stokes, *, atol=1e-9, name="Stokes vector"):
    """Validate a 4-element Stokes vector (s0 > 0, polarized part <= s0)."""
    vec = as_real_array(stokes, (4,), name)
    s0 = vec[0]
    if s0 <= 0:
        raise ValidationError(f"{name} must have positive total intensity s0, got {s0:g}")
    polarized = float(vec[1] ** 2 + vec[2] ** 2 + vec[3] ** 2)
    if polarized > s0**2 + atol * max(1.0, s0**2):
        raise ValidationError(
            f"{name} polarized intensity exceeds s0: sqrt(s1²+s2²+s3²) = "
            f"{np.sqrt(polarized):.9g} > s0 = {s0:.9g}"
        )
    return vec


def validate_counts(counts, *, name="counts", integral=True):
    """Validate 16 non-negative coincidence counts.

    With ``integral`` (the default) entries must be whole numbers within
    1e-9 and an int64 array is returned, the form recorded by real and
    simulated acquisitions.  With ``integral=False`` any non-negative
    reals are accepted and returned as float64, which lets noiseless
    Born-rule predictions feed straight into reconstruction.  Error
    messages name the offending index (1-based, matching the
    measurement-setting numbering).
    """
    try:
        arr = np.asarray(counts, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} are not numeric: {exc}") from None
    if arr.ndim != 1 or arr.shape[0] != 16:
        got = arr.shape[0] if arr.ndim == 1 else f"shape {arr.shape}"
        missing = ""
        if arr.ndim == 1 and arr.shape[0] < 16:
            missing = f" (missing index {arr.shape[0] + 1})"
        raise ValidationError(f"{name} must have 16 entries, got {got}{missing}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contain non-finite entries")
    for idx, value in enumerate(arr):
        if value < 0:
            raise ValidationError(f"{name}[{idx + 1}] is negative: {value:g}")
        if integral and abs(value - round(value)) > 1e-9:
            raise ValidationError(f"{name}[{idx + 1}] is not an integer: {value:g}")
    if integral:
        return np.rint(arr).astype(np.int64)
    return arr
