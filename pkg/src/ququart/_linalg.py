"""Small linear-algebra helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .validation import ValidationError


def hermitian_basis(dim):
    """Fixed orthogonal basis of dim x dim Hermitian matrices.

    Ordering: the `dim` diagonal units E_kk first, then for each pair j < k
    (row-major pair order) the symmetric unit E_jk + E_kj followed by the
    antisymmetric unit i(E_jk - E_kj).  Real coefficients in this basis are
    in bijection with Hermitian matrices.
    """
    basis = []
    for k in range(dim):
        mat = np.zeros((dim, dim), dtype=complex)
        mat[k, k] = 1.0
        basis.append(mat)
    for j in range(dim):
        for k in range(j + 1, dim):
            mat = np.zeros((dim, dim), dtype=complex)
            mat[j, k] = 1.0
            mat[k, j] = 1.0
            basis.append(mat)
            mat = np.zeros((dim, dim), dtype=complex)
            mat[j, k] = 1.0j
            mat[k, j] = -1.0j
            basis.append(mat)
    return np.array(basis)


def psd_sqrt(matrix, *, eig_floor=1e-10, name="matrix"):
    """Principal square root of a Hermitian near-PSD matrix.

    Eigenvalues in [-eig_floor, 0) are clamped to zero; anything more
    negative raises ValidationError (the input is genuinely indefinite).
    """
    herm = 0.5 * (matrix + matrix.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    if vals.min() < -eig_floor:
        raise ValidationError(
            f"{name} has eigenvalue {vals.min():.3e}, below the positivity "
            f"tolerance -{eig_floor:g}; cannot take a PSD square root"
        )
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fix_global_phase(vec, *, tol=1e-12):
    """Rotate a complex vector so its first nonzero entry is real non-negative."""
    arr = np.asarray(vec, dtype=complex)
    for entry in arr.flat:
        if abs(entry) > tol:
            return arr * np.exp(-1j * np.angle(entry))
    return arr.copy()


def max_phase_aligned_diff(a, b):
    """Max elementwise |a - e^{i phi} b| minimized over the global phase phi."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = np.vdot(b.ravel(), a.ravel())
    if abs(overlap) < 1e-300:
        return float(np.max(np.abs(a - b)))
    return float(np.max(np.abs(a - np.exp(1j * np.angle(overlap)) * b)))
