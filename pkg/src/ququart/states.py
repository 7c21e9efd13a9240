"""State representations and figures of merit for biphoton ququarts.

A ququart is the joint polarization state of a photon pair, a
4-dimensional quantum system.  The basis order is fixed everywhere in
this package:

    index 0: |H, H>      index 1: |H, V>
    index 2: |V, H>      index 3: |V, V>

where the first slot is the signal-wavelength photon and the second the
idler.  Pure states are plain complex vectors of length 4 and mixed
states are 4x4 complex density matrices; both are validated rather than
wrapped in classes.

All metrics treat eigenvalues in [-eig_floor, 0) as exact zeros (matrices
reconstructed from data sit at the boundary of the positive cone); more
negative eigenvalues raise :class:`~ququart.validation.ValidationError`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ._linalg import fix_global_phase, psd_sqrt
from .validation import ValidationError, as_complex_array, validate_pure_state

__all__ = [
    "BASIS_LABELS",
    "DIM",
    "EIG_FLOOR",
    "SchmidtDecomposition",
    "StateComparison",
    "canonical_phase",
    "compare_states",
    "concurrence",
    "concurrence_pure",
    "density_from_pure",
    "entropy",
    "fidelity",
    "purity",
    "schmidt_decompose",
    "trace_distance",
]

DIM = 4
BASIS_LABELS = ("HH", "HV", "VH", "VV")

#: Default positivity tolerance: eigenvalues in [-EIG_FLOOR, 0) clamp to zero.
EIG_FLOOR = 1e-10

# sigma_y (x) sigma_y, the two-qubit spin-flip operator (real-valued).
_SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


def _as_hermitian(rho, name="density matrix"):
    """Shape/finiteness/Hermiticity check; returns the symmetrized matrix.

    Trace and positivity are deliberately not enforced here: each metric
    applies its own positivity policy so that matrices published with
    rounded entries remain usable.
    """
    mat = as_complex_array(rho, (4, 4), name)
    defect = float(np.max(np.abs(mat - mat.conj().T)))
    if defect > 1e-6:
        raise ValidationError(
            f"{name} is not Hermitian: max |rho - rho†| = {defect:.3e}"
        )
    return 0.5 * (mat + mat.conj().T)


def canonical_phase(psi):
    """Return psi with its global phase fixed: first nonzero amplitude real >= 0."""
    return fix_global_phase(validate_pure_state(psi))


def density_from_pure(psi):
    """Rank-1 density matrix |psi><psi| of a normalized pure state."""
    vec = validate_pure_state(psi)
    return np.outer(vec, vec.conj())


def purity(rho):
    """Tr[rho²]: 1 for pure states, 1/4 for the maximally mixed ququart."""
    mat = _as_hermitian(rho)
    return float(np.real(np.trace(mat @ mat)))


def entropy(rho, *, eig_floor=EIG_FLOOR):
    """Base-4 von Neumann entropy -sum_k lambda_k log4 lambda_k.

    0 log 0 is taken as 0.  Eigenvalues in [-eig_floor, 0) are clamped to
    zero before the logarithm; more negative ones raise ValidationError.
    The result is 0 for pure states and 1 for the maximally mixed state.
    """
    mat = _as_hermitian(rho)
    vals = np.linalg.eigvalsh(mat)
    if vals.min() < -eig_floor:
        raise ValidationError(
            f"density matrix has eigenvalue {vals.min():.3e}, below the "
            f"positivity tolerance -{eig_floor:g}"
        )
    vals = np.clip(vals, 0.0, None)
    vals = vals[vals > 0.0]
    return float(-(vals * np.log(vals)).sum() / np.log(4.0))


def fidelity(rho_a, rho_b, *, eig_floor=EIG_FLOOR):
    """Fidelity F = (Tr sqrt(sqrt(rho_a) rho_b sqrt(rho_a)))².

    Symmetric in its arguments; equals <psi|rho_b|psi> when rho_a is the
    pure state |psi><psi|.  Matrix square roots are taken by Hermitian
    eigendecomposition with the clamping policy described in `entropy`.
    """
    mat_a = _as_hermitian(rho_a, "rho_a")
    mat_b = _as_hermitian(rho_b, "rho_b")
    root_a = psd_sqrt(mat_a, eig_floor=eig_floor, name="rho_a")
    inner = root_a @ mat_b @ root_a
    vals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    if vals.min() < -eig_floor:
        raise ValidationError(
            f"fidelity inner product has eigenvalue {vals.min():.3e}, below "
            f"the positivity tolerance -{eig_floor:g}"
        )
    # round-off in the near-zero eigenvalues would inflate to sqrt(eps)
    # after the root; drop anything within round-off of zero instead
    vals = np.where(vals > 64.0 * np.finfo(float).eps * max(float(vals.max()), 0.0), vals, 0.0)
    return float(np.sqrt(vals).sum() ** 2)


def trace_distance(rho_a, rho_b):
    """Trace distance (1/2) ||rho_a - rho_b||_1 between two Hermitian matrices."""
    diff = _as_hermitian(rho_a, "rho_a") - _as_hermitian(rho_b, "rho_b")
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def concurrence_pure(psi):
    """Concurrence 2 |c0 c3 - c1 c2| of a pure ququart; 0 iff separable."""
    vec = validate_pure_state(psi)
    return float(2.0 * abs(vec[0] * vec[3] - vec[1] * vec[2]))


def concurrence(rho):
    """Wootters concurrence of a (possibly mixed) two-qubit state.

    C = max(0, r1 - r2 - r3 - r4) where the r_i, sorted descending, square
    to the eigenvalues of rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
    Invariant under local unitaries and equal to `concurrence_pure` on
    rank-1 states.
    """
    mat = _as_hermitian(rho)
    vals, vecs = np.linalg.eigh(mat)
    # Exact-rank square root: eigenvalues within round-off of zero (or
    # negative) are dropped outright, so rank-deficient states do not grow
    # sqrt(eps)-sized ghost directions.  The r_i are then read off as
    # singular values of conj(sqrt(rho)) F sqrt(rho), which is numerically
    # stable where sqrt of the near-zero product eigenvalues is not.
    tol = 64.0 * np.finfo(float).eps * max(float(vals.max()), 0.0)
    kept = np.where(vals > tol, vals, 0.0)
    root = (vecs * np.sqrt(kept)) @ vecs.conj().T
    r = np.linalg.svd(root.conj() @ _SPIN_FLIP @ root, compute_uv=False)
    return float(max(0.0, 2.0 * r[0] - r.sum()))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Biorthogonal form of a pure ququart.

    psi = sqrt(weights[0]) |major1, major2> + sqrt(weights[1]) |minor1, minor2>

    with weights sorted descending and summing to 1, and the two vectors of
    each photon orthonormal.  ``signal_*`` vectors live on the first
    (signal) qubit, ``idler_*`` on the second.
    """

    weights: tuple[float, float]
    signal_major: np.ndarray
    signal_minor: np.ndarray
    idler_major: np.ndarray
    idler_minor: np.ndarray

    def reassemble(self):
        """Rebuild the length-4 state vector from the decomposition."""
        return np.sqrt(self.weights[0]) * np.kron(self.signal_major, self.idler_major) + np.sqrt(
            self.weights[1]
        ) * np.kron(self.signal_minor, self.idler_minor)


def schmidt_decompose(psi):
    """Schmidt decomposition of a pure ququart across the signal/idler split.

    The concurrence of the state equals 2 sqrt(weights[0] * weights[1]).
    """
    vec = validate_pure_state(psi)
    amplitude = vec.reshape(2, 2)  # amplitude[i, j] = <i_signal, j_idler | psi>
    left, singulars, right = np.linalg.svd(amplitude)
    weights = np.clip(singulars**2, 0.0, None)
    weights = weights / weights.sum()
    # Phase convention: each signal vector leads with a real non-negative
    # entry; the compensating phase moves into the idler partner so the
    # reassembled product is unchanged.
    signal = []
    idler = []
    for k in range(2):
        fixed = fix_global_phase(left[:, k])
        shift = np.vdot(left[:, k], fixed)  # unit modulus
        signal.append(fixed)
        idler.append(right[k, :] * np.conj(shift))
    return SchmidtDecomposition(
        weights=(float(weights[0]), float(weights[1])),
        signal_major=signal[0],
        signal_minor=signal[1],
        idler_major=idler[0],
        idler_minor=idler[1],
    )


@dataclass(frozen=True)
class StateComparison:
    """Side-by-side figures of merit for two density matrices."""

    fidelity: float
    trace_distance: float
    max_abs_difference: float
    purity_a: float
    purity_b: float
    entropy_a: float
    entropy_b: float
    concurrence_a: float
    concurrence_b: float

    def as_dict(self):
        return asdict(self)


def compare_states(rho_a, rho_b, *, eig_floor=EIG_FLOOR):
    """Compute the full comparison block between two states."""
    mat_a = _as_hermitian(rho_a, "rho_a")
    mat_b = _as_hermitian(rho_b, "rho_b")
    return StateComparison(
        fidelity=fidelity(mat_a, mat_b, eig_floor=eig_floor),
        trace_distance=trace_distance(mat_a, mat_b),
        max_abs_difference=float(np.max(np.abs(mat_a - mat_b))),
        purity_a=purity(mat_a),
        purity_b=purity(mat_b),
        entropy_a=entropy(mat_a, eig_floor=eig_floor),
        entropy_b=entropy(mat_b, eig_floor=eig_floor),
        concurrence_a=concurrence(mat_a),
        concurrence_b=concurrence(mat_b),
    )
