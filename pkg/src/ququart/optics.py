"""Jones-calculus polarization optics with wavelength-dependent retarders.

Conventions (fixed package-wide):

* Jones vectors are (E_H, E_V) in the linear horizontal/vertical basis.
* A retarder with fast axis at angle theta from horizontal is
  R(theta) diag(e^{-i Gamma/2}, e^{+i Gamma/2}) R(-theta): the fast axis
  leads in phase and the retardance Gamma is split symmetrically.
* Waveplate retardance scales inversely with wavelength (dispersionless
  model): Gamma(lambda) = Gamma_design * lambda_design / lambda.
* Circular states: |R> = (|H> + i|V>)/sqrt(2), |L> = (|H> - i|V>)/sqrt(2),
  so |R> has Stokes s3 = +1 with s3 = 2 Im(E_H* E_V).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import hermitian_basis
from .validation import (
    ValidationError,
    as_complex_array,
    validate_stokes,
)

__all__ = [
    "CalibrationError",
    "PROBE_FIELDS",
    "WaveplateSpec",
    "calibration_probes",
    "jones_from_stokes_probes",
    "jones_to_stokes",
    "polarizer_projector",
    "ququart_unitary",
    "retarder_jones",
    "rotation_matrix",
    "stokes_after_element",
    "stokes_to_jones",
    "waveplate_jones",
    "waveplate_retardance",
]

#: Design retardance by waveplate kind, in radians at the design wavelength.
DESIGN_RETARDANCE = {"half": np.pi, "quarter": np.pi / 2.0}

_HERM4 = hermitian_basis(4)


class CalibrationError(RuntimeError):
    """Probe data could not be explained by a single Jones matrix.

    Carries the worst per-probe residual (normalized by the probe's input
    intensity) in the ``residual`` attribute.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def rotation_matrix(theta):
    """2x2 rotation by `theta` radians (counterclockwise, H toward V)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def retarder_jones(retardance, axis_angle):
    """Jones matrix of a linear retarder.

    Parameters
    ----------
    retardance : float
        Phase delay Gamma in radians between fast and slow axes.
    axis_angle : float
        Fast-axis angle from horizontal, in radians.
    """
    half = 0.5 * retardance
    c, s = np.cos(half), np.sin(half)
    cos2, sin2 = np.cos(2.0 * axis_angle), np.sin(2.0 * axis_angle)
    return np.array(
        [
            [c - 1j * s * cos2, -1j * s * sin2],
            [-1j * s * sin2, c + 1j * s * cos2],
        ]
    )


def polarizer_projector(axis):
    """Projector onto the transmission axis of an ideal linear polarizer."""
    if axis == "horizontal":
        return np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    if axis == "vertical":
        return np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    raise ValidationError(f"polarizer axis must be 'horizontal' or 'vertical', got {axis!r}")


@dataclass(frozen=True)
class WaveplateSpec:
    """A waveplate: kind, design wavelength, and fast-axis orientation.

    ``fast_axis_deg`` is measured from the axis named by
    ``angle_reference`` ('from_horizontal' or 'from_vertical') and is
    normalized into [0, 180): a fast axis is a line, not a direction.
    """

    kind: str
    design_wavelength_nm: float
    fast_axis_deg: float
    angle_reference: str = "from_horizontal"

    def __post_init__(self):
        if self.kind not in DESIGN_RETARDANCE:
            raise ValidationError(
                f"waveplate kind must be one of {sorted(DESIGN_RETARDANCE)}, got {self.kind!r}"
            )
        if not (np.isfinite(self.design_wavelength_nm) and self.design_wavelength_nm > 0):
            raise ValidationError(
                f"design wavelength must be positive, got {self.design_wavelength_nm!r}"
            )
        if self.angle_reference not in ("from_horizontal", "from_vertical"):
            raise ValidationError(
                "angle_reference must be 'from_horizontal' or 'from_vertical', "
                f"got {self.angle_reference!r}"
            )
        if not np.isfinite(self.fast_axis_deg):
            raise ValidationError("fast_axis_deg must be finite")
        object.__setattr__(self, "fast_axis_deg", float(self.fast_axis_deg) % 180.0)

    def axis_from_horizontal_deg(self):
        """Fast-axis angle re-expressed from the horizontal axis, in [0, 180)."""
        if self.angle_reference == "from_horizontal":
            return self.fast_axis_deg
        return (90.0 - self.fast_axis_deg) % 180.0


def waveplate_retardance(plate, wavelength_nm):
    """Retardance of `plate` at `wavelength_nm` (Gamma_design * lambda_design / lambda)."""
    if not (np.isfinite(wavelength_nm) and wavelength_nm > 0):
        raise ValidationError(f"wavelength must be positive, got {wavelength_nm!r}")
    return DESIGN_RETARDANCE[plate.kind] * plate.design_wavelength_nm / wavelength_nm


def waveplate_jones(plate, wavelength_nm):
    """Jones matrix of `plate` as seen by light at `wavelength_nm`."""
    gamma = waveplate_retardance(plate, wavelength_nm)
    return retarder_jones(gamma, np.radians(plate.axis_from_horizontal_deg()))


def ququart_unitary(plate, signal_nm, idler_nm):
    """4x4 action of one physical plate crossed by both photons.

    The same plate is traversed by the signal (first slot) and idler
    (second slot) photons, each seeing its own retardance:
    U = J(signal_nm) (x) J(idler_nm).
    """
    return np.kron(waveplate_jones(plate, signal_nm), waveplate_jones(plate, idler_nm))


def jones_to_stokes(field):
    """Stokes vector (s0, s1, s2, s3) of a fully polarized Jones field."""
    vec = as_complex_array(field, (2,), "Jones vector")
    ex, ey = vec
    return np.array(
        [
            abs(ex) ** 2 + abs(ey) ** 2,
            abs(ex) ** 2 - abs(ey) ** 2,
            2.0 * np.real(np.conj(ex) * ey),
            2.0 * np.imag(np.conj(ex) * ey),
        ]
    )


def stokes_to_jones(stokes, *, atol=1e-9):
    """Jones vector of a fully polarized Stokes vector (global phase: E_H real >= 0).

    Raises ValidationError when the input has a depolarized component
    beyond `atol`; only pure polarization states correspond to Jones
    vectors.
    """
    vec = validate_stokes(stokes, atol=atol)
    s0, s1, s2, s3 = vec
    polarized = float(np.sqrt(s1**2 + s2**2 + s3**2))
    if s0 - polarized > atol * max(1.0, s0):
        raise ValidationError(
            f"Stokes vector is not fully polarized: degree of polarization "
            f"{polarized / s0:.9g} < 1"
        )
    ex = np.sqrt(max((s0 + s1) / 2.0, 0.0))
    if ex > 1e-12:
        ey = (s2 + 1j * s3) / (2.0 * ex)
    else:
        ey = np.sqrt(max((s0 - s1) / 2.0, 0.0))
    return np.array([ex + 0.0j, ey])


def stokes_after_element(jones, stokes):
    """Propagate a fully polarized Stokes vector through a Jones element."""
    mat = as_complex_array(jones, (2, 2), "Jones matrix")
    field = stokes_to_jones(stokes)
    return jones_to_stokes(mat @ field)


#: Jones vectors of the six standard calibration probes.
PROBE_FIELDS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "A": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    "R": np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
    "L": np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
}


def calibration_probes():
    """Unit-intensity Stokes vectors of the six standard probes, keyed by name."""
    return {name: jones_to_stokes(field) for name, field in PROBE_FIELDS.items()}


def _coherency_from_stokes(stokes):
    """2x2 coherency matrix <E E†> encoded by a Stokes vector."""
    s0, s1, s2, s3 = stokes
    return 0.5 * np.array(
        [[s0 + s1, s2 - 1j * s3], [s2 + 1j * s3, s0 - s1]], dtype=complex
    )


def jones_from_stokes_probes(probes, *, residual_tol=1e-3):
    """Recover a 2x2 Jones matrix from (input, output) Stokes probe pairs.

    Works by linear least squares over the 16 real parameters of the
    Hermitian rank-1 kernel K = vec(J) vec(J)†, which relates input
    polarization to output coherency linearly:

        C_out[a, b] = sum_{c,d} K[2a+c, 2b+d] e_c e_d*

    followed by extraction of vec(J) as the principal eigenvector of K.
    The result is unique up to a global phase; it is returned in canonical
    form with the largest-magnitude entry real and non-negative.

    Parameters
    ----------
    probes : sequence of (stokes_in, stokes_out)
        Probe inputs must be fully polarized.  The standard set is the six
        states H, V, D, A, R, L (see `calibration_probes`).
    residual_tol : float
        Maximum allowed per-probe model mismatch, as a fraction of the
        probe's input intensity.  Exceeding it raises CalibrationError
        carrying the residual.

    Raises
    ------
    CalibrationError
        If the probe set does not determine the element, or the best-fit
        element reproduces the measured outputs worse than `residual_tol`.
    """
    pairs = []
    for k, (stokes_in, stokes_out) in enumerate(probes):
        field_in = stokes_to_jones(stokes_in)
        out = np.asarray(stokes_out, dtype=float)
        if out.shape != (4,) or not np.all(np.isfinite(out)):
            raise ValidationError(f"probe {k + 1}: output Stokes vector is malformed")
        pairs.append((field_in, out))
    if len(pairs) < 4:
        raise CalibrationError(
            f"need at least 4 probe pairs to determine a Jones matrix, got {len(pairs)}"
        )

    design = np.empty((4 * len(pairs), 16))
    target = np.empty(4 * len(pairs))
    kernels = _HERM4.reshape(16, 2, 2, 2, 2)  # [m, a, c, b, d]
    for k, (field, out) in enumerate(pairs):
        model = np.einsum("macbd,c,d->mab", kernels, field, field.conj())
        coh = _coherency_from_stokes(out)
        design[4 * k + 0] = model[:, 0, 0].real
        design[4 * k + 1] = model[:, 1, 1].real
        design[4 * k + 2] = model[:, 0, 1].real
        design[4 * k + 3] = model[:, 0, 1].imag
        target[4 * k : 4 * k + 4] = [
            coh[0, 0].real,
            coh[1, 1].real,
            coh[0, 1].real,
            coh[0, 1].imag,
        ]

    coeffs, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < 16:
        raise CalibrationError(
            f"probe set does not determine the element (design rank {rank} < 16); "
            "use probes spanning all polarization directions"
        )
    kernel = np.einsum("m,mij->ij", coeffs, _HERM4)
    vals, vecs = np.linalg.eigh(kernel)
    jones = np.sqrt(max(float(vals[-1]), 0.0)) * vecs[:, -1].reshape(2, 2)

    # Canonical global phase: largest-magnitude entry real non-negative.
    anchor = np.unravel_index(np.argmax(np.abs(jones)), jones.shape)
    if abs(jones[anchor]) > 0:
        jones = jones * np.exp(-1j * np.angle(jones[anchor]))

    residual = 0.0
    for field, out in pairs:
        predicted = jones_to_stokes(jones @ field)
        scale = max(float(jones_to_stokes(field)[0]), 1e-300)
        residual = max(residual, float(np.max(np.abs(predicted - out))) / scale)
    if residual > residual_tol:
        raise CalibrationError(
            f"probe data inconsistent with a single Jones matrix: residual "
            f"{residual:.3e} exceeds {residual_tol:g} of the probe intensity",
            residual=residual,
        )
    return jones
