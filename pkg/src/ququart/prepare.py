"""State-preparation models for biphoton ququarts.

Covers five schemes:

* single down-conversion crystal -> one basis state;
* two stacked crystals pumped at an angle -> a |0>/|3> mixture with a
  tunable coherence knob;
* the same mixture followed by a shared waveplate -> partially mixed
  superposition states;
* an interferometric amplitude/phase plan -> arbitrary pure states;
* per-arm local unitaries on a two-term superposition -> states with
  prescribed Schmidt coefficients.

Angles at this layer are degrees (matching lab dials); phases are radians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .optics import WaveplateSpec, waveplate_jones, ququart_unitary
from .states import canonical_phase, density_from_pure
from .validation import (
    ValidationError,
    as_real_array,
    validate_density_matrix,
    validate_pure_state,
)

__all__ = [
    "DEFAULT_SOURCE",
    "DoubleCrystalConfig",
    "MachZehnderPlan",
    "NoEmissionError",
    "SpdcSource",
    "apply_waveplate",
    "double_crystal_state",
    "mz_plan_to_state",
    "partially_mixed_state",
    "prepare_from_config",
    "pure_state_mixture",
    "schmidt_scheme_state",
    "single_crystal_state",
    "state_to_mz_plan",
]

_CRYSTAL_TYPES = ("type_I", "type_II")
_AXES = ("horizontal", "vertical")

#: Basis index emitted by (crystal type, optic axis). Same-polarization
#: crystals emit the pair orthogonal to the pump; cross-polarization
#: crystals emit signal-then-idler with the signal matching the axis.
_EMITTED_INDEX = {
    ("type_I", "horizontal"): 3,
    ("type_I", "vertical"): 0,
    ("type_II", "horizontal"): 1,
    ("type_II", "vertical"): 2,
}


class NoEmissionError(RuntimeError):
    """The pump polarization cannot drive the crystal, so no pairs emerge."""


@dataclass(frozen=True)
class SpdcSource:
    """A down-conversion photon-pair source.

    Wavelengths are in nm and must satisfy energy conservation,
    1/pump = 1/signal + 1/idler, within 1e-6 nm^-1.  The signal photon
    occupies the first slot of the ququart basis, the idler the second.
    """

    pump_nm: float = 390.0
    signal_nm: float = 823.5
    idler_nm: float = 740.8
    crystal_type: str = "type_I"
    optic_axis: str = "horizontal"

    def __post_init__(self):
        for label, value in (
            ("pump_nm", self.pump_nm),
            ("signal_nm", self.signal_nm),
            ("idler_nm", self.idler_nm),
        ):
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{label} must be a positive wavelength, got {value!r}")
        defect = abs(1.0 / self.pump_nm - 1.0 / self.signal_nm - 1.0 / self.idler_nm)
        if defect > 1e-6:
            raise ValidationError(
                "wavelengths violate energy conservation: "
                f"|1/pump - 1/signal - 1/idler| = {defect:.3e} nm^-1 exceeds 1e-6"
            )
        if self.crystal_type not in _CRYSTAL_TYPES:
            raise ValidationError(
                f"crystal_type must be one of {_CRYSTAL_TYPES}, got {self.crystal_type!r}"
            )
        if self.optic_axis not in _AXES:
            raise ValidationError(
                f"optic_axis must be one of {_AXES}, got {self.optic_axis!r}"
            )


DEFAULT_SOURCE = SpdcSource()


def single_crystal_state(crystal_type, optic_axis, pump_polarization):
    """Basis state emitted by one crystal, or NoEmissionError.

    A crystal is driven only by pump light polarized along its optic
    axis; the orthogonal pump component passes through without
    down-converting.
    """
    if crystal_type not in _CRYSTAL_TYPES:
        raise ValidationError(
            f"crystal_type must be one of {_CRYSTAL_TYPES}, got {crystal_type!r}"
        )
    if optic_axis not in _AXES:
        raise ValidationError(f"optic_axis must be one of {_AXES}, got {optic_axis!r}")
    if pump_polarization not in _AXES:
        raise ValidationError(
            f"pump_polarization must be one of {_AXES}, got {pump_polarization!r}"
        )
    if pump_polarization != optic_axis:
        raise NoEmissionError(
            f"a {crystal_type} crystal with {optic_axis} optic axis is not driven "
            f"by a {pump_polarization} pump: no photon pairs are emitted"
        )
    state = np.zeros(4, dtype=complex)
    state[_EMITTED_INDEX[crystal_type, optic_axis]] = 1.0
    return state


@dataclass(frozen=True)
class DoubleCrystalConfig:
    """Two orthogonally oriented crystals pumped by one diagonal-ish beam.

    ``pump_angle_deg`` is the pump polarization angle from horizontal; it
    is normalized into [0, 90] (angles in (90, 180) fold to 180 - angle
    with a pi shift absorbed into ``relative_phase_rad``).
    ``relative_phase_rad`` is the phase of the second crystal's amplitude
    relative to the first.  ``coherence`` in [0, 1] scales the cross term:
    0 models fully distinguishable emission times (a bare mixture), 1
    models perfectly compensated, coherent emission (a pure state).
    """

    pump_angle_deg: float
    relative_phase_rad: float = 0.0
    coherence: float = 0.0

    def __post_init__(self):
        for label, value in (
            ("pump_angle_deg", self.pump_angle_deg),
            ("relative_phase_rad", self.relative_phase_rad),
            ("coherence", self.coherence),
        ):
            if not np.isfinite(value):
                raise ValidationError(f"{label} must be finite, got {value!r}")
        if not 0.0 <= self.coherence <= 1.0:
            raise ValidationError(f"coherence must lie in [0, 1], got {self.coherence!r}")
        angle = float(self.pump_angle_deg) % 180.0
        phase = float(self.relative_phase_rad)
        if angle > 90.0:
            angle = 180.0 - angle
            phase += np.pi
        object.__setattr__(self, "pump_angle_deg", angle)
        object.__setattr__(self, "relative_phase_rad", phase % (2.0 * np.pi))


def double_crystal_state(config):
    """Density matrix emitted by the two-crystal source.

    With a = cos(pump angle) driving the first crystal (emitting index 3)
    and b = sin(pump angle) e^{i phase} driving the second (emitting
    index 0):

        rho = a^2 |3><3| + |b|^2 |0><0| + coherence * (a b* |3><0| + h.c.)

    Purity is 1 - 2(1 - coherence^2) a^2 |b|^2.
    """
    if not isinstance(config, DoubleCrystalConfig):
        raise ValidationError("config must be a DoubleCrystalConfig")
    angle = np.radians(config.pump_angle_deg)
    amp_first = np.cos(angle)
    amp_second = np.sin(angle) * np.exp(1j * config.relative_phase_rad)
    rho = np.zeros((4, 4), dtype=complex)
    rho[3, 3] = amp_first**2
    rho[0, 0] = abs(amp_second) ** 2
    cross = config.coherence * amp_first * np.conj(amp_second)
    rho[3, 0] = cross
    rho[0, 3] = np.conj(cross)
    return rho


def apply_waveplate(state, plate, source=DEFAULT_SOURCE):
    """Send both photons of a ququart state through one physical plate.

    Each photon sees the plate at its own wavelength, so the 4x4 action
    is generally not a tensor square.  Being unitary, it preserves the
    eigenvalue spectrum (hence entropy and purity) and the degree of
    two-qubit entanglement.
    """
    rho = validate_density_matrix(state, name="state")
    unitary = ququart_unitary(plate, source.signal_nm, source.idler_nm)
    return unitary @ rho @ unitary.conj().T


def partially_mixed_state(config, plate=None, source=DEFAULT_SOURCE):
    """Two-crystal mixture, optionally rotated by a shared waveplate.

    With coherence 0 and a pump angle strictly between 0 and 90 degrees
    the result has exactly two nonzero eigenvalues, cos^2 and sin^2 of
    the pump angle, regardless of the plate.
    """
    rho = double_crystal_state(config)
    if plate is None:
        return rho
    return apply_waveplate(rho, plate, source)


def pure_state_mixture(states, weights):
    """Convex mixture of pure ququart states.

    Generic constructor for multi-path schemes that combine several pure
    states incoherently.  Weights must be non-negative and sum to 1
    within 1e-9.
    """
    states = list(states)
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or len(states) != weights.size:
        raise ValidationError(
            f"got {len(states)} states but {weights.size} weights"
        )
    if weights.size == 0:
        raise ValidationError("mixture needs at least one component")
    if not np.all(np.isfinite(weights)):
        raise ValidationError("mixture weights must be finite")
    if np.any(weights < -1e-12):
        raise ValidationError(f"mixture weights must be non-negative, got {weights!r}")
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"mixture weights must sum to 1, got {total!r}")
    rho = np.zeros((4, 4), dtype=complex)
    for k, (psi, weight) in enumerate(zip(states, weights)):
        vec = validate_pure_state(psi, name=f"mixture component {k + 1}")
        rho += max(weight, 0.0) * np.outer(vec, vec.conj())
    return rho


@dataclass(frozen=True)
class MachZehnderPlan:
    """Amplitude/phase recipe for an arbitrary pure ququart.

    ``magnitudes`` are the four non-negative amplitude moduli (their
    squares summing to 1 within 1e-9).  ``phi_01`` is the phase between
    the index-0/1 pair and is shared by index 2, whose extra offset is
    ``phi_12``; ``phi_03`` is the phase of index 3.  Index 0 is the phase
    reference.
    """

    magnitudes: tuple
    phi_03: float = 0.0
    phi_12: float = 0.0
    phi_01: float = 0.0

    def __post_init__(self):
        mags = np.asarray(self.magnitudes, dtype=float)
        if mags.shape != (4,):
            raise ValidationError(f"magnitudes must be 4 numbers, got shape {mags.shape}")
        if not np.all(np.isfinite(mags)):
            raise ValidationError("magnitudes must be finite")
        if np.any(mags < 0):
            raise ValidationError(f"magnitudes must be non-negative, got {mags!r}")
        norm_sq = float(np.dot(mags, mags))
        if abs(norm_sq - 1.0) > 1e-9:
            raise ValidationError(
                f"squared magnitudes must sum to 1 within 1e-9, got {norm_sq!r}"
            )
        for label, value in (
            ("phi_03", self.phi_03),
            ("phi_12", self.phi_12),
            ("phi_01", self.phi_01),
        ):
            if not np.isfinite(value):
                raise ValidationError(f"{label} must be finite, got {value!r}")
        object.__setattr__(self, "magnitudes", tuple(float(m) for m in mags))


def mz_plan_to_state(plan):
    """Pure state encoded by a plan: c0 real, c1 = m1 e^{i phi_01},
    c2 = m2 e^{i(phi_12 + phi_01)}, c3 = m3 e^{i phi_03}."""
    if not isinstance(plan, MachZehnderPlan):
        raise ValidationError("plan must be a MachZehnderPlan")
    m = plan.magnitudes
    return np.array(
        [
            m[0],
            m[1] * np.exp(1j * plan.phi_01),
            m[2] * np.exp(1j * (plan.phi_12 + plan.phi_01)),
            m[3] * np.exp(1j * plan.phi_03),
        ]
    )


def state_to_mz_plan(psi):
    """Read a plan off a pure state (inverse of `mz_plan_to_state`).

    The state is first brought to canonical global phase (first nonzero
    amplitude real non-negative).  Phases attached to zero-magnitude
    amplitudes are set to 0 by convention, so the round trip through
    `mz_plan_to_state` reproduces the state exactly and reproduces plans
    up to 2 pi phase wraps.
    """
    vec = canonical_phase(validate_pure_state(psi, name="pure state"))
    mags = np.abs(vec)
    cut = 1e-12  # below this a magnitude carries no meaningful phase
    phi_01 = float(np.angle(vec[1])) if mags[1] > cut else 0.0
    phi_12 = float(np.angle(vec[2])) - phi_01 if mags[2] > cut else 0.0
    phi_03 = float(np.angle(vec[3])) if mags[3] > cut else 0.0
    return MachZehnderPlan(
        magnitudes=tuple(float(m) for m in mags),
        phi_03=phi_03,
        phi_12=phi_12,
        phi_01=phi_01,
    )


def schmidt_scheme_state(
    major_weight, pump_phase=0.0, signal_plates=(), idler_plates=(), source=DEFAULT_SOURCE
):
    """Pure state with prescribed Schmidt weights (major_weight, 1 - major_weight).

    Starts from sqrt(w)|HH> + sqrt(1-w) e^{i phase}|VV> and applies the
    per-arm plate sequences as local unitaries (list order = traversal
    order), each arm at its own wavelength.  Local unitaries cannot
    change the Schmidt weights, so the two-qubit concurrence is always
    2 sqrt(w (1 - w)).
    """
    if not (np.isfinite(major_weight) and 0.0 <= major_weight <= 1.0):
        raise ValidationError(f"major_weight must lie in [0, 1], got {major_weight!r}")
    if not np.isfinite(pump_phase):
        raise ValidationError(f"pump_phase must be finite, got {pump_phase!r}")
    base = np.zeros(4, dtype=complex)
    base[0] = np.sqrt(major_weight)
    base[3] = np.sqrt(1.0 - major_weight) * np.exp(1j * pump_phase)
    signal_u = np.eye(2, dtype=complex)
    for plate in signal_plates:
        signal_u = waveplate_jones(plate, source.signal_nm) @ signal_u
    idler_u = np.eye(2, dtype=complex)
    for plate in idler_plates:
        idler_u = waveplate_jones(plate, source.idler_nm) @ idler_u
    return np.kron(signal_u, idler_u) @ base


# --- JSON configuration front end ------------------------------------------

_SCHEMES = (
    "single_crystal",
    "double_crystal",
    "partially_mixed",
    "mach_zehnder",
    "schmidt",
)


def _as_number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where} must be a number, got {value!r}")
    if not np.isfinite(value):
        raise ValidationError(f"{where} must be finite, got {value!r}")
    return float(value)


def _get_number(config, key, where, default=None):
    if key not in config:
        if default is None:
            raise ValidationError(f"{where}: missing required field '{key}'")
        return default
    return _as_number(config[key], f"{where}.{key}")


def _waveplate_from_json(obj, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be an object describing a waveplate")
    unknown = set(obj) - {"kind", "design_wavelength_nm", "fast_axis_deg", "angle_reference"}
    if unknown:
        raise ValidationError(f"{where}: unknown fields {sorted(unknown)}")
    if "kind" not in obj:
        raise ValidationError(f"{where}: missing required field 'kind'")
    reference = obj.get("angle_reference", "from_horizontal")
    try:
        return WaveplateSpec(
            kind=obj["kind"],
            design_wavelength_nm=_get_number(obj, "design_wavelength_nm", where),
            fast_axis_deg=_get_number(obj, "fast_axis_deg", where),
            angle_reference=reference,
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _plates_from_json(config, key, where):
    raw = config.get(key, [])
    if not isinstance(raw, list):
        raise ValidationError(f"{where}.{key} must be a list of waveplates")
    return [
        _waveplate_from_json(obj, f"{where}.{key}[{i}]") for i, obj in enumerate(raw)
    ]


def _source_from_json(obj, where):
    if obj is None:
        return DEFAULT_SOURCE
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be an object describing the pair source")
    unknown = set(obj) - {"pump_nm", "signal_nm", "idler_nm", "crystal_type", "optic_axis"}
    if unknown:
        raise ValidationError(f"{where}: unknown fields {sorted(unknown)}")
    try:
        return SpdcSource(
            pump_nm=_get_number(obj, "pump_nm", where, DEFAULT_SOURCE.pump_nm),
            signal_nm=_get_number(obj, "signal_nm", where, DEFAULT_SOURCE.signal_nm),
            idler_nm=_get_number(obj, "idler_nm", where, DEFAULT_SOURCE.idler_nm),
            crystal_type=obj.get("crystal_type", DEFAULT_SOURCE.crystal_type),
            optic_axis=obj.get("optic_axis", DEFAULT_SOURCE.optic_axis),
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def prepare_from_config(config):
    """Build a density matrix from a JSON-style preparation config.

    The config is a dict with a ``scheme`` tag plus scheme-specific
    fields; angles are degrees, phases radians, wavelengths nm.  Every
    scheme accepts an optional ``source`` object and an optional
    ``waveplates`` list of shared plates applied (in order) to the
    prepared state.  See the package README for the full schema.
    """
    if not isinstance(config, dict):
        raise ValidationError("preparation config must be a JSON object")
    scheme = config.get("scheme")
    if scheme not in _SCHEMES:
        raise ValidationError(
            f"config.scheme must be one of {_SCHEMES}, got {scheme!r}"
        )
    where = f"config({scheme})"
    source = _source_from_json(config.get("source"), f"{where}.source")
    shared_plates = _plates_from_json(config, "waveplates", where)

    if scheme == "single_crystal":
        crystal_type = config.get("crystal_type", source.crystal_type)
        optic_axis = config.get("optic_axis", source.optic_axis)
        pump_polarization = config.get("pump_polarization", optic_axis)
        psi = single_crystal_state(crystal_type, optic_axis, pump_polarization)
        rho = density_from_pure(psi)
    elif scheme in ("double_crystal", "partially_mixed"):
        cfg = DoubleCrystalConfig(
            pump_angle_deg=_get_number(config, "pump_angle_deg", where),
            relative_phase_rad=_get_number(config, "relative_phase_rad", where, 0.0),
            coherence=_get_number(config, "coherence", where, 0.0),
        )
        rho = double_crystal_state(cfg)
    elif scheme == "mach_zehnder":
        if "magnitudes" not in config:
            raise ValidationError(f"{where}: missing required field 'magnitudes'")
        mags = as_real_array(config["magnitudes"], (4,), f"{where}.magnitudes")
        if np.any(mags < 0):
            raise ValidationError(f"{where}.magnitudes must be non-negative")
        norm = float(np.linalg.norm(mags))
        if norm <= 0:
            raise ValidationError(f"{where}.magnitudes must not be all zero")
        plan = MachZehnderPlan(
            magnitudes=tuple(mags / norm),  # normalized on load
            phi_03=_get_number(config, "phi_03", where, 0.0),
            phi_12=_get_number(config, "phi_12", where, 0.0),
            phi_01=_get_number(config, "phi_01", where, 0.0),
        )
        rho = density_from_pure(mz_plan_to_state(plan))
    else:  # schmidt
        psi = schmidt_scheme_state(
            major_weight=_get_number(config, "major_weight", where),
            pump_phase=_get_number(config, "pump_phase_rad", where, 0.0),
            signal_plates=_plates_from_json(config, "signal_plates", where),
            idler_plates=_plates_from_json(config, "idler_plates", where),
            source=source,
        )
        rho = density_from_pure(psi)

    for plate in shared_plates:
        rho = apply_waveplate(rho, plate, source)
    return rho
