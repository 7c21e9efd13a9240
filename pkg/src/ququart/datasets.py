"""Bundled reference data: the standard analysis-settings table, four
complete 16-setting coincidence acquisitions, and the corresponding
previously published theoretical, reconstructed, and uncertainty
matrices, exposed as named constants for tests and the CLI.

Matrices are stored exactly as published (4 decimal places).  That
rounding means the reconstructed matrices satisfy the density-matrix
invariants only loosely: traces are off by up to 6e-3 and small negative
eigenvalues (order 1e-2) appear, so metric computations on them must use
relaxed eigenvalue floors.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .tomography import AnalysisSetting, CountRecord
from .validation import ValidationError

__all__ = [
    "DATASET_NAMES",
    "ReferenceDataset",
    "ReportedMetrics",
    "dataset_checksum",
    "export_dataset",
    "load_dataset",
    "table1_settings",
]

#: Acquisition time of every bundled count record, in seconds.
ACQUISITION_S = 180.0

_SETTINGS = (
    (45.0, 0.0, 45.0, 0.0),
    (45.0, 0.0, 0.0, 0.0),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 0.0, 45.0, 0.0),
    (22.5, 0.0, 45.0, 0.0),
    (22.5, 0.0, 0.0, 0.0),
    (22.5, 45.0, 0.0, 0.0),
    (22.5, 45.0, 45.0, 0.0),
    (22.5, 45.0, 22.5, 0.0),
    (22.5, 45.0, 22.5, 45.0),
    (22.5, 0.0, 22.5, 45.0),
    (45.0, 0.0, 22.5, 45.0),
    (0.0, 0.0, 22.5, 45.0),
    (0.0, 0.0, 22.5, 90.0),
    (45.0, 0.0, 22.5, 90.0),
    (22.5, 0.0, 22.5, 90.0),
)

#: Single-arm states each settings row projects onto, for reference.
SETTING_BASES = (
    ("H", "H"), ("H", "V"), ("V", "V"), ("V", "H"),
    ("R", "H"), ("R", "V"), ("D", "V"), ("D", "H"),
    ("D", "R"), ("D", "D"), ("R", "D"), ("H", "D"),
    ("V", "D"), ("V", "L"), ("H", "L"), ("R", "L"),
)


def table1_settings():
    """The 16 standard analysis settings (dial angles in degrees)."""
    return tuple(AnalysisSetting(*row) for row in _SETTINGS)


@dataclass(frozen=True)
class ReportedMetrics:
    """Figures of merit quoted alongside a published dataset."""

    fidelity: float
    purity_exp: float
    entropy_exp: float
    purity_theory: float
    entropy_theory: float


@dataclass(frozen=True, eq=False)
class ReferenceDataset:
    """One bundled acquisition with its published companion matrices.

    ``rho_theory`` is the intended state, ``rho_exp`` the published
    reconstruction from ``counts``, ``delta_rho`` the published
    element-wise uncertainty, and ``reported`` the quoted metrics.
    """

    name: str
    counts: CountRecord
    rho_theory: np.ndarray
    rho_exp: np.ndarray
    delta_rho: np.ndarray
    reported: ReportedMetrics


def _mat(rows):
    out = np.array(rows, dtype=complex)
    out.setflags(write=False)
    return out


_PURE_COUNTS = (
    6118, 1858, 917, 2943, 1565, 477, 2362, 7549,
    2395, 8254, 1664, 6653, 3078, 2739, 5817, 1398,
)

_PURE_THEORY = _mat([
    [0.5432, 0.3136 + 0.1182j, 0.3136, 0.1811 + 0.0683j],
    [0.3136 - 0.1182j, 0.2068, 0.1811 - 0.0683j, 0.1194],
    [0.3136, 0.1811 + 0.0683j, 0.1811, 0.1045 + 0.0394j],
    [0.1811 - 0.0683j, 0.1194, 0.1045 - 0.0394j, 0.0689],
])

_PURE_EXP = _mat([
    [0.5138, 0.2749 + 0.0523j, 0.3236 + 0.1308j, 0.1643 + 0.1026j],
    [0.2749 - 0.0523j, 0.1590, 0.1887 + 0.0418j, 0.1004 + 0.0379j],
    [0.3236 - 0.1308j, 0.1887 - 0.0418j, 0.2463, 0.1259 + 0.0224j],
    [0.1643 - 0.1026j, 0.1004 - 0.0379j, 0.1259 - 0.0224j, 0.0777],
])

_PURE_DELTA = _mat([
    [0.0066, 0.0042 - 0.0034j, 0.0069 + 0.0023j, 0.0083 + 0.0028j],
    [0.0042 + 0.0034j, 0.0036, 0.0056 - 0.0035j, 0.0039 + 0.0013j],
    [0.0069 - 0.0023j, 0.0056 + 0.0035j, 0.0046, 0.0029 - 0.0024j],
    [0.0083 - 0.0028j, 0.0039 - 0.0013j, 0.0029 + 0.0024j, 0.0026],
])

_MIX30_COUNTS = (
    1911, 46, 6287, 34, 795, 3562, 3005, 1048,
    1911, 2061, 2321, 981, 3141, 3154, 973, 2220,
)

_MIX30_THEORY = _mat([
    [0.25, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.75],
])

_MIX30_EXP = _mat([
    [0.2300, 0.0024 + 0.0009j, 0.0211 - 0.0007j, -0.0015 + 0.0020j],
    [0.0024 - 0.0009j, 0.0057, -0.0006 + 0.0017j, -0.0572 - 0.0019j],
    [0.0211 + 0.0007j, -0.0006 - 0.0017j, 0.0041, 0.0069 + 0.0018j],
    [-0.0015 - 0.0020j, -0.0572 + 0.0019j, 0.0069 - 0.0018j, 0.7571],
])

_MIX30_DELTA = _mat([
    [0.0053, 0.0027 - 0.0027j, 0.0030 + 0.0023j, 0.0071 + 0.0044j],
    [0.0027 + 0.0027j, 0.0008, 0.0044 - 0.0070j, 0.0044 + 0.0053j],
    [0.0030 - 0.0023j, 0.0044 + 0.0070j, 0.0007, 0.0048 - 0.0048j],
    [0.0071 - 0.0044j, 0.0044 - 0.0053j, 0.0048 + 0.0048j, 0.0096],
])

_MIX45_COUNTS = (
    3442, 30, 3983, 23, 1621, 2358, 1950, 1895,
    1906, 1973, 1959, 1840, 2040, 2026, 1809, 1909,
)

_MIX45_THEORY = _mat([
    [0.5, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.5],
])

_MIX45_EXP = _mat([
    [0.4584, 0.0142 + 0.0048j, 0.0253 + 0.0162j, 0.0158 - 0.0097j],
    [0.0142 - 0.0048j, 0.0041, 0.0012 + 0.0004j, -0.0406 + 0.0118j],
    [0.0253 - 0.0162j, 0.0012 - 0.0004j, 0.0031, 0.0024 + 0.0029j],
    [0.0158 + 0.0097j, -0.0406 - 0.0118j, 0.0024 - 0.0029j, 0.5313],
])

_MIX45_DELTA = _mat([
    [0.0078, 0.0040 - 0.0039j, 0.0043 + 0.0036j, 0.0075 + 0.0047j],
    [0.0040 + 0.0039j, 0.0007, 0.0047 - 0.0074j, 0.0038 + 0.0047j],
    [0.0043 - 0.0036j, 0.0047 + 0.0074j, 0.0006, 0.0042 - 0.0042j],
    [0.0075 - 0.0047j, 0.0038 - 0.0047j, 0.0042 + 0.0042j, 0.0084],
])

_PARTIAL_COUNTS = (
    1760, 1730, 1733, 1839, 1687, 1630, 1758, 1961,
    817, 3029, 1008, 1701, 1940, 1944, 1692, 1192,
)

_PARTIAL_THEORY = _mat([
    [0.2500, 0.0, -0.0086, 0.2414 + 0.0644j],
    [0.0, 0.2500, 0.2414 - 0.0644j, 0.0086],
    [-0.0086, 0.2414 + 0.0644j, 0.2500, 0.0],
    [0.2414 - 0.0644j, 0.0086, 0.0, 0.2500],
])

_PARTIAL_EXP = _mat([
    [0.2493, -0.0077 - 0.0007j, 0.0234 + 0.0126j, 0.1793 + 0.1665j],
    [-0.0077 + 0.0007j, 0.2433, 0.2032 + 0.1184j, 0.0142 - 0.0036j],
    [0.0234 - 0.0126j, 0.2032 - 0.1184j, 0.2590, 0.0333 - 0.0019j],
    [0.1793 - 0.1665j, 0.0142 + 0.0036j, 0.0333 + 0.0019j, 0.2542],
])

_PARTIAL_DELTA = _mat([
    [0.0059, 0.0042 - 0.0042j, 0.0046 + 0.0039j, 0.0098 + 0.0036j],
    [0.0042 + 0.0042j, 0.0059, 0.0065 - 0.0054j, 0.0043 + 0.0040j],
    [0.0046 - 0.0039j, 0.0065 + 0.0054j, 0.0061, 0.0042 - 0.0042j],
    [0.0098 - 0.0036j, 0.0043 - 0.0040j, 0.0042 + 0.0042j, 0.0059],
])

_RAW = {
    "pure_30deg_hwp": (
        _PURE_COUNTS,
        _PURE_THEORY,
        _PURE_EXP,
        _PURE_DELTA,
        ReportedMetrics(0.938, 0.962, 0.052, 1.0, 0.0),
    ),
    "mixed_pump30": (
        _MIX30_COUNTS,
        _MIX30_THEORY,
        _MIX30_EXP,
        _MIX30_DELTA,
        ReportedMetrics(0.987, 0.634, 0.394, 0.625, 0.406),
    ),
    "mixed_pump45": (
        _MIX45_COUNTS,
        _MIX45_THEORY,
        _MIX45_EXP,
        _MIX45_DELTA,
        ReportedMetrics(0.989, 0.499, 0.504, 0.5, 0.5),
    ),
    "partial_22p5": (
        _PARTIAL_COUNTS,
        _PARTIAL_THEORY,
        _PARTIAL_EXP,
        _PARTIAL_DELTA,
        ReportedMetrics(0.878, 0.483, 0.551, 0.5, 0.5),
    ),
}

DATASET_NAMES = tuple(_RAW)

# published rounding allowances: traces drift up to 6e-3 (worst case is
# the partial dataset at 1.0058) and eigenvalues dip to about -3e-2
_TRACE_TOL = 6e-3
_EIG_FLOOR = 5e-2


def _check_reference_matrix(matrix, label):
    if np.max(np.abs(matrix - matrix.conj().T)) > 1e-12:
        raise ValidationError(f"{label}: stored matrix is not Hermitian")
    if abs(matrix.trace().real - 1.0) > _TRACE_TOL:
        raise ValidationError(f"{label}: trace {matrix.trace().real!r} too far from 1")
    low = float(np.linalg.eigvalsh(matrix).min())
    if low < -_EIG_FLOOR:
        raise ValidationError(f"{label}: eigenvalue {low!r} too negative")


def load_dataset(name):
    """Return the bundled ReferenceDataset called `name`.

    Raises KeyError listing the valid names when `name` is unknown.
    """
    try:
        counts, theory, exp, delta, reported = _RAW[name]
    except KeyError:
        raise KeyError(
            f"unknown dataset {name!r}; available: {', '.join(DATASET_NAMES)}"
        ) from None
    _check_reference_matrix(theory, f"{name}.rho_theory")
    _check_reference_matrix(exp, f"{name}.rho_exp")
    record = CountRecord(
        counts=np.array(counts, dtype=np.int64),
        duration_s=ACQUISITION_S,
        origin="published",
    )
    return ReferenceDataset(
        name=name,
        counts=record,
        rho_theory=theory,
        rho_exp=exp,
        delta_rho=delta,
        reported=reported,
    )


def _canonical_payload(name):
    counts, theory, exp, delta, reported = _RAW[name]

    def pairs(mat):
        return [[[z.real, z.imag] for z in row] for row in np.asarray(mat)]

    return {
        "name": name,
        "duration_s": ACQUISITION_S,
        "counts": list(counts),
        "rho_theory": pairs(theory),
        "rho_exp": pairs(exp),
        "delta_rho": pairs(delta),
        "reported": {
            "fidelity": reported.fidelity,
            "purity_exp": reported.purity_exp,
            "entropy_exp": reported.entropy_exp,
            "purity_theory": reported.purity_theory,
            "entropy_theory": reported.entropy_theory,
        },
        "settings": [list(row) for row in _SETTINGS],
    }


def dataset_checksum(name):
    """SHA-256 of the dataset's canonical JSON form (build-stability check)."""
    if name not in _RAW:
        raise KeyError(
            f"unknown dataset {name!r}; available: {', '.join(DATASET_NAMES)}"
        )
    blob = json.dumps(_canonical_payload(name), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("ascii")).hexdigest()


def export_dataset(name, directory):
    """Write a dataset as the JSON files the CLI consumes.

    Creates ``counts.json``, ``settings.json``, ``rho_theory.json``,
    ``rho_exp.json``, ``delta_rho.json``, and ``reported.json`` inside
    `directory` (created if missing).  Returns {file stem: path}.
    """
    from pathlib import Path

    from . import serialize

    data = load_dataset(name)
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = {}

    def emit(stem, payload):
        path = target / f"{stem}.json"
        serialize.dump_json(payload, path)
        written[stem] = path

    emit("counts", serialize.counts_to_json(data.counts))
    emit("settings", serialize.settings_to_json(table1_settings()))
    emit("rho_theory", serialize.matrix_to_json(data.rho_theory))
    emit("rho_exp", serialize.matrix_to_json(data.rho_exp))
    emit("delta_rho", serialize.matrix_to_json(data.delta_rho))
    emit(
        "reported",
        {
            "fidelity": data.reported.fidelity,
            "purity_exp": data.reported.purity_exp,
            "entropy_exp": data.reported.entropy_exp,
            "purity_theory": data.reported.purity_theory,
            "entropy_theory": data.reported.entropy_theory,
        },
    )
    return written
