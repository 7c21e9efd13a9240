"""JSON file formats shared by the CLI and the dataset exporter.

Conventions: complex numbers are [re, im] pairs; complex matrices are
row-major nested lists of pairs; pure states are flat lists of pairs;
Stokes vectors are flat lists of four reals.  Floats keep full repr
precision (17 significant digits).  `dump_json` writes deterministically
(sorted keys, two-space indent, trailing newline) so reruns produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tomography import AnalysisSetting, CountRecord
from .validation import ValidationError

__all__ = [
    "counts_from_json",
    "counts_to_json",
    "dbs_from_json",
    "dbs_to_json",
    "dump_json",
    "load_json",
    "matrix_from_json",
    "matrix_to_json",
    "probe_pairs_from_json",
    "settings_from_json",
    "settings_to_json",
    "vector_from_json",
    "vector_to_json",
]


def dump_json(payload, path):
    """Write `payload` to `path` as deterministic, human-diffable JSON."""
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_json(path):
    """Parse a JSON file, converting I/O and syntax errors to ValidationError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _complex_from_pair(obj, where):
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in obj)
    ):
        raise ValidationError(f"{where} must be a [re, im] pair, got {obj!r}")
    return complex(obj[0], obj[1])


def matrix_to_json(matrix):
    """Complex matrix -> row-major nested lists of [re, im] pairs."""
    mat = np.asarray(matrix, dtype=complex)
    return [[[z.real, z.imag] for z in row] for row in mat]


def matrix_from_json(obj, shape, name):
    """Inverse of `matrix_to_json`, checking the expected shape."""
    rows, cols = shape
    if not isinstance(obj, list) or len(obj) != rows:
        raise ValidationError(f"{name} must be a {rows}x{cols} matrix of [re, im] pairs")
    out = np.empty(shape, dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise ValidationError(f"{name} row {i + 1} must have {cols} [re, im] pairs")
        for j, pair in enumerate(row):
            out[i, j] = _complex_from_pair(pair, f"{name}[{i + 1}][{j + 1}]")
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return out


def vector_to_json(vector):
    """Complex vector -> flat list of [re, im] pairs."""
    return [[z.real, z.imag] for z in np.asarray(vector, dtype=complex)]


def vector_from_json(obj, length, name):
    """Inverse of `vector_to_json`, checking the expected length."""
    if not isinstance(obj, list) or len(obj) != length:
        raise ValidationError(f"{name} must be a list of {length} [re, im] pairs")
    out = np.array(
        [_complex_from_pair(pair, f"{name}[{k + 1}]") for k, pair in enumerate(obj)]
    )
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return out


def counts_to_json(record):
    """CountRecord -> {'duration_s', 'counts', 'origin'[, 'seed']}."""
    payload = {
        "duration_s": record.duration_s,
        "counts": [int(n) for n in record.counts],
        "origin": record.origin,
    }
    if record.seed is not None:
        payload["seed"] = int(record.seed)
    return payload


def counts_from_json(obj, name="counts file"):
    """Parse a counts document into a CountRecord."""
    if not isinstance(obj, dict):
        raise ValidationError(f"{name} must be a JSON object")
    if "counts" not in obj:
        raise ValidationError(f"{name}: missing required field 'counts'")
    duration = obj.get("duration_s", 1.0)
    if isinstance(duration, bool) or not isinstance(duration, (int, float)):
        raise ValidationError(f"{name}: duration_s must be a number")
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ValidationError(f"{name}: seed must be an integer")
    origin = obj.get("origin", "external")
    if not isinstance(origin, str):
        raise ValidationError(f"{name}: origin must be a string")
    try:
        return CountRecord(
            counts=obj["counts"], duration_s=duration, origin=origin, seed=seed
        )
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}") from exc


_SETTING_KEYS = ("hwp1", "qwp1", "hwp2", "qwp2")


def settings_to_json(settings):
    """Settings -> list of {'hwp1', 'qwp1', 'hwp2', 'qwp2'} in degrees."""
    return [
        {key: getattr(setting, key) for key in _SETTING_KEYS} for setting in settings
    ]


def settings_from_json(obj, name="settings file"):
    """Parse a settings document into 16 AnalysisSetting values."""
    if not isinstance(obj, list) or len(obj) != 16:
        raise ValidationError(f"{name} must be a list of 16 settings objects")
    out = []
    for k, entry in enumerate(obj):
        where = f"{name} entry {k + 1}"
        if not isinstance(entry, dict):
            raise ValidationError(f"{where} must be an object")
        missing = [key for key in _SETTING_KEYS if key not in entry]
        if missing:
            raise ValidationError(f"{where}: missing fields {missing}")
        unknown = set(entry) - set(_SETTING_KEYS)
        if unknown:
            raise ValidationError(f"{where}: unknown fields {sorted(unknown)}")
        try:
            out.append(AnalysisSetting(**{key: entry[key] for key in _SETTING_KEYS}))
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    return tuple(out)


def dbs_to_json(transmit, reflect):
    """Splitter calibration -> {'transmit': 2x2 pairs, 'reflect': 2x2 pairs}."""
    return {
        "transmit": matrix_to_json(transmit),
        "reflect": matrix_to_json(reflect),
    }


def dbs_from_json(obj, name="calibration file"):
    """Parse a splitter calibration document into (transmit, reflect)."""
    if not isinstance(obj, dict):
        raise ValidationError(f"{name} must be a JSON object")
    for key in ("transmit", "reflect"):
        if key not in obj:
            raise ValidationError(f"{name}: missing required field '{key}'")
    transmit = matrix_from_json(obj["transmit"], (2, 2), f"{name}.transmit")
    reflect = matrix_from_json(obj["reflect"], (2, 2), f"{name}.reflect")
    return transmit, reflect


def _stokes_from_json(obj, where):
    if (
        not isinstance(obj, list)
        or len(obj) != 4
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in obj)
    ):
        raise ValidationError(f"{where} must be a list of 4 Stokes parameters")
    vec = np.array(obj, dtype=float)
    if not np.all(np.isfinite(vec)):
        raise ValidationError(f"{where} contains non-finite entries")
    return vec


def probe_pairs_from_json(obj, name="probes file"):
    """Parse polarimetry probe data for both splitter ports.

    Expected form: {"probes": [{"input": [4], "transmit": [4],
    "reflect": [4]}, ...]} with Stokes vectors throughout.  Returns
    (transmit_pairs, reflect_pairs), each a list of (input, output)
    Stokes tuples.
    """
    if not isinstance(obj, dict) or "probes" not in obj:
        raise ValidationError(f"{name} must be an object with a 'probes' list")
    probes = obj["probes"]
    if not isinstance(probes, list) or not probes:
        raise ValidationError(f"{name}: 'probes' must be a non-empty list")
    transmit_pairs = []
    reflect_pairs = []
    for k, entry in enumerate(probes):
        where = f"{name} probe {k + 1}"
        if not isinstance(entry, dict):
            raise ValidationError(f"{where} must be an object")
        for key in ("input", "transmit", "reflect"):
            if key not in entry:
                raise ValidationError(f"{where}: missing required field '{key}'")
        stokes_in = _stokes_from_json(entry["input"], f"{where}.input")
        transmit_pairs.append((stokes_in, _stokes_from_json(entry["transmit"], f"{where}.transmit")))
        reflect_pairs.append((stokes_in, _stokes_from_json(entry["reflect"], f"{where}.reflect")))
    return transmit_pairs, reflect_pairs
