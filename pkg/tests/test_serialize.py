"""Unit tests for the JSON file formats."""

import numpy as np
import pytest

from ququart.serialize import (
    counts_from_json,
    counts_to_json,
    dbs_from_json,
    dbs_to_json,
    dump_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    probe_pairs_from_json,
    settings_from_json,
    settings_to_json,
    vector_from_json,
    vector_to_json,
)
from ququart.tomography import CountRecord
from ququart.datasets import table1_settings
from ququart.validation import ValidationError


def test_dump_json_is_deterministic(tmp_path):
    payload = {"b": 1, "a": [1.5, 2.5]}
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    dump_json(payload, first)
    dump_json(payload, second)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().endswith("\n")


def test_load_json_error_paths(tmp_path):
    with pytest.raises(ValidationError, match="cannot read"):
        load_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError, match="not valid JSON"):
        load_json(bad)


def test_matrix_round_trip():
    rng = np.random.default_rng(0)
    mat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    back = matrix_from_json(matrix_to_json(mat), (4, 4), "mat")
    assert np.allclose(back, mat, atol=0.0)  # exact: repr round trip


def test_matrix_shape_errors():
    with pytest.raises(ValidationError, match="4x4"):
        matrix_from_json([[[1.0, 0.0]]], (4, 4), "mat")
    with pytest.raises(ValidationError, match="row 1"):
        matrix_from_json([[[1.0, 0.0]]] + [[]] * 3, (4, 4), "mat")


def test_matrix_entry_errors():
    obj = matrix_to_json(np.eye(4))
    obj[2][3] = [1.0]  # not a pair
    with pytest.raises(ValidationError, match=r"mat\[3\]\[4\]"):
        matrix_from_json(obj, (4, 4), "mat")


def test_vector_round_trip():
    vec = np.array([1.0, -2.0j, 0.5 + 0.5j, 0.0])
    back = vector_from_json(vector_to_json(vec), 4, "vec")
    assert np.array_equal(back, vec)
    with pytest.raises(ValidationError, match="list of 4"):
        vector_from_json([[1.0, 0.0]], 4, "vec")


class TestCountsFormat:
    def test_round_trip_with_seed(self):
        record = CountRecord(
            counts=list(range(16)), duration_s=10.0, origin="simulated(seed=3)", seed=3
        )
        payload = counts_to_json(record)
        assert payload["seed"] == 3
        back = counts_from_json(payload)
        assert np.array_equal(back.counts, record.counts)
        assert back.duration_s == 10.0
        assert back.origin == "simulated(seed=3)"
        assert back.seed == 3

    def test_defaults(self):
        back = counts_from_json({"counts": [1] * 16})
        assert back.duration_s == 1.0
        assert back.origin == "external"
        assert back.seed is None

    def test_missing_counts_field(self):
        with pytest.raises(ValidationError, match="'counts'"):
            counts_from_json({"duration_s": 5.0})

    def test_bad_duration_type(self):
        with pytest.raises(ValidationError, match="duration_s"):
            counts_from_json({"counts": [1] * 16, "duration_s": "long"})

    def test_invalid_counts_are_wrapped(self):
        with pytest.raises(ValidationError, match="counts file"):
            counts_from_json({"counts": [1] * 3})


class TestSettingsFormat:
    def test_round_trip(self):
        table = table1_settings()
        back = settings_from_json(settings_to_json(table))
        assert back == table

    def test_wrong_length(self):
        with pytest.raises(ValidationError, match="16"):
            settings_from_json(settings_to_json(table1_settings())[:4])

    def test_missing_field(self):
        payload = settings_to_json(table1_settings())
        del payload[5]["qwp2"]
        with pytest.raises(ValidationError, match="entry 6"):
            settings_from_json(payload)

    def test_unknown_field_rejected(self):
        payload = settings_to_json(table1_settings())
        payload[0]["tilt"] = 3.0
        with pytest.raises(ValidationError, match="unknown fields"):
            settings_from_json(payload)


def test_dbs_round_trip():
    rng = np.random.default_rng(1)
    transmit = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    reflect = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    back_t, back_r = dbs_from_json(dbs_to_json(transmit, reflect))
    assert np.array_equal(back_t, transmit)
    assert np.array_equal(back_r, reflect)
    with pytest.raises(ValidationError, match="'reflect'"):
        dbs_from_json({"transmit": matrix_to_json(transmit)})


class TestProbeFormat:
    def test_parses_both_ports(self):
        payload = {
            "probes": [
                {
                    "input": [1.0, 1.0, 0.0, 0.0],
                    "transmit": [1.0, 0.0, 1.0, 0.0],
                    "reflect": [0.5, 0.0, 0.0, 0.5],
                },
                {
                    "input": [1.0, -1.0, 0.0, 0.0],
                    "transmit": [1.0, 0.0, -1.0, 0.0],
                    "reflect": [0.5, 0.0, 0.0, -0.5],
                },
            ]
        }
        transmit_pairs, reflect_pairs = probe_pairs_from_json(payload)
        assert len(transmit_pairs) == 2
        assert len(reflect_pairs) == 2
        np.testing.assert_allclose(transmit_pairs[0][1], [1.0, 0.0, 1.0, 0.0])
        np.testing.assert_allclose(reflect_pairs[1][0], [1.0, -1.0, 0.0, 0.0])

    def test_missing_port_field(self):
        payload = {"probes": [{"input": [1, 1, 0, 0], "transmit": [1, 1, 0, 0]}]}
        with pytest.raises(ValidationError, match="'reflect'"):
            probe_pairs_from_json(payload)

    def test_empty_probe_list(self):
        with pytest.raises(ValidationError, match="non-empty"):
            probe_pairs_from_json({"probes": []})

    def test_malformed_stokes(self):
        payload = {
            "probes": [
                {"input": [1, 1, 0], "transmit": [1, 1, 0, 0], "reflect": [1, 1, 0, 0]}
            ]
        }
        with pytest.raises(ValidationError, match="probe 1.input"):
            probe_pairs_from_json(payload)
