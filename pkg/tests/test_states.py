"""Unit tests for state metrics, Schmidt analysis, and comparisons."""

import numpy as np
import pytest

from ququart.states import (
    BASIS_LABELS,
    DIM,
    canonical_phase,
    compare_states,
    concurrence,
    concurrence_pure,
    density_from_pure,
    entropy,
    fidelity,
    purity,
    schmidt_decompose,
    trace_distance,
)
from ququart.validation import ValidationError

from helpers import ginibre_rho, random_pure, random_unitary

MIXED = np.eye(4, dtype=complex) / 4.0
BELL = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)


def test_module_constants():
    assert DIM == 4
    assert BASIS_LABELS == ("HH", "HV", "VH", "VV")


def test_purity_extremes():
    assert purity(MIXED) == pytest.approx(0.25, abs=1e-14)
    psi = random_pure(np.random.default_rng(0))
    assert purity(density_from_pure(psi)) == pytest.approx(1.0, abs=1e-12)


def test_entropy_extremes():
    # base-4 logarithm: maximally mixed ququart sits exactly at 1
    assert entropy(MIXED) == pytest.approx(1.0, abs=1e-14)
    assert entropy(density_from_pure(BELL)) == pytest.approx(0.0, abs=1e-12)


def test_entropy_two_level_mixture():
    rho = np.diag([0.25, 0.0, 0.0, 0.75]).astype(complex)
    assert entropy(rho) == pytest.approx(0.4056, abs=1e-3)


def test_entropy_rejects_indefinite():
    rho = np.diag([0.6, 0.5, 0.0, -0.1]).astype(complex)
    with pytest.raises(ValidationError, match="positivity"):
        entropy(rho)
    # a permissive floor clamps instead of raising
    assert entropy(rho, eig_floor=0.2) > 0.0


def test_fidelity_basic_identities():
    rng = np.random.default_rng(1)
    rho = ginibre_rho(rng)
    sigma = ginibre_rho(rng)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    assert fidelity(rho, sigma) == pytest.approx(fidelity(sigma, rho), abs=1e-10)
    assert 0.0 < fidelity(rho, sigma) < 1.0


def test_fidelity_pure_states_is_overlap():
    rng = np.random.default_rng(2)
    psi, phi = random_pure(rng), random_pure(rng)
    overlap = abs(np.vdot(psi, phi)) ** 2
    value = fidelity(density_from_pure(psi), density_from_pure(phi))
    assert value == pytest.approx(overlap, abs=1e-10)


def test_fidelity_commuting_diagonals():
    p = np.array([0.4, 0.3, 0.2, 0.1])
    q = np.array([0.1, 0.2, 0.3, 0.4])
    expected = float(np.sum(np.sqrt(p * q)) ** 2)
    value = fidelity(np.diag(p).astype(complex), np.diag(q).astype(complex))
    assert value == pytest.approx(expected, abs=1e-12)


def test_trace_distance_orthogonal_pure_states():
    e0 = np.zeros(4, dtype=complex)
    e0[0] = 1.0
    e3 = np.zeros(4, dtype=complex)
    e3[3] = 1.0
    dist = trace_distance(density_from_pure(e0), density_from_pure(e3))
    assert dist == pytest.approx(1.0, abs=1e-12)
    assert trace_distance(MIXED, MIXED) == pytest.approx(0.0, abs=1e-14)


def test_concurrence_pure_extremes():
    assert concurrence_pure(BELL) == pytest.approx(1.0, abs=1e-12)
    product = np.kron([1.0, 0.0], [0.6, 0.8])
    assert concurrence_pure(product) == pytest.approx(0.0, abs=1e-12)


def test_concurrence_matches_pure_formula():
    rng = np.random.default_rng(3)
    for _ in range(25):
        psi = random_pure(rng)
        mixed_value = concurrence(density_from_pure(psi))
        assert mixed_value == pytest.approx(concurrence_pure(psi), abs=1e-8)


def test_concurrence_isotropic_mixture_threshold():
    # C(p |Bell><Bell| + (1-p) I/4) = max(0, (3p - 1) / 2)
    proj = density_from_pure(BELL)
    for p in (0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0):
        rho = p * proj + (1.0 - p) * MIXED
        expected = max(0.0, (3.0 * p - 1.0) / 2.0)
        assert concurrence(rho) == pytest.approx(expected, abs=1e-10)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(4)
    rho = ginibre_rho(rng)
    local = np.kron(random_unitary(rng), random_unitary(rng))
    rotated = local @ rho @ local.conj().T
    assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-10)


def test_canonical_phase_first_amplitude_real():
    psi = np.exp(1.3j) * random_pure(np.random.default_rng(5))
    fixed = canonical_phase(psi)
    first = fixed[np.argmax(np.abs(fixed) > 1e-12)]
    assert first.imag == pytest.approx(0.0, abs=1e-12)
    assert first.real >= 0.0


class TestSchmidt:
    def test_bell_weights_are_balanced(self):
        dec = schmidt_decompose(BELL)
        assert dec.weights[0] == pytest.approx(0.5, abs=1e-12)
        assert dec.weights[1] == pytest.approx(0.5, abs=1e-12)

    def test_product_state_is_rank_one(self):
        psi = np.kron([0.6, 0.8j], [1.0 / np.sqrt(2), 1.0j / np.sqrt(2)])
        dec = schmidt_decompose(psi)
        assert dec.weights == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_vectors_are_orthonormal(self):
        rng = np.random.default_rng(6)
        dec = schmidt_decompose(random_pure(rng))
        for pair in ((dec.signal_major, dec.signal_minor), (dec.idler_major, dec.idler_minor)):
            gram = np.array([[np.vdot(a, b) for b in pair] for a in pair])
            assert np.allclose(gram, np.eye(2), atol=1e-12)

    def test_reassemble_round_trip(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            psi = random_pure(rng)
            rebuilt = schmidt_decompose(psi).reassemble()
            # equality up to the removed global phase
            overlap = abs(np.vdot(rebuilt, psi))
            assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_weights_determine_concurrence(self):
        rng = np.random.default_rng(8)
        psi = random_pure(rng)
        dec = schmidt_decompose(psi)
        expected = 2.0 * np.sqrt(dec.weights[0] * dec.weights[1])
        assert concurrence_pure(psi) == pytest.approx(expected, abs=1e-10)


def test_compare_states_fields():
    rng = np.random.default_rng(9)
    rho, sigma = ginibre_rho(rng), ginibre_rho(rng)
    report = compare_states(rho, sigma)
    assert report.fidelity == pytest.approx(fidelity(rho, sigma), abs=1e-12)
    assert report.trace_distance == pytest.approx(trace_distance(rho, sigma), abs=1e-12)
    assert report.max_abs_difference == pytest.approx(
        float(np.max(np.abs(rho - sigma))), abs=1e-12
    )
    as_dict = report.as_dict()
    assert set(as_dict) == {
        "fidelity",
        "trace_distance",
        "max_abs_difference",
        "purity_a",
        "purity_b",
        "entropy_a",
        "entropy_b",
        "concurrence_a",
        "concurrence_b",
    }


def test_metrics_reject_non_hermitian_input():
    bad = np.zeros((4, 4), dtype=complex)
    bad[0, 1] = 1.0
    for func in (purity, entropy, concurrence):
        with pytest.raises(ValidationError, match="Hermitian"):
            func(bad)
