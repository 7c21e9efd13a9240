"""Unit tests for the state-preparation schemes."""

import numpy as np
import pytest

from ququart.optics import WaveplateSpec
from ququart.prepare import (
    DEFAULT_SOURCE,
    DoubleCrystalConfig,
    MachZehnderPlan,
    NoEmissionError,
    SpdcSource,
    apply_waveplate,
    double_crystal_state,
    mz_plan_to_state,
    partially_mixed_state,
    prepare_from_config,
    pure_state_mixture,
    schmidt_scheme_state,
    single_crystal_state,
    state_to_mz_plan,
)
from ququart.states import concurrence_pure, entropy, purity, schmidt_decompose
from ququart.validation import ValidationError

from helpers import random_pure

HWP30 = WaveplateSpec("half", 823.5, 30.0, angle_reference="from_vertical")


class TestSource:
    def test_defaults_conserve_energy(self):
        src = DEFAULT_SOURCE
        defect = abs(1 / src.pump_nm - 1 / src.signal_nm - 1 / src.idler_nm)
        assert defect <= 1e-6

    def test_rejects_energy_violation(self):
        with pytest.raises(ValidationError, match="energy conservation"):
            SpdcSource(pump_nm=400.0)

    def test_rejects_nonpositive_wavelengths(self):
        with pytest.raises(ValidationError, match="positive"):
            SpdcSource(pump_nm=-390.0, signal_nm=823.5, idler_nm=740.8)

    def test_rejects_unknown_crystal(self):
        with pytest.raises(ValidationError, match="crystal_type"):
            SpdcSource(crystal_type="type_III")


class TestSingleCrystal:
    @pytest.mark.parametrize(
        "crystal,axis,index",
        [
            ("type_I", "horizontal", 3),
            ("type_I", "vertical", 0),
            ("type_II", "horizontal", 1),
            ("type_II", "vertical", 2),
        ],
    )
    def test_emitted_basis_state(self, crystal, axis, index):
        psi = single_crystal_state(crystal, axis, axis)
        expected = np.zeros(4)
        expected[index] = 1.0
        assert np.allclose(psi, expected)

    def test_orthogonal_pump_does_not_emit(self):
        with pytest.raises(NoEmissionError, match="no photon pairs"):
            single_crystal_state("type_I", "horizontal", "vertical")

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValidationError):
            single_crystal_state("type_I", "diagonal", "horizontal")


class TestDoubleCrystal:
    def test_incoherent_mixture_at_30(self):
        rho = double_crystal_state(DoubleCrystalConfig(30.0))
        assert np.allclose(rho, np.diag([0.25, 0.0, 0.0, 0.75]), atol=1e-15)

    def test_incoherent_mixture_at_45(self):
        rho = double_crystal_state(DoubleCrystalConfig(45.0))
        assert np.allclose(rho, np.diag([0.5, 0.0, 0.0, 0.5]), atol=1e-15)

    def test_full_coherence_gives_pure_superposition(self):
        rho = double_crystal_state(DoubleCrystalConfig(45.0, coherence=1.0))
        assert purity(rho) == pytest.approx(1.0, abs=1e-12)
        assert rho[3, 0] == pytest.approx(0.5, abs=1e-12)

    def test_purity_follows_coherence(self):
        for kappa in (0.0, 0.3, 0.7, 1.0):
            cfg = DoubleCrystalConfig(30.0, coherence=kappa)
            rho = double_crystal_state(cfg)
            angle = np.radians(30.0)
            a2b2 = (np.cos(angle) * np.sin(angle)) ** 2
            expected = 1.0 - 2.0 * (1.0 - kappa**2) * a2b2
            assert purity(rho) == pytest.approx(expected, abs=1e-12)

    def test_relative_phase_lands_on_cross_term(self):
        cfg = DoubleCrystalConfig(45.0, relative_phase_rad=0.5, coherence=1.0)
        rho = double_crystal_state(cfg)
        assert np.angle(rho[3, 0]) == pytest.approx(-0.5, abs=1e-12)

    def test_angle_folding(self):
        cfg = DoubleCrystalConfig(120.0, relative_phase_rad=0.0)
        assert cfg.pump_angle_deg == pytest.approx(60.0)
        assert cfg.relative_phase_rad == pytest.approx(np.pi)

    def test_rejects_out_of_range_coherence(self):
        with pytest.raises(ValidationError, match="coherence"):
            DoubleCrystalConfig(45.0, coherence=1.5)


class TestApplyWaveplate:
    def test_spectrum_is_preserved(self):
        rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
        rotated = apply_waveplate(rho, HWP30)
        assert np.allclose(
            np.linalg.eigvalsh(rotated), np.linalg.eigvalsh(rho), atol=1e-12
        )
        assert entropy(rotated) == pytest.approx(entropy(rho), abs=1e-12)

    def test_pure_basis_state_diagonal(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[3, 3] = 1.0
        out = apply_waveplate(rho, HWP30)
        # signal arm sees a true half wave: P(H) = sin^2(2 * 60 deg) = 0.75
        assert out[0, 0].real + out[1, 1].real == pytest.approx(0.75, abs=1e-12)
        # idler arm is off design, so its flip is slightly imperfect
        idler_h = out[0, 0].real + out[2, 2].real
        assert idler_h == pytest.approx(0.727, abs=2e-3)

    def test_validates_input_state(self):
        with pytest.raises(ValidationError):
            apply_waveplate(np.eye(4, dtype=complex), HWP30)


def test_partially_mixed_keeps_two_level_spectrum():
    plate = WaveplateSpec("half", 823.5, 22.5, angle_reference="from_vertical")
    rho = partially_mixed_state(DoubleCrystalConfig(45.0), plate)
    vals = np.sort(np.linalg.eigvalsh(rho))
    assert np.allclose(vals, [0.0, 0.0, 0.5, 0.5], atol=1e-12)
    assert entropy(rho) == pytest.approx(0.5, abs=1e-12)
    # no plate: plain mixture comes back unchanged
    bare = partially_mixed_state(DoubleCrystalConfig(45.0))
    assert np.allclose(bare, np.diag([0.5, 0.0, 0.0, 0.5]), atol=1e-15)


class TestMixture:
    def test_two_component_mixture(self):
        e0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        e3 = np.array([0.0, 0.0, 0.0, 1.0], dtype=complex)
        rho = pure_state_mixture([e0, e3], [0.25, 0.75])
        assert np.allclose(rho, np.diag([0.25, 0.0, 0.0, 0.75]), atol=1e-15)

    def test_weights_must_sum_to_one(self):
        psi = random_pure(np.random.default_rng(0))
        with pytest.raises(ValidationError, match="sum to 1"):
            pure_state_mixture([psi, psi], [0.5, 0.6])

    def test_weights_must_be_nonnegative(self):
        psi = random_pure(np.random.default_rng(1))
        with pytest.raises(ValidationError, match="non-negative"):
            pure_state_mixture([psi, psi], [1.5, -0.5])

    def test_component_count_mismatch(self):
        psi = random_pure(np.random.default_rng(2))
        with pytest.raises(ValidationError, match="weights"):
            pure_state_mixture([psi], [0.5, 0.5])


class TestMachZehnder:
    def test_plan_encodes_phases(self):
        plan = MachZehnderPlan(
            magnitudes=(0.5, 0.5, 0.5, 0.5), phi_03=0.3, phi_12=0.2, phi_01=0.1
        )
        psi = mz_plan_to_state(plan)
        assert psi[0] == pytest.approx(0.5)
        assert np.angle(psi[1]) == pytest.approx(0.1)
        assert np.angle(psi[2]) == pytest.approx(0.3, abs=1e-12)  # phi_12 + phi_01
        assert np.angle(psi[3]) == pytest.approx(0.3, abs=1e-12)

    def test_round_trip_random_states(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            psi = random_pure(rng)
            plan = state_to_mz_plan(psi)
            rebuilt = mz_plan_to_state(plan)
            overlap = abs(np.vdot(rebuilt, psi))
            assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_zero_amplitude_gets_zero_phase(self):
        psi = np.array([1.0, 0.0, 1.0j, 0.0]) / np.sqrt(2.0)
        plan = state_to_mz_plan(psi)
        assert plan.phi_01 == 0.0
        assert plan.phi_03 == 0.0
        assert plan.magnitudes[1] == pytest.approx(0.0)

    def test_magnitudes_must_be_normalized(self):
        with pytest.raises(ValidationError, match="sum to 1"):
            MachZehnderPlan(magnitudes=(1.0, 1.0, 0.0, 0.0))

    def test_magnitudes_must_be_nonnegative(self):
        with pytest.raises(ValidationError, match="non-negative"):
            MachZehnderPlan(magnitudes=(-0.6, 0.8, 0.0, 0.0))


class TestSchmidtScheme:
    def test_weight_sets_concurrence(self):
        for weight in (1.0, 0.9, 0.6, 0.5):
            psi = schmidt_scheme_state(weight)
            expected = 2.0 * np.sqrt(weight * (1.0 - weight))
            assert concurrence_pure(psi) == pytest.approx(expected, abs=1e-12)

    def test_local_plates_keep_schmidt_weights(self):
        plates = [WaveplateSpec("quarter", 823.5, 10.0), WaveplateSpec("half", 823.5, 75.0)]
        psi = schmidt_scheme_state(0.8, 0.4, signal_plates=plates)
        dec = schmidt_decompose(psi)
        assert dec.weights[0] == pytest.approx(0.8, abs=1e-12)

    def test_weight_bounds(self):
        with pytest.raises(ValidationError, match="major_weight"):
            schmidt_scheme_state(1.2)


class TestConfigFrontEnd:
    def test_single_crystal_defaults(self):
        rho = prepare_from_config({"scheme": "single_crystal"})
        expected = np.zeros((4, 4))
        expected[3, 3] = 1.0  # default source: type I, horizontal axis
        assert np.allclose(rho, expected)

    def test_double_crystal(self):
        rho = prepare_from_config(
            {"scheme": "double_crystal", "pump_angle_deg": 30.0}
        )
        assert np.allclose(rho, np.diag([0.25, 0.0, 0.0, 0.75]), atol=1e-15)

    def test_partially_mixed_with_shared_plate(self):
        rho = prepare_from_config(
            {
                "scheme": "partially_mixed",
                "pump_angle_deg": 45.0,
                "waveplates": [
                    {
                        "kind": "half",
                        "design_wavelength_nm": 823.5,
                        "fast_axis_deg": 22.5,
                        "angle_reference": "from_vertical",
                    }
                ],
            }
        )
        vals = np.sort(np.linalg.eigvalsh(rho))
        assert np.allclose(vals, [0.0, 0.0, 0.5, 0.5], atol=1e-12)

    def test_mach_zehnder_normalizes_magnitudes(self):
        rho = prepare_from_config(
            {"scheme": "mach_zehnder", "magnitudes": [3.0, 0.0, 0.0, 4.0]}
        )
        assert rho[0, 0].real == pytest.approx(0.36, abs=1e-12)
        assert rho[3, 3].real == pytest.approx(0.64, abs=1e-12)

    def test_schmidt_scheme(self):
        rho = prepare_from_config({"scheme": "schmidt", "major_weight": 0.5})
        assert purity(rho) == pytest.approx(1.0, abs=1e-12)

    def test_unknown_scheme(self):
        with pytest.raises(ValidationError, match="scheme"):
            prepare_from_config({"scheme": "teleportation"})

    def test_missing_field_names_path(self):
        with pytest.raises(ValidationError, match=r"config\(double_crystal\)"):
            prepare_from_config({"scheme": "double_crystal"})

    def test_bad_waveplate_names_path(self):
        with pytest.raises(ValidationError, match=r"waveplates\[0\]"):
            prepare_from_config(
                {
                    "scheme": "double_crystal",
                    "pump_angle_deg": 45.0,
                    "waveplates": [{"kind": "half"}],
                }
            )

    def test_custom_source_is_validated(self):
        with pytest.raises(ValidationError, match="energy"):
            prepare_from_config(
                {
                    "scheme": "double_crystal",
                    "pump_angle_deg": 45.0,
                    "source": {"pump_nm": 500.0},
                }
            )
