"""Tests for gate and error Hamiltonians."""

import math

import numpy as np
import pytest
from scipy.special import j1

from ddgate.model import (
    J1_FIRST_MAXIMUM,
    CouplingForm,
    ErrorCoefficients,
    GateKind,
    H1Params,
    H2Params,
    TransmonParams,
    angular_to_mhz,
    build_double_excitation,
    build_error_hamiltonian,
    build_flip_flop,
    build_h1,
    build_h2,
    build_h_trans,
    coupling_operator,
    effective_j,
    mhz_to_angular,
    modulation_ratio,
    scheduled_hamiltonian,
    single_qubit_rotation_params,
    transmon_params_for_step,
)
from ddgate.pauli import PauliString, error_set, to_matrix


def m(text: str) -> np.ndarray:
    return to_matrix(PauliString(text))


class TestCouplings:
    def test_flip_flop_is_xx_plus_yy(self):
        assert np.allclose(build_flip_flop(1.0), (m("XX") + m("YY")) / 2)

    def test_double_excitation_is_xx_minus_yy(self):
        assert np.allclose(build_double_excitation(1.0), (m("XX") - m("YY")) / 2)

    def test_x_on_one_qubit_maps_double_excitation_to_flip_flop(self):
        x1 = m("XI")
        assert np.allclose(x1 @ build_double_excitation(1.0) @ x1, build_flip_flop(1.0))

    def test_flip_flop_symmetric_in_qubits(self):
        assert np.allclose(build_flip_flop(2.0, 1, 2), build_flip_flop(2.0, 2, 1))

    def test_bad_pair(self):
        with pytest.raises(ValueError):
            build_flip_flop(1.0, 1, 3)

    @pytest.mark.parametrize("kind, letters", [("zz", "ZZ"), ("xx", "XX"), ("zx", "ZX")])
    def test_h2(self, kind, letters):
        assert np.allclose(build_h2(H2Params(kind, 3.0)), 3.0 * m(letters))

    def test_h2_rejects_flip_flop(self):
        with pytest.raises(ValueError):
            H2Params(GateKind.FLIP_FLOP, 1.0)

    def test_coupling_operator_form_mismatch(self):
        with pytest.raises(ValueError):
            coupling_operator(GateKind.ZZ, CouplingForm.FLIP_FLOP)
        with pytest.raises(ValueError):
            coupling_operator(GateKind.FLIP_FLOP, CouplingForm.PLAIN)


class TestH1:
    def test_x_rotation(self):
        p = single_qubit_rotation_params("x", 2.0)
        assert p.phi == 0.0 and p.coupling == 0.0
        assert np.allclose(build_h1(p), 2.0 * m("XI"))

    def test_y_rotation(self):
        p = single_qubit_rotation_params("y", 2.0, qubit=2)
        assert p.phi == pytest.approx(math.pi / 2)
        assert np.allclose(build_h1(p), 2.0 * m("IY"))

    def test_z_rotation(self):
        p = single_qubit_rotation_params("z", 0.5)
        assert p.omega == 0.0
        assert np.allclose(build_h1(p), 0.5 * m("ZI"))

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            single_qubit_rotation_params("w", 1.0)

    def test_phi_range(self):
        with pytest.raises(ValueError):
            H1Params(phi=2 * math.pi)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            H1Params(delta=float("nan"))

    def test_coupling_only(self):
        assert np.allclose(build_h1(H1Params(coupling=1.5)), build_flip_flop(1.5))


class TestTransmon:
    def test_effective_j(self):
        assert effective_j(2.0, 1.0) == pytest.approx(2.0 * j1(1.0))
        assert J1_FIRST_MAXIMUM == pytest.approx(1.8411837813406593)
        assert effective_j(1.0, J1_FIRST_MAXIMUM) == pytest.approx(0.5819, abs=1e-4)
        assert effective_j(2.0, J1_FIRST_MAXIMUM) == pytest.approx(2 * effective_j(1.0, J1_FIRST_MAXIMUM))

    def test_negative_beta(self):
        with pytest.raises(ValueError):
            effective_j(1.0, -0.1)

    @pytest.mark.parametrize("beta", [0.0, 3.8317059702075125, -1.0])
    def test_unusable_modulation_ratio(self, beta):
        with pytest.raises(ValueError):
            modulation_ratio(beta)
        with pytest.raises(ValueError):
            transmon_params_for_step(1, CouplingForm.FLIP_FLOP, 1.0, beta)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_negative_bessel_lobe_keeps_sign(self, sign):
        # J1(5) < 0
        p = transmon_params_for_step(sign, CouplingForm.FLIP_FLOP, 3.0, beta=5.0)
        assert p.g > 0
        assert np.allclose(build_h_trans(p), sign * build_flip_flop(3.0))

    def test_positive_step_is_flip_flop(self):
        p = transmon_params_for_step(1, CouplingForm.FLIP_FLOP, 3.0)
        assert p.coupling == pytest.approx(3.0)
        assert np.allclose(build_h_trans(p), build_flip_flop(3.0))

    def test_negative_step_uses_modulation_phase(self):
        p = transmon_params_for_step(-1, CouplingForm.FLIP_FLOP, 3.0)
        assert p.varphi == pytest.approx(math.pi)
        assert np.allclose(build_h_trans(p), -build_flip_flop(3.0))

    def test_star_step_is_double_excitation(self):
        p = transmon_params_for_step(1, CouplingForm.DOUBLE_EXCITATION, 2.0)
        assert np.allclose(build_h_trans(p), build_double_excitation(2.0))

    def test_drive_terms(self):
        p = TransmonParams(g=0.0, omega=1.0)
        assert np.allclose(build_h_trans(p), m("XI") + m("IX"))

    def test_plain_form_rejected(self):
        with pytest.raises(ValueError):
            TransmonParams(g=1.0, form=CouplingForm.PLAIN)

    def test_scheduled_flip_flop_uses_transmon(self):
        h = scheduled_hamiltonian(GateKind.FLIP_FLOP, -1, CouplingForm.DOUBLE_EXCITATION, 1.0)
        assert np.allclose(h, -build_double_excitation(1.0))


class TestErrorHamiltonian:
    def test_single_channel(self):
        assert np.allclose(build_error_hamiltonian(ErrorCoefficients(zz=2.0)), 2.0 * m("ZZ"))
        assert np.allclose(build_error_hamiltonian(ErrorCoefficients(y2=-1.0)), -m("IY"))

    def test_is_hermitian(self):
        rng = np.random.default_rng(3)
        h = build_error_hamiltonian(ErrorCoefficients.from_array(rng.normal(size=15)))
        assert np.allclose(h, h.conj().T)

    def test_matches_pauli_sum(self):
        rng = np.random.default_rng(8)
        values = rng.normal(size=15)
        expected = sum(v * to_matrix(e) for v, e in zip(values, error_set()))
        h = build_error_hamiltonian(ErrorCoefficients.from_array(values))
        assert np.allclose(h, expected, atol=1e-12)

    def test_array_round_trip(self):
        values = np.arange(15, dtype=float)
        assert np.array_equal(ErrorCoefficients.from_array(values).as_array(), values)

    def test_add(self):
        total = ErrorCoefficients(x1=1.0) + ErrorCoefficients(x1=2.0, zy=1.0)
        assert total.x1 == 3.0 and total.zy == 1.0

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            ErrorCoefficients.from_array(np.zeros(12))


class TestGateKind:
    @pytest.mark.parametrize("name, kind", [
        ("u3", GateKind.FLIP_FLOP),
        ("ue1", GateKind.ZZ),
        ("ue2", GateKind.XX),
        ("ue3", GateKind.ZX),
        ("flip-flop", GateKind.FLIP_FLOP),
        ("ZX", GateKind.ZX),
    ])
    def test_parse(self, name, kind):
        assert GateKind.parse(name) is kind

    def test_label(self):
        assert GateKind.ZZ.label == "ue1"

    def test_unknown(self):
        with pytest.raises(ValueError):
            GateKind.parse("cnot")

    def test_unit_conversion(self):
        assert mhz_to_angular(10.0) == pytest.approx(2 * math.pi * 1e7)
        assert angular_to_mhz(mhz_to_angular(2.5)) == pytest.approx(2.5)
