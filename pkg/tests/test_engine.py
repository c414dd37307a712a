"""Tests for propagation, pulses and ideal gates."""

import csv
import math
from functools import reduce

import numpy as np
import pytest

from ddgate.engine import (
    DEFAULT_COUPLING,
    Integrator,
    Scheme,
    SimulationPlan,
    apply_pulse,
    crosstalk_scenario,
    ideal_gate,
    ordered_product,
    rk4_propagator,
    segment_propagator,
    simulate,
    suppression_slope,
)
from ddgate.exceptions import (
    DimensionError,
    MisalignedTrajectoryError,
    NotHermitianError,
    UnsupportedPulseError,
)
from ddgate.fidelity import overlap_fidelity
from ddgate.model import GateKind, mhz_to_angular
from ddgate.noise import GAUSS2, NoiseTrajectory, PulseErrorModel, RngStream, sample_trajectory
from ddgate.pauli import PauliString, to_matrix
from ddgate.sequence import build_x_sequence, coupling_schedule, xy4_preset

SEGMENTS = 800


class FixedZeta(PulseErrorModel):
    label = "fixed"

    def __init__(self, zeta: float):
        self.zeta = zeta
        self.draws = 0

    def sample(self, rng):
        self.draws += 1
        return self.zeta


def m(text: str) -> np.ndarray:
    return to_matrix(PauliString(text))


def zero_noise(plan: SimulationPlan, per_cycle: int = SEGMENTS) -> NoiseTrajectory:
    n = per_cycle * plan.n_cycles
    return NoiseTrajectory.zeros(n, plan.segment_duration(n))


def random_noise(plan: SimulationPlan, seed: int = 1) -> NoiseTrajectory:
    n = SEGMENTS * plan.n_cycles
    return sample_trajectory(RngStream(seed), n_segments=n, segment_duration=plan.segment_duration(n))


def gate_fidelity(plan: SimulationPlan, u: np.ndarray) -> float:
    return overlap_fidelity(ideal_gate(plan.gate_kind, plan.gate_angle), u)


class TestSegmentPropagator:
    def test_zero_is_identity(self):
        assert np.allclose(segment_propagator(np.zeros((4, 4)), 1.0), np.eye(4), atol=1e-15)

    def test_half_period(self):
        dt = 2e-9
        h = math.pi / (2 * dt) * m("XI")
        assert np.allclose(segment_propagator(h, dt), -1j * m("XI"), atol=1e-12)

    def test_unitary(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u = segment_propagator(a + a.conj().T, 0.7)
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12

    def test_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            segment_propagator(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)

    def test_not_square(self):
        with pytest.raises(DimensionError):
            segment_propagator(np.zeros((2, 3)), 1.0)

    def test_matches_runge_kutta(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = a + a.conj().T
        h /= np.linalg.norm(h, 2)
        dt = 0.05
        assert np.max(np.abs(segment_propagator(h, dt) - rk4_propagator(h, dt, steps=4))) < 1e-8

    def test_ordered_product(self):
        rng = np.random.default_rng(1)
        stack = []
        for _ in range(7):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            stack.append(segment_propagator(a + a.conj().T, 0.3))
        expected = reduce(lambda acc, u: u @ acc, stack, np.eye(4))
        assert np.allclose(ordered_product(np.stack(stack)), expected, atol=1e-12)


class TestApplyPulse:
    def test_ideal_x(self):
        assert np.array_equal(apply_pulse(PauliString("XI")), -1j * m("XI"))

    def test_ideal_zz(self):
        assert np.allclose(apply_pulse(PauliString("ZZ")), -m("ZZ"))

    def test_over_rotation(self):
        zeta = 0.01
        u = apply_pulse(PauliString("XI"), FixedZeta(zeta), RngStream(1, purpose="zeta"))
        theta = math.pi / 2 + zeta
        expected = math.cos(theta) * np.eye(4) - 1j * math.sin(theta) * m("XI")
        assert np.allclose(u, expected, atol=1e-15)
        assert overlap_fidelity(apply_pulse(PauliString("XI")), u) == pytest.approx(math.cos(zeta) ** 2)

    def test_one_draw_per_factor(self):
        model = FixedZeta(0.02)
        apply_pulse(PauliString("ZZ"), model, RngStream(1, purpose="zeta"))
        apply_pulse(PauliString("IX"), model, RngStream(1, purpose="zeta"))
        assert model.draws == 3

    def test_y_rejected(self):
        with pytest.raises(UnsupportedPulseError):
            apply_pulse(PauliString("YI"))

    def test_phase_rejected(self):
        with pytest.raises(UnsupportedPulseError):
            apply_pulse(PauliString("XI", 2))

    def test_noisy_model_needs_stream(self):
        with pytest.raises(ValueError):
            apply_pulse(PauliString("XI"), GAUSS2)


class TestIdealGate:
    def test_flip_flop_block(self):
        g = math.pi / 4
        u = ideal_gate(GateKind.FLIP_FLOP, g)
        c, s = math.cos(g), math.sin(g)
        expected = np.array([
            [1, 0, 0, 0],
            [0, c, -1j * s, 0],
            [0, -1j * s, c, 0],
            [0, 0, 0, 1],
        ])
        assert np.allclose(u, expected, atol=1e-15)

    def test_zz_diagonal(self):
        u = ideal_gate("ue1", math.pi / 4)
        p = np.exp(-1j * math.pi / 4)
        assert np.allclose(u, np.diag([p, p.conjugate(), p.conjugate(), p]), atol=1e-15)

    @pytest.mark.parametrize("kind", list(GateKind))
    def test_zero_angle(self, kind):
        assert np.allclose(ideal_gate(kind, 0.0), np.eye(4))

    @pytest.mark.parametrize("kind", list(GateKind))
    def test_matches_exponential(self, kind):
        plan = SimulationPlan.for_gate(kind, coupling=1.0)
        expected = segment_propagator(plan.target(), plan.total_duration)
        assert np.allclose(ideal_gate(kind, plan.gate_angle), expected, atol=1e-12)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ideal_gate("swap", 1.0)


class TestPlan:
    def test_default_timing(self):
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP)
        assert plan.coupling == pytest.approx(mhz_to_angular(10.0))
        assert plan.total_duration == pytest.approx(12.5e-9)
        assert plan.tau == pytest.approx(12.5e-9 / 16)
        assert plan.gate_angle == pytest.approx(math.pi / 4)
        assert plan.segment_duration(800) == pytest.approx(15.625e-12)

    def test_cycles_subdivide(self):
        plan = SimulationPlan.for_gate(GateKind.ZZ, n_cycles=2)
        assert plan.tau == pytest.approx(12.5e-9 / 32)
        assert plan.gate_angle == pytest.approx(math.pi / 4)

    def test_invalid(self):
        with pytest.raises(ValueError):
            SimulationPlan.for_gate(GateKind.ZZ, n_cycles=0)
        with pytest.raises(ValueError):
            SimulationPlan.for_gate(GateKind.ZZ, coupling=0.0)

    def test_schedule_kind_must_match(self):
        with pytest.raises(ValueError):
            SimulationPlan.for_gate(GateKind.ZZ, schedule=coupling_schedule(GateKind.XX))

    def test_schedule_length_must_match(self):
        with pytest.raises(DimensionError):
            SimulationPlan.for_gate(GateKind.ZZ, sequence=build_x_sequence())

    def test_one_qubit_sequence_rejected(self):
        with pytest.raises(DimensionError):
            SimulationPlan(GateKind.ZZ, xy4_preset(), coupling_schedule("zz"), 1e-9)

    def test_scheme_aliases(self):
        assert Scheme.parse("none") is Scheme.NO_DD
        assert Scheme.parse("dd") is Scheme.DD
        with pytest.raises(ValueError):
            Scheme.parse("sometimes")


class TestSimulate:
    @pytest.mark.parametrize("scheme", list(Scheme))
    @pytest.mark.parametrize("kind", list(GateKind))
    def test_zero_noise_recovers_gate(self, kind, scheme):
        plan = SimulationPlan.for_gate(kind, scheme=scheme)
        result = simulate(plan, zero_noise(plan))
        assert gate_fidelity(plan, result.propagator) > 1 - 1e-9
        assert result.unitarity_defect < 1e-8

    def test_zero_noise_multi_cycle(self):
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP, n_cycles=3)
        assert gate_fidelity(plan, simulate(plan, zero_noise(plan)).propagator) > 1 - 1e-9

    def test_unitary_under_noise(self):
        plan = SimulationPlan.for_gate(GateKind.ZX, pulse_error=GAUSS2)
        result = simulate(plan, random_noise(plan), RngStream(1, purpose="zeta"))
        assert result.unitarity_defect < 1e-8

    def test_dd_suppresses_constant_noise(self):
        eps = mhz_to_angular(5.0)
        infidelity = {}
        for scheme in Scheme:
            plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP, scheme=scheme)
            noise = NoiseTrajectory.constant(eps, SEGMENTS, plan.segment_duration(SEGMENTS))
            infidelity[scheme] = 1 - gate_fidelity(plan, simulate(plan, noise).propagator)
        assert infidelity[Scheme.DD] * 10 < infidelity[Scheme.NO_DD]

    def test_dd_beats_no_dd_on_random_noise(self):
        fid = {}
        for scheme in Scheme:
            plan = SimulationPlan.for_gate(GateKind.ZZ, scheme=scheme)
            fid[scheme] = gate_fidelity(plan, simulate(plan, random_noise(plan)).propagator)
        assert fid[Scheme.DD] > 0.95
        assert fid[Scheme.NO_DD] < fid[Scheme.DD]

    def test_misaligned_segment_count(self):
        plan = SimulationPlan.for_gate(GateKind.ZZ)
        noise = NoiseTrajectory.zeros(801, plan.segment_duration(801))
        with pytest.raises(MisalignedTrajectoryError):
            simulate(plan, noise)

    def test_misaligned_duration(self):
        plan = SimulationPlan.for_gate(GateKind.ZZ)
        with pytest.raises(MisalignedTrajectoryError):
            simulate(plan, NoiseTrajectory.zeros(800, 1e-9))

    def test_same_stream_same_result(self):
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP, pulse_error=GAUSS2)
        noise = random_noise(plan, seed=3)
        a = simulate(plan, noise, RngStream(3, purpose="zeta")).propagator
        b = simulate(plan, noise, RngStream(3, purpose="zeta")).propagator
        assert np.array_equal(a, b)

    def test_integrators_agree(self):
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP)
        noise = random_noise(plan)
        exact = simulate(plan, noise).propagator
        rk4 = simulate(
            SimulationPlan.for_gate(GateKind.FLIP_FLOP, integrator=Integrator.RUNGE_KUTTA_4), noise
        ).propagator
        assert np.max(np.abs(exact - rk4)) < 1e-6

    def test_trace(self, tmp_path):
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP)
        result = simulate(plan, zero_noise(plan), trace=True)
        assert len(result.trace) == 16
        assert [p.interval for p in result.trace] == list(range(1, 17))
        assert result.trace[1].frame == "XX"
        assert all(p.fidelity > 1 - 1e-9 for p in result.trace)
        assert result.trace[-1].time == pytest.approx(plan.total_duration)

        path = tmp_path / "trace.csv"
        result.write_trace_csv(path)
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["time", "interval", "frame", "fidelity"]
        assert len(rows) == 17

    def test_no_trace_by_default(self):
        plan = SimulationPlan.for_gate(GateKind.ZZ)
        assert simulate(plan, zero_noise(plan)).trace == ()


class TestCrosstalk:
    J_CT = mhz_to_angular(2.0)

    def test_zero_crosstalk_matches_simulate(self):
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP)
        a = crosstalk_scenario(plan, 0.0).propagator
        b = simulate(plan, zero_noise(plan)).propagator
        assert np.allclose(a, b, atol=1e-12)

    def test_dd_removes_crosstalk(self):
        dd = SimulationPlan.for_gate(GateKind.FLIP_FLOP)
        bare = SimulationPlan.for_gate(GateKind.FLIP_FLOP, scheme=Scheme.NO_DD)
        f_dd = gate_fidelity(dd, crosstalk_scenario(dd, self.J_CT).propagator)
        f_bare = gate_fidelity(bare, crosstalk_scenario(bare, self.J_CT).propagator)
        assert f_dd > f_bare
        assert f_dd >= 0.99

    def test_no_dd_closed_form(self):
        # crosstalk commutes with the flip-flop coupling
        plan = SimulationPlan.for_gate(GateKind.FLIP_FLOP, scheme=Scheme.NO_DD)
        f = gate_fidelity(plan, crosstalk_scenario(plan, self.J_CT).propagator)
        assert f == pytest.approx(math.cos(self.J_CT * plan.total_duration) ** 2, abs=1e-9)
        assert f < 1

    def test_flip_flop_only(self):
        with pytest.raises(ValueError):
            crosstalk_scenario(SimulationPlan.for_gate(GateKind.ZZ), self.J_CT)


class TestSuppressionScaling:
    def test_infidelity_falls_with_interval(self):
        result = suppression_slope(GateKind.FLIP_FLOP)
        assert result.infidelities[1] < result.infidelities[0]
        assert result.slope >= 1.5

    def test_dd_scales_faster_than_no_dd(self):
        dd = suppression_slope(GateKind.FLIP_FLOP, scheme=Scheme.DD)
        bare = suppression_slope(GateKind.FLIP_FLOP, scheme=Scheme.NO_DD)
        assert dd.slope > bare.slope
        assert dd.infidelities[0] < bare.infidelities[0]

    def test_default_coupling(self):
        assert DEFAULT_COUPLING == pytest.approx(2 * math.pi * 1e7)
