"""Tests for the concurrent trial runner."""

import pytest

from ddgate.config import ExperimentConfig
from ddgate.runner import (
    TABLE2_COLUMNS,
    Cell,
    TrialSession,
    run_cells,
    run_experiment,
    table2_cells,
)

# small but aligned: 160 segments per cycle is 10 per interval
FAST = ExperimentConfig(n_states=6, segments_per_cycle=160)

SEEDS = (1, 2, 3, 4, 5)

# lowest acceptable DD mean fidelity per (gate, scheme, pulse model)
DD_FLOORS = {
    ("u3", "dd", "ideal"): 0.985,
    ("u3", "dd", "gauss1"): 0.980,
    ("u3", "dd", "gauss2"): 0.965,
    ("ue1", "dd", "ideal"): 0.985,
    ("ue1", "dd", "gauss1"): 0.975,
    ("ue1", "dd", "gauss2"): 0.965,
}


def _cell_key(cell: Cell) -> tuple[str, str, str]:
    c = cell.config
    return c.gate, c.scheme, c.pulse_model


@pytest.fixture(scope="module")
def grid():
    """Full DD / no-DD grid at default settings for each seed."""
    out = {}
    for seed in SEEDS:
        cells = table2_cells(ExperimentConfig(seed=seed))
        out[seed] = list(zip(cells, run_cells(cells, workers=4)))
    return out


class TestTrialSession:
    async def test_run(self):
        async with TrialSession(workers=2) as session:
            report = await session.run(FAST)
        assert report.n_states == 6
        assert len(report.fidelities) == 6
        assert all(0.0 <= f <= 1.0 for f in report.fidelities)

    async def test_worker_count_does_not_change_results(self):
        config = FAST.replace(gate="ue1", pulse_model="gauss2")
        async with TrialSession(workers=1) as session:
            one = await session.run(config)
        async with TrialSession(workers=4) as session:
            four = await session.run(config)
        assert one.fidelities == four.fidelities

    async def test_deterministic_per_seed(self):
        async with TrialSession() as session:
            a = await session.run(FAST.replace(seed=7))
            b = await session.run(FAST.replace(seed=7))
            c = await session.run(FAST.replace(seed=8))
        assert a == b
        assert a.fidelities != c.fidelities

    async def test_zero_noise(self):
        config = FAST.replace(noise_lo=0.0, noise_hi=0.0)
        async with TrialSession(workers=2) as session:
            reports = await session.gather(Cell(config), Cell(config.replace(scheme="none")))
        for report in reports:
            assert report.mean == pytest.approx(1.0, abs=1e-9)

    async def test_shared_noise(self):
        config = FAST.replace(shared_noise=True, gate="ue1")
        async with TrialSession(workers=2) as session:
            a = await session.run(config)
            b = await session.run(config)
        assert a == b
        assert a.n_states == 6

    async def test_gather_keeps_order(self):
        cells = [Cell(FAST.replace(gate=g)) for g in ("u3", "ue1", "ue2")]
        async with TrialSession(workers=3) as session:
            together = await session.gather(*cells)
            separate = [await session.run(c.config) for c in cells]
        assert together == separate

    async def test_closed_session(self):
        session = TrialSession()
        await session.close()
        with pytest.raises(RuntimeError):
            await session.run(FAST)

    def test_invalid_workers(self):
        with pytest.raises(ValueError):
            TrialSession(workers=0)


class TestTable2:
    def test_cells(self):
        cells = table2_cells(ExperimentConfig())
        assert len(cells) == 12
        assert [c.config.scheme for c in cells[:2]] == ["dd", "none"]
        assert cells[0].salt == cells[1].salt == 0
        assert [c.salt for c in cells[:6:2]] == [0, 1, 2]
        assert [c.config.pulse_model for c in cells[:6:2]] == list(TABLE2_COLUMNS)
        assert {c.config.gate for c in cells} == {"u3", "ue1"}

    def test_labels(self):
        cell = table2_cells(ExperimentConfig(seed=3))[7]
        assert cell.labels == ("ue1", "no_dd", "ideal", 1, 3)

    def test_dd_bands(self, grid):
        for seed, reports in grid.items():
            by_cell = {_cell_key(c): r.mean for c, r in reports}
            for (gate, scheme, model), floor in DD_FLOORS.items():
                assert by_cell[gate, scheme, model] >= floor, (seed, gate, model)

    def test_no_dd_band_on_seed_average(self, grid):
        baselines = {}
        for reports in grid.values():
            for cell, report in reports:
                if cell.config.scheme == "none":
                    baselines.setdefault(_cell_key(cell), []).append(report.mean)
        assert len(baselines) == 6
        for key, means in baselines.items():
            assert len(means) == len(SEEDS)
            assert 0.10 <= sum(means) / len(means) <= 0.45, key

    def test_ideal_pulses_beat_gauss2_on_matched_streams(self):
        base = ExperimentConfig(gate="ue1", n_states=20)
        cells = []
        for seed in SEEDS:
            config = base.replace(seed=seed)
            cells.append(Cell(config, 2))
            cells.append(Cell(config.replace(pulse_model="gauss2"), 2))
        reports = run_cells(cells, workers=4)
        pairs = list(zip(reports[::2], reports[1::2]))
        assert all(ideal.mean >= noisy.mean for ideal, noisy in pairs)

    def test_more_cycles_do_not_hurt(self):
        base = ExperimentConfig(gate="u3", seed=2)
        one, two = run_cells([Cell(base), Cell(base.replace(n_cycles=2))], workers=2)
        assert two.mean >= one.mean - 0.002


class TestRunExperiment:
    def test_matches_session(self):
        config = FAST.replace(gate="ue3", workers=2)
        assert run_experiment(config) == run_cells([Cell(config)])[0]
