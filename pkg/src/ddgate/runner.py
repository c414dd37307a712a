"""Concurrent Monte Carlo trials.

Each trial is one gate execution on one Haar-random state, driven by its own
``RngStream``s. Trials run on a thread pool behind an async session and are
folded in trial order, so a report depends only on the config, never on
worker count or completion order.

Example:
    import asyncio
    from ddgate import ExperimentConfig, TrialSession

    async def main():
        async with TrialSession(workers=4) as session:
            report = await session.run(ExperimentConfig(gate="ue1"))
            print(report.mean)

    asyncio.run(main())
"""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .config import ExperimentConfig
from .engine import SimulationPlan, ideal_gate, simulate
from .fidelity import FidelityReport, random_state, state_fidelity
from .noise import NoiseTrajectory, RngStream, sample_trajectory
from .pauli import Operator

try:
    import uvloop
    _HAS_UVLOOP = True
except ImportError:
    _HAS_UVLOOP = False

logger = logging.getLogger(__name__)

TABLE2_GATES = ("u3", "ue1")
TABLE2_COLUMNS = ("ideal", "gauss1", "gauss2")


def noise_for_trial(config: ExperimentConfig, plan: SimulationPlan, trial: int, salt: int = 0) -> NoiseTrajectory:
    n_segments = config.segments_per_cycle * config.n_cycles
    lo, hi = config.noise_bounds
    return sample_trajectory(
        RngStream(config.seed, trial, "trajectory", salt),
        n_segments=n_segments,
        lo=lo,
        hi=hi,
        segment_duration=plan.segment_duration(n_segments),
        random_sign=config.random_sign,
    )


def propagate_trial(config: ExperimentConfig, plan: SimulationPlan, trial: int, salt: int = 0) -> Operator:
    """Gate propagator for one noise and pulse-error realization."""
    trajectory = noise_for_trial(config, plan, trial, salt)
    return simulate(plan, trajectory, RngStream(config.seed, trial, "zeta", salt)).propagator


def run_trial(
    config: ExperimentConfig,
    plan: SimulationPlan,
    u_ideal: Operator,
    trial: int,
    salt: int = 0,
    u_actual: Optional[Operator] = None,
) -> float:
    """State fidelity of trial ``trial``; pass ``u_actual`` to reuse a shared realization."""
    if u_actual is None:
        u_actual = propagate_trial(config, plan, trial, salt)
    psi = random_state(RngStream(config.seed, trial, "state", salt))
    return state_fidelity(u_ideal @ psi, u_actual @ psi)


@dataclass(frozen=True)
class Cell:
    """One labelled experiment of a batch; ``salt`` picks its random streams."""

    config: ExperimentConfig
    salt: int = 0

    @property
    def labels(self) -> tuple[str, str, str, int, int]:
        c = self.config
        return c.gate_kind.label, c.scheme_kind.value, c.pulse_model, c.n_cycles, c.seed


class TrialSession:
    """Async front end to a thread pool of trials.

    Example:
        async with TrialSession(workers=8) as session:
            reports = await session.gather(cell_a, cell_b)
    """

    __slots__ = ('_executor', '_workers', '_closed')

    def __init__(self, workers: int = 1):
        """Initialize session.

        Args:
            workers: Worker threads; results do not depend on it
        """
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self._workers = workers
        self._executor: Optional[ThreadPoolExecutor] = None
        self._closed = False

    @property
    def workers(self) -> int:
        return self._workers

    def _get_executor(self) -> ThreadPoolExecutor:
        if self._closed:
            raise RuntimeError("Session is closed")
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="ddgate")
        return self._executor

    async def _submit(self, fn, *args):
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(self._get_executor(), fn, *args)

    async def run(self, config: ExperimentConfig, salt: int = 0) -> FidelityReport:
        """Average fidelity of one config over ``config.n_states`` trials."""
        plan = config.plan()
        u_ideal = ideal_gate(plan.gate_kind, plan.gate_angle)
        shared = None
        if config.shared_noise:
            shared = await self._submit(propagate_trial, config, plan, 0, salt)
        tasks = [
            self._submit(run_trial, config, plan, u_ideal, k, salt, shared)
            for k in range(config.n_states)
        ]
        fidelities = await asyncio.gather(*tasks)
        logger.debug(
            "%s/%s/%s salt=%d: %d trials on %d workers",
            config.gate, config.scheme, config.pulse_model, salt, len(fidelities), self._workers,
        )
        return FidelityReport.from_fidelities(fidelities)

    async def gather(self, *cells: Cell) -> list[FidelityReport]:
        """Run several cells concurrently; reports come back in argument order."""
        return list(await asyncio.gather(*(self.run(c.config, c.salt) for c in cells)))

    async def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    async def __aenter__(self) -> 'TrialSession':
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb) -> None:
        await self.close()


def table2_cells(base: ExperimentConfig) -> list[Cell]:
    """DD cell and its no-DD baseline for each gate and pulse-error column.

    A cell and its baseline share a salt, so they see the same noise and
    states; columns use different salts.
    """
    cells = []
    for gate in TABLE2_GATES:
        for salt, model in enumerate(TABLE2_COLUMNS):
            config = base.replace(gate=gate, pulse_model=model)
            cells.append(Cell(config.replace(scheme="dd"), salt))
            cells.append(Cell(config.replace(scheme="none"), salt))
    return cells


def _run_coroutine(coro):
    if _HAS_UVLOOP:
        loop = uvloop.new_event_loop()
        try:
            return loop.run_until_complete(coro)
        finally:
            loop.close()
    return asyncio.run(coro)


async def _run_cells(cells: list[Cell], workers: int) -> list[FidelityReport]:
    async with TrialSession(workers) as session:
        return await session.gather(*cells)


def run_cells(cells: list[Cell], workers: int = 1) -> list[FidelityReport]:
    return _run_coroutine(_run_cells(cells, workers))


def run_experiment(config: ExperimentConfig, salt: int = 0) -> FidelityReport:
    """Blocking single-config run on ``config.workers`` threads."""
    return run_cells([Cell(config, salt)], config.workers)[0]
