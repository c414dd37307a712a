"""Trial throughput: sequential loop against the threaded TrialSession."""

import asyncio
import os
import statistics
import time
from typing import Any

from ddgate import ExperimentConfig, TrialSession, ideal_gate
from ddgate.runner import run_trial


def benchmark_sequential(config: ExperimentConfig) -> dict[str, Any]:
    """Run every trial in a plain loop on the calling thread."""
    print("\nBenchmarking sequential trials...")
    plan = config.plan()
    u_ideal = ideal_gate(plan.gate_kind, plan.gate_angle)

    latencies = []
    start = time.perf_counter()
    for k in range(config.n_states):
        t0 = time.perf_counter()
        run_trial(config, plan, u_ideal, k)
        latencies.append(time.perf_counter() - t0)
    elapsed = time.perf_counter() - start

    return _summarize("sequential", config.n_states, elapsed, latencies)


async def benchmark_session(config: ExperimentConfig, workers: int) -> dict[str, Any]:
    """Run the same trials through a session with ``workers`` threads."""
    print(f"\nBenchmarking TrialSession (workers={workers})...")
    start = time.perf_counter()
    async with TrialSession(workers=workers) as session:
        await session.run(config)
    elapsed = time.perf_counter() - start
    return _summarize(f"session x{workers}", config.n_states, elapsed, [])


def _summarize(label: str, n: int, elapsed: float, latencies: list[float]) -> dict[str, Any]:
    rate = n / elapsed if elapsed > 0 else 0
    avg = statistics.mean(latencies) * 1000 if latencies else elapsed / n * 1000
    print(f"  Time: {elapsed:.2f}s")
    print(f"  Trials/sec: {rate:.2f}")
    print(f"  Avg per trial: {avg:.2f}ms")
    return {"label": label, "trials_per_sec": rate, "time": elapsed, "avg_ms": avg}


async def main() -> None:
    print("=" * 60)
    print("TRIAL THROUGHPUT")
    print("=" * 60)

    n_states = int(os.environ.get("DDGATE_BENCH_STATES", "200"))
    workers = int(os.environ.get("DDGATE_BENCH_WORKERS", str(os.cpu_count() or 4)))
    config = ExperimentConfig(gate="u3", pulse_model="gauss2", n_states=n_states)
    print(f"\n  Trials: {n_states}, Segments per cycle: {config.segments_per_cycle}")

    results = [benchmark_sequential(config)]
    for w in sorted({1, workers}):
        results.append(await benchmark_session(config, w))

    print("\n" + "=" * 60)
    print(f"{'Runner':<16} {'Trials/s':<12} {'Time(s)':<10}")
    print("-" * 60)
    for r in sorted(results, key=lambda r: r["trials_per_sec"], reverse=True):
        print(f"{r['label']:<16} {r['trials_per_sec']:>10.2f}  {r['time']:>8.2f}")
    print("=" * 60)


if __name__ == "__main__":
    asyncio.run(main())
