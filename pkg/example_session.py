"""Example demonstrating TrialSession usage with concurrent cells."""

import asyncio

import ddgate
from ddgate.runner import Cell


async def main():
    """Run session examples."""
    print("Testing ddgate TrialSession functionality...\n")

    base = ddgate.ExperimentConfig(gate="u3", n_states=30, seed=3)

    # Example 1: one config at a time
    print("1. Using session context manager...")
    async with ddgate.TrialSession(workers=4) as session:
        report = await session.run(base)
        print(f"   DD mean: {report.mean:.6f}")

        report = await session.run(base.replace(scheme="none"))
        print(f"   No-DD mean: {report.mean:.6f}")

    print("\n2. Gathering cells concurrently...")
    cells = [Cell(base.replace(pulse_model=m), salt) for salt, m in enumerate(("ideal", "gauss1", "gauss2"))]
    async with ddgate.TrialSession(workers=4) as session:
        reports = await session.gather(*cells)
    for cell, r in zip(cells, reports):
        print(f"   {cell.config.pulse_model:<7} {r.mean:.6f} +/- {r.std:.6f}")

    print("\n3. Manual session management...")
    session = ddgate.TrialSession(workers=2)
    try:
        report = await session.run(base.replace(gate="ue3", n_cycles=2))
        print(f"   ue3, two cycles: {report.mean:.6f}")
    finally:
        await session.close()


if __name__ == "__main__":
    asyncio.run(main())
