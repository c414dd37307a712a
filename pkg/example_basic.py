"""Basic example demonstrating ddgate usage."""

import ddgate
from ddgate.fidelity import overlap_fidelity
from ddgate.model import mhz_to_angular


def main():
    """Run basic examples."""
    print("Testing ddgate basic functionality...\n")

    # Example 1: symbolic cancellation over the full cycle
    print("1. Checking first-order cancellation over the full cycle...")
    cycle = ddgate.build_full_cycle()
    errors = ddgate.error_set()
    left = [e for e in errors if ddgate.first_order_sum(cycle, e) != 0]
    print(f"   Pulses per cycle: {len(cycle.pulses)}")
    print(f"   Uncancelled error operators: {left or 'none'}")

    print("\n2. Propagating one noisy flip-flop gate...")
    plan = ddgate.SimulationPlan.for_gate("u3")
    trajectory = ddgate.sample_trajectory(
        ddgate.RngStream(seed=1),
        lo=mhz_to_angular(1.0),
        hi=mhz_to_angular(10.0),
        segment_duration=plan.segment_duration(800),
    )
    target = ddgate.ideal_gate(plan.gate_kind, plan.gate_angle)
    with_dd = ddgate.simulate(plan, trajectory)
    print(f"   Gate time: {plan.total_duration * 1e9:.2f} ns")
    print(f"   Overlap with DD: {overlap_fidelity(target, with_dd.propagator):.6f}")

    bare = ddgate.SimulationPlan.for_gate("u3", scheme="none")
    without_dd = ddgate.simulate(bare, trajectory)
    print(f"   Overlap without DD: {overlap_fidelity(target, without_dd.propagator):.6f}")

    print("\n3. Random-state fidelity of a small experiment...")
    try:
        report = ddgate.run_experiment(ddgate.ExperimentConfig(gate="ue1", n_states=20))
        print(f"   Mean: {report.mean:.6f} +/- {report.std:.6f}")
    except ddgate.DDGateError as e:
        print(f"   Error: {e}")


if __name__ == "__main__":
    main()
