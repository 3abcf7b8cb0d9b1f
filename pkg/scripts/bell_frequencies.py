#!/usr/bin/env python3
"""Sampling experiment: entangle two qubits, measure many times, and
compare the observed bitstring frequencies with the Born rule across a
sweep of seeds.

Usage: python scripts/bell_frequencies.py [shots] [seeds]
"""

import sys
from collections import Counter

from jaqalc import builtin_gateset, expand, parse, probabilities, run


def main():
    shots = int(sys.argv[1]) if len(sys.argv) > 1 else 10000
    seeds = int(sys.argv[2]) if len(sys.argv) > 2 else 5
    source = (
        "register q[2]\n"
        f"loop {shots} {{ prepare_all; Sxx q[0] q[1]; measure_all }}\n"
    )
    gates = builtin_gateset()
    program, diags = parse(source)
    assert not diags, diags
    circuit = expand(program, gates)

    exact = probabilities(circuit, gates)[0]
    print(f"exact Born probabilities: {exact}")
    print(f"{'seed':>6} {'freq(00)':>10} {'freq(11)':>10} "
          f"{'max |obs-exact|':>16}")
    for seed in range(seeds):
        counts = Counter(run(circuit, gates, seed=seed))
        assert set(counts) <= {"00", "11"}, "impossible outcome sampled"
        f00 = counts["00"] / shots
        f11 = counts["11"] / shots
        worst = max(abs(f00 - exact.get("00", 0.0)),
                    abs(f11 - exact.get("11", 0.0)))
        print(f"{seed:>6} {f00:>10.4f} {f11:>10.4f} {worst:>16.4f}")


if __name__ == "__main__":
    main()
