#!/usr/bin/env python3
"""Run every corpus program through the full pipeline and print a summary
table: verdict, primitive gate count, and total scheduled duration.

Usage: python scripts/corpus_report.py
"""

from jaqalc import analyze, builtin_gateset, expand, parse, total_duration
from jaqalc.corpus import corpus_manifest
from jaqalc.diagnostics import has_errors
from jaqalc.errors import JaqalError
from jaqalc.expander import count_primitive_gates


def main():
    gates = builtin_gateset()
    print(f"{'case':<24} {'expected':>8} {'verdict':>8} "
          f"{'gates':>6} {'duration':>9}")
    for case in corpus_manifest():
        expected = "accept" if case.expectation.accept else "reject"
        program, diags = parse(case.source)
        verdict, gate_count, duration = "reject", "-", "-"
        if not has_errors(diags):
            symbols, sem = analyze(program, gates)
            if not has_errors(sem):
                try:
                    circuit = expand(program, gates, symbols)
                    gate_count = count_primitive_gates(circuit)
                    duration = f"{total_duration(circuit, gates):g}"
                    verdict = "accept"
                except JaqalError:
                    pass
        marker = "" if verdict == expected else "   <-- MISMATCH"
        print(f"{case.name:<24} {expected:>8} {verdict:>8} "
              f"{gate_count!s:>6} {duration:>9}{marker}")


if __name__ == "__main__":
    main()
