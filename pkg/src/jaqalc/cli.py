"""Command-line front end: check, expand, schedule, and run subcommands.

Exit codes are stable: 0 success, 1 for any language/semantic/runtime
problem in the program, 2 for environment problems (unreadable input,
unwritable output).  Diagnostics go to standard error as
``file:line:col: code: message``; data goes to files or standard output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analyzer import analyze
from .diagnostics import has_errors
from .emitter import emit
from .errors import JaqalError, ManifestError
from .expander import count_primitive_gates, dump_flat, expand
from .gateset import apply_durations, builtin_gateset, load_duration_manifest
from .parser import parse
from .scheduler import dump_timeline, schedule
from .simulator import probabilities, run


class _Exit(Exception):
    def __init__(self, status: int):
        self.status = status


def _fail(status: int, message: str):
    print(message, file=sys.stderr)
    raise _Exit(status)


def _read_text(path: str) -> str:
    try:
        # utf-8-sig tolerates a leading byte-order mark from Windows editors
        return Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        _fail(2, f"{path}: cannot read: {exc.strerror or exc}")
    except UnicodeDecodeError:
        _fail(1, f"{path}: source is not valid UTF-8 text")


def _write(path, data, as_bytes: bool = False):
    if path is None:
        sys.stdout.write(data.decode("ascii") if as_bytes else data)
        return
    try:
        if as_bytes:
            Path(path).write_bytes(data)
        else:
            Path(path).write_text(data, encoding="ascii")
    except OSError as exc:
        _fail(2, f"{path}: cannot write: {exc.strerror or exc}")


def _print_diagnostics(path: str, diagnostics):
    for diagnostic in diagnostics:
        print(f"{path}:{diagnostic}", file=sys.stderr)


def _checked_program(path: str, gates: dict):
    """Parse and analyze, printing diagnostics; exits 1 on any error."""
    source = _read_text(path)
    program, diags = parse(source)
    if has_errors(diags):
        _print_diagnostics(path, diags)
        raise _Exit(1)
    symbols, sem_diags = analyze(program, gates)
    _print_diagnostics(path, diags + sem_diags)
    if has_errors(sem_diags):
        raise _Exit(1)
    return program, symbols


def _gates_for(args) -> dict:
    gates = builtin_gateset()
    manifest = getattr(args, "durations", None)
    if manifest is None:
        return gates
    text = _read_text(manifest)
    try:
        return apply_durations(gates, load_duration_manifest(text, gates))
    except ManifestError as exc:
        _fail(1, f"{manifest}: {exc.code}: {exc}")


def _expand_checked(path: str, program, symbols, gates: dict):
    try:
        return expand(program, gates, symbols)
    except JaqalError as exc:
        _fail(1, f"{path}: {exc.code}: {exc}")


def cmd_check(args) -> int:
    _checked_program(args.file, _gates_for(args))
    return 0


def cmd_expand(args) -> int:
    gates = _gates_for(args)
    program, symbols = _checked_program(args.file, gates)
    circuit = _expand_checked(args.file, program, symbols, gates)
    _write(args.output, dump_flat(circuit))
    return 0


def cmd_schedule(args) -> int:
    gates = _gates_for(args)
    program, symbols = _checked_program(args.file, gates)
    circuit = _expand_checked(args.file, program, symbols, gates)
    try:
        timeline = schedule(circuit, gates)
    except JaqalError as exc:
        _fail(1, f"{args.file}: {exc.code}: {exc}")
    _write(args.output, dump_timeline(timeline)
           + f"total {timeline.total_duration:g}\n")
    return 0


def cmd_run(args) -> int:
    gates = _gates_for(args)
    program, symbols = _checked_program(args.file, gates)
    if not program.body:
        print(f"{args.file}: warning: the program has no body; the output "
              "will be empty", file=sys.stderr)
    circuit = _expand_checked(args.file, program, symbols, gates)
    try:
        schedule(circuit, gates)  # surface timing conflicts before running
        if args.probabilities:
            lines = []
            for distribution in probabilities(circuit, gates,
                                              quantize=args.quantize):
                pairs = sorted(distribution.items())
                lines.append(" ".join(f"{bits} {p!r}" for bits, p in pairs))
            data = "".join(line + "\n" for line in lines)
            _write(_out_path(args), data)
        else:
            record = run(circuit, gates, seed=args.seed,
                         quantize=args.quantize)
            _write(_out_path(args), emit(record), as_bytes=True)
    except JaqalError as exc:
        _fail(1, f"{args.file}: {exc.code}: {exc}")
    return 0


def _out_path(args):
    if args.output is not None:
        return args.output
    return str(Path(args.file).with_suffix(".out"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jaqalc",
        description="Check, expand, schedule, and simulate Jaqal programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="Jaqal source file (.jaqal)")
        p.set_defaults(handler=handler)
        return p

    add("check", cmd_check,
        "parse and semantically validate a program")

    p = add("expand", cmd_expand,
            "print the program as flat primitive gates")
    p.add_argument("-o", "--output", help="write the dump here instead of "
                   "standard output")

    p = add("schedule", cmd_schedule,
            "print the gate timeline with inserted idles")
    p.add_argument("-o", "--output")
    p.add_argument("-d", "--durations", metavar="MANIFEST",
                   help="gate-duration manifest file")

    p = add("run", cmd_run, "simulate and write the measurement output file")
    p.add_argument("-o", "--output",
                   help="output path (default: source with .out extension)")
    p.add_argument("-s", "--seed", type=int, default=0,
                   help="measurement sampling seed (default 0)")
    p.add_argument("-q", "--quantize", action="store_true",
                   help="snap angles to the 40-bit hardware grid")
    p.add_argument("-p", "--probabilities", action="store_true",
                   help="write exact outcome probabilities instead of "
                   "sampled bitstrings")
    p.add_argument("-d", "--durations", metavar="MANIFEST")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _Exit as exc:
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
