"""Lowering an analyzed program to a flat circuit.

Expansion substitutes let constants, resolves aliases to absolute register
offsets, inlines macro bodies with their arguments bound (arguments are
resolved in the caller's environment first, so substitution cannot capture
names), and unrolls loops into the stated number of copies.  The result
contains only primitive gate applications inside alternating
sequential/parallel block structure: a block expanding inside a block of
the same kind is spliced inline, and a one-iteration loop leaves no wrapper
behind.

Substitution can create qubit conflicts that are invisible in the source
(for example a macro invoked with the same qubit for two parameters), so
the exclusivity checks run again on the flat structure and raise
ConflictError on violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analyzer import SymbolTable, analyze, resolve_qubit
from .ast import (
    FloatLiteral,
    GateBlock,
    GateStatement,
    IntLiteral,
    LoopStatement,
    MacroDef,
    NameRef,
    Program,
    QubitRef,
)
from .diagnostics import has_errors
from .errors import ConflictError, JaqalError
from .gateset import FLOAT, GateDefinition, MEASUREMENT, PREPARATION, QUBIT


@dataclass(frozen=True)
class PrimitiveGate:
    definition: GateDefinition
    qubits: tuple = ()  # absolute register offsets
    float_args: tuple = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    @property
    def name(self) -> str:
        return self.definition.name


@dataclass(frozen=True)
class FlatBlock:
    parallel: bool
    items: tuple = ()  # PrimitiveGate | FlatBlock, same-kind never nests


@dataclass(frozen=True)
class FlatCircuit:
    n_qubits: int
    root: FlatBlock  # always sequential


class _Binding:
    """Macro arguments bound for one invocation: name -> offset or number."""

    def __init__(self, qubits=None, numbers=None):
        self.qubits = qubits or {}
        self.numbers = numbers or {}


_EMPTY = _Binding()


class _Expander:
    def __init__(self, table: SymbolTable, gates: dict):
        self.table = table
        self.gates = gates

    def expand_body(self, statements, parallel: bool, env: _Binding) -> list:
        items: list = []
        for stmt in statements:
            if isinstance(stmt, MacroDef):
                continue  # declarations produce no gates
            if isinstance(stmt, GateStatement):
                items.extend(self.expand_gate(stmt, parallel, env))
            elif isinstance(stmt, GateBlock):
                items.extend(self.expand_block(stmt, parallel, env))
            elif isinstance(stmt, LoopStatement):
                count = self.resolve_number(stmt.count, env, want_int=True)
                body = self.expand_body(stmt.body.statements, False, env)
                for _ in range(count):
                    items.extend(body)
            else:
                raise JaqalError(
                    f"cannot expand {type(stmt).__name__}")
        return items

    def expand_block(self, block: GateBlock, parallel: bool,
                     env: _Binding) -> list:
        items = self.expand_body(block.statements, block.parallel, env)
        if block.parallel == parallel or not items:
            return items  # same-kind splice; empty blocks vanish
        return [FlatBlock(block.parallel, tuple(items))]

    def expand_gate(self, stmt: GateStatement, parallel: bool,
                    env: _Binding) -> list:
        macro = self.table.macros.get(stmt.name)
        if macro is None:
            return [self.primitive(stmt, env)]
        binding = _Binding()
        for param, arg in zip(macro.params, stmt.args):
            kind = macro.param_kinds.get(param)
            if kind == FLOAT:
                binding.numbers[param] = self.resolve_number(arg, env)
            elif kind == QUBIT:
                binding.qubits[param] = self.resolve_offset(arg, env)
            else:
                # unused parameter: bind whatever the argument is
                try:
                    binding.qubits[param] = self.resolve_offset(arg, env)
                except JaqalError:
                    binding.numbers[param] = self.resolve_number(arg, env)
        return self.expand_block(macro.body, parallel, binding)

    def primitive(self, stmt: GateStatement, env: _Binding) -> PrimitiveGate:
        definition = self.gates[stmt.name]
        qubits: list = []
        floats: list = []
        for arg, kind in zip(stmt.args, definition.param_kinds):
            if kind == QUBIT:
                qubits.append(self.resolve_offset(arg, env))
            else:
                floats.append(self.resolve_number(arg, env))
        return PrimitiveGate(definition, tuple(qubits), tuple(floats),
                             line=stmt.line, column=stmt.column)

    def resolve_offset(self, arg, env: _Binding) -> int:
        if isinstance(arg, NameRef) and arg.name in env.qubits:
            return env.qubits[arg.name]
        if isinstance(arg, QubitRef) or isinstance(arg, NameRef):
            return resolve_qubit(arg, self.table)
        raise JaqalError(f"{arg!r} is not a qubit", code="type-mismatch")

    def resolve_number(self, arg, env: _Binding, want_int: bool = False):
        if isinstance(arg, IntLiteral):
            return arg.value
        if isinstance(arg, FloatLiteral):
            value = arg.value
        elif isinstance(arg, NameRef):
            if arg.name in env.numbers:
                value = env.numbers[arg.name]
            else:
                info = self.table.lets.get(arg.name)
                if info is None:
                    raise JaqalError(f"{arg.name!r} is not a constant",
                                     code="undefined-name")
                value = info.value
        else:
            raise JaqalError(f"{arg!r} is not a number", code="type-mismatch")
        if want_int and not isinstance(value, int):
            raise JaqalError(f"expected an integer, got {value!r}",
                             code="type-mismatch")
        return value


def expand(program: Program, gates: dict,
           symbols: SymbolTable = None) -> FlatCircuit:
    """Lower an analyzed program to a FlatCircuit.

    The program must have passed analysis with no errors; pass the symbol
    table in to avoid re-analyzing.  Raises ConflictError when substitution
    produced a qubit-exclusivity violation.
    """
    if symbols is None:
        symbols, diags = analyze(program, gates)
        if has_errors(diags):
            raise JaqalError("program has analysis errors; expansion "
                             "requires a clean analysis")
    register = symbols.register
    n_qubits = register.size if register is not None else 0
    expander = _Expander(symbols, gates)
    items = expander.expand_body(program.body, False, _EMPTY)
    circuit = FlatCircuit(n_qubits, FlatBlock(False, tuple(items)))
    check_flat_conflicts(circuit)
    return circuit


def count_primitive_gates(circuit: FlatCircuit) -> int:
    def count(item) -> int:
        if isinstance(item, PrimitiveGate):
            return 1
        return sum(count(child) for child in item.items)

    return count(circuit.root)


def iter_gates(circuit: FlatCircuit):
    """All primitive gates in execution order (parallel siblings in listed
    order; they commute because they touch disjoint qubits)."""

    def walk(item):
        if isinstance(item, PrimitiveGate):
            yield item
        else:
            for child in item.items:
                yield from walk(child)

    yield from walk(circuit.root)


def gate_qubits(gate: PrimitiveGate, n_qubits: int) -> set:
    """Offsets a primitive occupies; all-qubit operations cover everything."""
    if gate.definition.kind in (PREPARATION, MEASUREMENT):
        return set(range(n_qubits))
    return set(gate.qubits)


def _item_qubits(item, n_qubits: int) -> set:
    if isinstance(item, PrimitiveGate):
        return gate_qubits(item, n_qubits)
    out: set = set()
    for child in item.items:
        out |= _item_qubits(child, n_qubits)
    return out


def _contains_global(item) -> bool:
    if isinstance(item, PrimitiveGate):
        return item.definition.kind in (PREPARATION, MEASUREMENT)
    return any(_contains_global(c) for c in item.items)


def _contains_entangler(item) -> bool:
    if isinstance(item, PrimitiveGate):
        rot = item.definition.rotation
        return rot is not None and rot.family == "ms"
    return any(_contains_entangler(c) for c in item.items)


def check_flat_conflicts(circuit: FlatCircuit):
    """Re-run the qubit-exclusivity rules on the expanded structure."""

    def walk(item):
        if isinstance(item, PrimitiveGate):
            if len(set(item.qubits)) != len(item.qubits):
                raise ConflictError(
                    f"{item.name} uses the same qubit twice",
                    code="duplicate-qubit")
            return
        if item.parallel:
            seen: dict = {}
            for idx, child in enumerate(item.items):
                if _contains_global(child):
                    raise ConflictError(
                        "an all-qubit preparation or measurement cannot "
                        "appear inside a parallel block",
                        code="global-gate-in-parallel")
                for offset in sorted(_item_qubits(child, circuit.n_qubits)):
                    if offset in seen and seen[offset] != idx:
                        raise ConflictError(
                            f"qubit offset {offset} is used by two "
                            "statements in the same parallel block")
                    seen.setdefault(offset, idx)
            if len(item.items) > 1 and any(_contains_entangler(c)
                                           for c in item.items):
                raise ConflictError(
                    "the two-qubit entangling gate runs in parallel with "
                    "no other gates", code="ms-in-parallel")
        for child in item.items:
            walk(child)

    walk(circuit.root)


def dump_flat(circuit: FlatCircuit) -> str:
    """Readable text form: one primitive per line as ``name offsets...
    floats...``, nested blocks bracketed by indented markers.  Top-level
    items print at indent zero (the implicit sequential root shows no
    brackets)."""
    lines: list = []

    def emit(item, indent: int):
        pad = "    " * indent
        if isinstance(item, PrimitiveGate):
            parts = [item.name]
            parts += [str(q) for q in item.qubits]
            parts += [repr(f) for f in item.float_args]
            lines.append(pad + " ".join(parts))
        else:
            open_ch, close_ch = ("<", ">") if item.parallel else ("{", "}")
            lines.append(pad + open_ch)
            for child in item.items:
                emit(child, indent + 1)
            lines.append(pad + close_ch)

    for item in circuit.root.items:
        emit(item, 0)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
