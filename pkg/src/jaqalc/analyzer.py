"""Semantic analysis: name resolution and hardware-model checks.

Validates a parsed program against a gate set and builds the symbol table
the expander consumes.  Aliases resolve to affine views (start, stride,
length) over the single qubit register, so chained Python-style slices
compose without materializing index lists.

Checks performed, each with its own diagnostic code:

* exactly one register when the program has anything to execute, and its
  size is a positive integer (``no-register``, ``duplicate-register``,
  ``bad-register-size``);
* every name is declared before use, exactly once across all namespaces
  (``undefined-name``, ``duplicate-name``, ``forward-macro-reference``,
  ``recursive-macro``);
* map targets are registers/aliases and every resolved offset is in bounds
  (``bad-index``, ``bad-slice``, ``index-out-of-bounds``, warning
  ``empty-alias``);
* gate names exist, arities match, and each argument fits its slot: integer
  slots take integer constants only, angle slots take either numeric kind,
  qubit slots take qubits (``unknown-gate``, ``arity-mismatch``,
  ``type-mismatch``, ``bad-loop-count``);
* block shape rules: no loop inside a parallel block, no same-kind direct
  nesting (``loop-in-parallel``, ``same-kind-nesting``);
* hardware exclusivity: one gate may not use a qubit twice, directly
  parallel statements may not share qubits, the two-qubit entangler runs
  with no parallel siblings, and all-qubit preparation/measurement never
  sits inside a parallel block (``duplicate-qubit``, ``parallel-conflict``,
  ``ms-in-parallel``, ``global-gate-in-parallel``).

The parallel-sibling check is structural: macro invocations contribute no
qubits here because their bodies are checked precisely after expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .ast import (
    FloatLiteral,
    GateBlock,
    GateStatement,
    IntLiteral,
    LetConstant,
    LoopStatement,
    MacroDef,
    MapAlias,
    NameRef,
    Program,
    QubitRef,
    RegisterDecl,
    Slice,
)
from .diagnostics import error, warning
from .errors import JaqalError
from .gateset import FLOAT, MEASUREMENT, PREPARATION, QUBIT


@dataclass(frozen=True)
class SingleView:
    """An alias naming exactly one register offset."""

    offset: int


@dataclass(frozen=True)
class ArrayView:
    """An affine view over the register: offsets start + step*i."""

    start: int
    step: int
    length: int

    def offset(self, index: int) -> int:
        return self.start + self.step * index

    def offsets(self):
        return [self.offset(i) for i in range(self.length)]


@dataclass(frozen=True)
class RegisterInfo:
    name: str
    size: Optional[int]  # None when the declared size did not resolve
    order: int


@dataclass(frozen=True)
class AliasInfo:
    name: str
    view: Union[SingleView, ArrayView]
    order: int


@dataclass(frozen=True)
class LetInfo:
    name: str
    value: Union[int, float]
    order: int

    @property
    def is_float(self) -> bool:
        return isinstance(self.value, float)


@dataclass(frozen=True)
class MacroInfo:
    name: str
    params: tuple
    param_kinds: dict  # param name -> QUBIT | FLOAT | None (unused)
    body: GateBlock
    order: int
    uses_entangler: bool
    uses_global_gate: bool


@dataclass
class SymbolTable:
    registers: dict = field(default_factory=dict)
    aliases: dict = field(default_factory=dict)
    lets: dict = field(default_factory=dict)
    macros: dict = field(default_factory=dict)

    @property
    def register(self) -> Optional[RegisterInfo]:
        if not self.registers:
            return None
        return next(iter(self.registers.values()))

    def declared(self, name: str) -> bool:
        return (name in self.registers or name in self.aliases
                or name in self.lets or name in self.macros)

    def array_view(self, name: str) -> Optional[ArrayView]:
        """The array view behind a name, or None if it is not an array."""
        if name in self.registers:
            size = self.registers[name].size
            if size is None:
                return None
            return ArrayView(0, 1, size)
        info = self.aliases.get(name)
        if info is not None and isinstance(info.view, ArrayView):
            return info.view
        return None


@dataclass
class _Context:
    in_parallel: bool = False
    params: Optional[dict] = None  # param name -> inferred kind, mutated
    current_macro: Optional[str] = None
    body_index: int = 0


def _contains_gate(stmt) -> bool:
    if isinstance(stmt, GateStatement):
        return True
    if isinstance(stmt, GateBlock):
        return any(_contains_gate(c) for c in stmt.statements)
    if isinstance(stmt, LoopStatement):
        return _contains_gate(stmt.body)
    return False


class _Analyzer:
    def __init__(self, program: Program, gates: dict):
        self.program = program
        self.gates = gates
        self.diags: list = []
        self.table = SymbolTable()
        self.order = 0
        # declaration index of every macro, for forward-reference messages
        self.macro_index = {}
        for idx, stmt in enumerate(program.body):
            if isinstance(stmt, MacroDef) and stmt.name not in self.macro_index:
                self.macro_index[stmt.name] = idx

    def diag(self, stmt, code, message):
        self.diags.append(error(stmt.line, stmt.column, code, message))

    def warn(self, stmt, code, message):
        self.diags.append(warning(stmt.line, stmt.column, code, message))

    def next_order(self) -> int:
        self.order += 1
        return self.order

    # -- headers -------------------------------------------------------------

    def check_collision(self, stmt, name) -> bool:
        if self.table.declared(name):
            self.diag(stmt, "duplicate-name",
                      f"the name {name!r} is already defined")
            return True
        return False

    def do_register(self, stmt: RegisterDecl):
        if self.table.registers:
            other = self.table.register.name
            self.diag(stmt, "duplicate-register",
                      f"a register {other!r} is already declared; programs "
                      "use a single register")
            return
        if self.check_collision(stmt, stmt.name):
            return
        size = self.resolve_int(stmt.size, stmt, "register size")
        if size is not None and size <= 0:
            self.diag(stmt, "bad-register-size",
                      f"register size must be positive, got {size}")
            size = None
        self.table.registers[stmt.name] = RegisterInfo(
            stmt.name, size, self.next_order())

    def do_map(self, stmt: MapAlias):
        if self.check_collision(stmt, stmt.name):
            return
        view = self.target_view(stmt)
        if view is None:
            return
        view = self.apply_selector(stmt, view)
        if view is None:
            return
        if isinstance(view, ArrayView) and view.length == 0:
            self.warn(stmt, "empty-alias",
                      f"alias {stmt.name!r} selects no qubits")
        self.table.aliases[stmt.name] = AliasInfo(
            stmt.name, view, self.next_order())

    def target_view(self, stmt: MapAlias):
        name = stmt.target
        if name in self.table.registers:
            size = self.table.registers[name].size
            if size is None:
                return None  # already diagnosed at the register
            return ArrayView(0, 1, size)
        if name in self.table.aliases:
            return self.table.aliases[name].view
        if name in self.table.lets:
            self.diag(stmt, "type-mismatch",
                      f"map target {name!r} is a constant, not a register "
                      "or alias")
            return None
        self.diag(stmt, "undefined-name",
                  f"map target {name!r} is not declared")
        return None

    def apply_selector(self, stmt: MapAlias, view):
        selector = stmt.selector
        if selector is None:
            return view
        if not isinstance(view, ArrayView):
            self.diag(stmt, "bad-index",
                      f"{stmt.target!r} is a single qubit and cannot be "
                      "indexed or sliced")
            return None
        if isinstance(selector, Slice):
            parts = []
            for component in (selector.start, selector.stop, selector.step):
                if component is None:
                    parts.append(None)
                    continue
                value = self.resolve_int(component, stmt, "slice component")
                if value is None:
                    return None
                parts.append(value)
            if parts[2] == 0:
                self.diag(stmt, "bad-slice", "slice step cannot be zero")
                return None
            start, stop, step = slice(*parts).indices(view.length)
            length = len(range(start, stop, step))
            return ArrayView(view.offset(start), view.step * step, length)
        index = self.resolve_int(selector, stmt, "map index")
        if index is None:
            return None
        if index < 0:
            index += view.length
        if not 0 <= index < view.length:
            self.diag(stmt, "index-out-of-bounds",
                      f"index {self.expr_text(selector)} is out of range for "
                      f"{stmt.target!r} of length {view.length}")
            return None
        return SingleView(view.offset(index))

    def do_let(self, stmt: LetConstant):
        if self.check_collision(stmt, stmt.name):
            return
        self.table.lets[stmt.name] = LetInfo(
            stmt.name, stmt.value, self.next_order())

    # -- expressions ----------------------------------------------------------

    @staticmethod
    def expr_text(expr) -> str:
        if isinstance(expr, IntLiteral):
            return str(expr.value)
        if isinstance(expr, FloatLiteral):
            return repr(expr.value)
        return expr.name

    def resolve_int(self, expr, stmt, what: str, params=None) -> Optional[int]:
        """Resolve an integer expression; integer slots reject float
        constants rather than truncating them."""
        if isinstance(expr, IntLiteral):
            return expr.value
        name = expr.name
        if params is not None and name in params:
            self.diag(stmt, "type-mismatch",
                      f"macro parameter {name!r} cannot be used as {what}")
            return None
        info = self.table.lets.get(name)
        if info is not None:
            if info.is_float:
                self.diag(stmt, "type-mismatch",
                          f"{what} requires an integer, but {name!r} is a "
                          "float constant")
                return None
            return info.value
        if self.table.declared(name):
            self.diag(stmt, "type-mismatch",
                      f"{name!r} is not a numeric constant")
            return None
        self.diag(stmt, "undefined-name", f"{name!r} is not declared")
        return None

    # -- body -----------------------------------------------------------------

    def run(self):
        for stmt in self.program.headers:
            if isinstance(stmt, RegisterDecl):
                self.do_register(stmt)
            elif isinstance(stmt, MapAlias):
                self.do_map(stmt)
            else:
                self.do_let(stmt)
        first_gate_stmt = None
        for idx, stmt in enumerate(self.program.body):
            if isinstance(stmt, MacroDef):
                self.do_macro(stmt, idx)
            else:
                if first_gate_stmt is None and _contains_gate(stmt):
                    first_gate_stmt = stmt
                self.check_statement(stmt, _Context(body_index=idx))
        if first_gate_stmt is not None and not self.table.registers:
            self.diag(first_gate_stmt, "no-register",
                      "the program executes gates but declares no register")
        return self.table, self.diags

    def do_macro(self, stmt: MacroDef, idx: int):
        collision = self.table.declared(stmt.name) or stmt.name in self.gates
        if collision:
            self.diag(stmt, "duplicate-name",
                      f"the name {stmt.name!r} is already defined")
        param_kinds: dict = {}
        for p in stmt.params:
            if p in param_kinds or self.table.declared(p):
                self.diag(stmt, "duplicate-name",
                          f"macro parameter {p!r} collides with another name")
            param_kinds.setdefault(p, None)
        ctx = _Context(in_parallel=stmt.body.parallel, params=param_kinds,
                       current_macro=stmt.name, body_index=idx)
        self.check_block_children(stmt.body, ctx)
        if not collision:
            self.table.macros[stmt.name] = MacroInfo(
                stmt.name, stmt.params, param_kinds, stmt.body,
                self.next_order(),
                uses_entangler=self.block_uses(stmt.body, "entangler"),
                uses_global_gate=self.block_uses(stmt.body, "global"))

    def check_statement(self, stmt, ctx: _Context):
        if isinstance(stmt, GateStatement):
            self.check_gate(stmt, ctx)
        elif isinstance(stmt, GateBlock):
            self.check_block_children(stmt, ctx)
        elif isinstance(stmt, LoopStatement):
            if ctx.in_parallel:
                self.diag(stmt, "loop-in-parallel",
                          "loop statements are not allowed inside parallel "
                          "blocks")
            count = self.resolve_int(stmt.count, stmt, "loop count",
                                     params=ctx.params)
            if count is not None and count < 0:
                self.diag(stmt, "bad-loop-count",
                          f"loop count must be non-negative, got {count}")
            if stmt.body.parallel:
                self.diag(stmt, "expected-block",
                          "a loop body must be a sequential block")
            self.check_statement(stmt.body, ctx)
        elif isinstance(stmt, MacroDef):
            self.diag(stmt, "macro-in-block",
                      "macro definitions are not allowed inside gate blocks")
        else:
            raise JaqalError(f"unexpected statement {type(stmt).__name__}")

    def check_block_children(self, block: GateBlock, ctx: _Context):
        inner = _Context(in_parallel=ctx.in_parallel or block.parallel,
                         params=ctx.params,
                         current_macro=ctx.current_macro,
                         body_index=ctx.body_index)
        for child in block.statements:
            if isinstance(child, GateBlock) and child.parallel == block.parallel:
                kind = "parallel" if block.parallel else "sequential"
                self.diag(child, "same-kind-nesting",
                          f"a {kind} block cannot be nested directly inside "
                          f"another {kind} block")
            self.check_statement(child, inner)
        if block.parallel:
            self.check_parallel_rules(block, inner)

    def check_parallel_rules(self, block: GateBlock, ctx: _Context):
        children = block.statements
        used: dict = {}  # offset -> first child index that used it
        for idx, child in enumerate(children):
            for offset in sorted(self.qubit_set(child, ctx)):
                if offset in used and used[offset] != idx:
                    self.diag(child, "parallel-conflict",
                              f"qubit offset {offset} is used by two "
                              "statements in the same parallel block")
                else:
                    used.setdefault(offset, idx)
        if len(children) > 1:
            for child in children:
                if self.statement_uses(child, "entangler", ctx):
                    self.diag(child, "ms-in-parallel",
                              "the two-qubit entangling gate runs in "
                              "parallel with no other gates")
                    break

    def check_gate(self, stmt: GateStatement, ctx: _Context):
        name = stmt.name
        definition = self.gates.get(name)
        if definition is not None:
            if definition.kind in (PREPARATION, MEASUREMENT) and ctx.in_parallel:
                self.diag(stmt, "global-gate-in-parallel",
                          f"{name} acts on every qubit and cannot appear "
                          "inside a parallel block")
            self.check_native_args(stmt, definition, ctx)
            return
        macro = self.table.macros.get(name)
        if macro is not None:
            if ctx.in_parallel and macro.uses_global_gate:
                self.diag(stmt, "global-gate-in-parallel",
                          f"macro {name!r} prepares or measures all qubits "
                          "and cannot appear inside a parallel block")
            self.check_macro_args(stmt, macro, ctx)
            return
        if name == ctx.current_macro:
            self.diag(stmt, "recursive-macro",
                      f"macro {name!r} cannot invoke itself; a macro is "
                      "complete only at the end of its block")
        elif name in self.macro_index:
            self.diag(stmt, "forward-macro-reference",
                      f"macro {name!r} is defined later in the file; macros "
                      "may only reference macros defined earlier")
        else:
            self.diag(stmt, "unknown-gate",
                      f"{name!r} is not a known gate or macro")

    def check_native_args(self, stmt, definition, ctx: _Context):
        kinds = definition.param_kinds
        if len(stmt.args) != len(kinds):
            self.diag(stmt, "arity-mismatch",
                      f"{definition.name} takes {len(kinds)} argument(s), "
                      f"got {len(stmt.args)}")
            return
        offsets = []
        for arg, kind in zip(stmt.args, kinds):
            if kind == QUBIT:
                offsets.append(self.check_qubit_arg(stmt, arg, ctx))
            else:
                self.check_float_arg(stmt, arg, ctx)
        resolved = [o for o in offsets if isinstance(o, int)]
        if len(set(resolved)) != len(resolved):
            self.diag(stmt, "duplicate-qubit",
                      f"{definition.name} uses the same qubit twice")

    def check_macro_args(self, stmt, macro: MacroInfo, ctx: _Context):
        if len(stmt.args) != len(macro.params):
            self.diag(stmt, "arity-mismatch",
                      f"macro {macro.name} takes {len(macro.params)} "
                      f"argument(s), got {len(stmt.args)}")
            return
        for arg, param in zip(stmt.args, macro.params):
            kind = macro.param_kinds.get(param)
            if kind == QUBIT:
                self.check_qubit_arg(stmt, arg, ctx)
            elif kind == FLOAT:
                self.check_float_arg(stmt, arg, ctx)
            else:
                # the parameter is unused inside the macro: any argument
                # that resolves cleanly is acceptable
                if isinstance(arg, QubitRef):
                    self.check_qubit_arg(stmt, arg, ctx)
                elif isinstance(arg, NameRef):
                    name = arg.name
                    known = (self.table.declared(name)
                             or (ctx.params is not None and name in ctx.params))
                    if not known:
                        self.diag(stmt, "undefined-name",
                                  f"{name!r} is not declared")

    def check_qubit_arg(self, stmt, arg, ctx: _Context):
        """Validate a qubit-slot argument; returns its register offset when
        statically resolvable, or None."""
        params = ctx.params or {}
        if isinstance(arg, (IntLiteral, FloatLiteral)):
            self.diag(stmt, "type-mismatch",
                      f"expected a qubit, got the number "
                      f"{self.expr_text(arg)}")
            return None
        if isinstance(arg, NameRef):
            name = arg.name
            if name in params:
                return self.infer_param(stmt, name, QUBIT, params)
            info = self.table.aliases.get(name)
            if info is not None:
                if isinstance(info.view, SingleView):
                    return info.view.offset
                self.diag(stmt, "bad-index",
                          f"{name!r} is an array and needs an index")
                return None
            if name in self.table.registers:
                self.diag(stmt, "bad-index",
                          f"{name!r} is an array and needs an index")
                return None
            if name in self.table.lets:
                self.diag(stmt, "type-mismatch",
                          f"{name!r} is a constant and cannot be a qubit "
                          "argument")
                return None
            self.diag(stmt, "undefined-name", f"{name!r} is not declared")
            return None
        # QubitRef with an index
        base = arg.base
        if base in params:
            self.diag(stmt, "bad-index",
                      f"macro parameter {base!r} is a single qubit and "
                      "takes no index")
            return None
        view = self.table.array_view(base)
        if view is None:
            if base in self.table.aliases:
                self.diag(stmt, "bad-index",
                          f"{base!r} is a single qubit and takes no index")
            elif base in self.table.registers:
                pass  # register size failed to resolve; already diagnosed
            elif self.table.declared(base):
                self.diag(stmt, "type-mismatch",
                          f"{base!r} is not a qubit array")
            else:
                self.diag(stmt, "undefined-name", f"{base!r} is not declared")
            return None
        index = self.resolve_int(arg.index, stmt, "qubit index", params=params)
        if index is None:
            return None
        if not 0 <= index < view.length:
            self.diag(stmt, "index-out-of-bounds",
                      f"index {index} is out of range for {base!r} of "
                      f"length {view.length}")
            return None
        return view.offset(index)

    def check_float_arg(self, stmt, arg, ctx: _Context):
        params = ctx.params or {}
        if isinstance(arg, (IntLiteral, FloatLiteral)):
            return  # integer literals promote in angle slots
        if isinstance(arg, QubitRef):
            self.diag(stmt, "type-mismatch",
                      f"expected a number, got qubit "
                      f"{arg.base}[{self.expr_text(arg.index)}]")
            return
        name = arg.name
        if name in params:
            self.infer_param(stmt, name, FLOAT, params)
            return
        if name in self.table.lets:
            return  # int and float constants are both fine in angle slots
        if self.table.declared(name):
            self.diag(stmt, "type-mismatch",
                      f"{name!r} is not a numeric constant")
            return
        self.diag(stmt, "undefined-name", f"{name!r} is not declared")

    def infer_param(self, stmt, name, kind, params):
        current = params.get(name)
        if current is None:
            params[name] = kind
        elif current != kind:
            role = "a qubit" if kind == QUBIT else "a number"
            self.diag(stmt, "type-mismatch",
                      f"macro parameter {name!r} is used both as {role} and "
                      "as something else")
            return None
        return None

    # -- structural helpers ----------------------------------------------------

    def qubit_set(self, stmt, ctx: _Context) -> set:
        """Register offsets a statement is known to touch.  All-qubit gates
        cover the whole register; macro invocations contribute nothing here
        (they are re-checked precisely after expansion)."""
        if isinstance(stmt, GateStatement):
            definition = self.gates.get(stmt.name)
            if definition is None:
                return set()
            if definition.kind in (PREPARATION, MEASUREMENT):
                reg = self.table.register
                if reg is not None and reg.size is not None:
                    return set(range(reg.size))
                return set()
            out = set()
            if len(stmt.args) == len(definition.param_kinds):
                for arg, kind in zip(stmt.args, definition.param_kinds):
                    if kind == QUBIT:
                        offset = self.peek_offset(arg, ctx)
                        if offset is not None:
                            out.add(offset)
            return out
        if isinstance(stmt, GateBlock):
            out = set()
            for child in stmt.statements:
                out |= self.qubit_set(child, ctx)
            return out
        if isinstance(stmt, LoopStatement):
            return self.qubit_set(stmt.body, ctx)
        return set()

    def peek_offset(self, arg, ctx: _Context) -> Optional[int]:
        """Silently resolve a qubit argument to an offset, if possible."""
        params = ctx.params or {}
        if isinstance(arg, NameRef):
            info = self.table.aliases.get(arg.name)
            if info is not None and isinstance(info.view, SingleView):
                return info.view.offset
            return None
        if not isinstance(arg, QubitRef) or arg.base in params:
            return None
        view = self.table.array_view(arg.base)
        if view is None:
            return None
        if isinstance(arg.index, IntLiteral):
            index = arg.index.value
        else:
            info = self.table.lets.get(arg.index.name) if arg.index else None
            if info is None or info.is_float:
                return None
            index = info.value
        if 0 <= index < view.length:
            return view.offset(index)
        return None

    def statement_uses(self, stmt, what: str, ctx: _Context) -> bool:
        if isinstance(stmt, GateStatement):
            definition = self.gates.get(stmt.name)
            if definition is not None:
                if what == "entangler":
                    return (definition.rotation is not None
                            and definition.rotation.family == "ms")
                return definition.kind in (PREPARATION, MEASUREMENT)
            macro = self.table.macros.get(stmt.name)
            if macro is not None:
                return (macro.uses_entangler if what == "entangler"
                        else macro.uses_global_gate)
            return False
        if isinstance(stmt, GateBlock):
            return any(self.statement_uses(c, what, ctx)
                       for c in stmt.statements)
        if isinstance(stmt, LoopStatement):
            return self.statement_uses(stmt.body, what, ctx)
        return False

    def block_uses(self, block: GateBlock, what: str) -> bool:
        return self.statement_uses(block, what, _Context())


def analyze(program: Program, gates: dict):
    """Validate a program against a gate set.

    Returns ``(SymbolTable, diagnostics)``; analysis is total and never
    raises on bad programs.  The symbol table is only meaningful when the
    diagnostics contain no errors.
    """
    return _Analyzer(program, gates).run()


def resolve_qubit(ref, table: SymbolTable) -> int:
    """Resolve a qubit reference to an absolute register offset.

    ``ref`` is a QubitRef (indexed array access) or NameRef (single-qubit
    alias).  Aliases of aliases resolve transitively because every alias is
    already stored as a view over the register.  Raises JaqalError when the
    name is unknown, the index is missing/extra/out of range, or the name
    is not a qubit.
    """
    if isinstance(ref, NameRef):
        ref = QubitRef(ref.name, None)
    info = table.aliases.get(ref.base)
    if info is not None and isinstance(info.view, SingleView):
        if ref.index is not None:
            raise JaqalError(f"{ref.base!r} is a single qubit and takes no "
                             "index", code="bad-index")
        return info.view.offset
    view = table.array_view(ref.base)
    if view is None:
        if table.declared(ref.base):
            raise JaqalError(f"{ref.base!r} is not a qubit",
                             code="type-mismatch")
        raise JaqalError(f"{ref.base!r} is not declared",
                         code="undefined-name")
    if ref.index is None:
        raise JaqalError(f"{ref.base!r} is an array and needs an index",
                         code="bad-index")
    if isinstance(ref.index, IntLiteral):
        index = ref.index.value
    else:
        info = table.lets.get(ref.index.name)
        if info is None:
            raise JaqalError(f"{ref.index.name!r} is not declared",
                             code="undefined-name")
        if info.is_float:
            raise JaqalError("qubit index requires an integer constant",
                             code="type-mismatch")
        index = info.value
    if not 0 <= index < view.length:
        raise JaqalError(
            f"index {index} is out of range for {ref.base!r} of length "
            f"{view.length}", code="index-out-of-bounds")
    return view.offset(index)
