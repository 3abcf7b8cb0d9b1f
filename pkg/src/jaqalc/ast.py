"""Syntax tree for Jaqal programs.

All nodes are immutable dataclasses, so trees can be shared freely across
threads and compared structurally with ``==``.  Source positions are carried
on statement nodes for diagnostics only and are excluded from comparison,
which is what makes the pretty-print round trip (parse, print, reparse,
compare) a meaningful equality check.

A program has a header section (register, map, let) followed by a body
section (gates, blocks, loops, macro definitions).  Gate arguments and the
integer expressions inside declarations are one of a small closed set of
node types; there is deliberately no arithmetic expression grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

KEYWORDS = frozenset({"register", "map", "let", "macro", "loop"})

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_valid_identifier(text: str) -> bool:
    """True for a legal name: ASCII letters/digits/underscore, not starting
    with a digit, and not one of the statement keywords."""
    return bool(_IDENT_RE.match(text)) and text not in KEYWORDS


@dataclass(frozen=True)
class IntLiteral:
    value: int


@dataclass(frozen=True)
class FloatLiteral:
    value: float


@dataclass(frozen=True)
class NameRef:
    """A bare name in an argument or size position.

    Which namespace it refers to (let constant, single-qubit alias, macro
    parameter) is resolved semantically, not syntactically.
    """

    name: str


IntExpr = Union[IntLiteral, NameRef]


@dataclass(frozen=True)
class QubitRef:
    """``base[index]`` as a gate argument; index may be absent when the
    reference is to a single-qubit alias or macro parameter."""

    base: str
    index: Optional[IntExpr] = None


GateArg = Union[QubitRef, IntLiteral, FloatLiteral, NameRef]


@dataclass(frozen=True)
class Slice:
    """Python-style slice selector in a map statement; None marks an
    omitted component."""

    start: Optional[IntExpr] = None
    stop: Optional[IntExpr] = None
    step: Optional[IntExpr] = None


@dataclass(frozen=True)
class RegisterDecl:
    name: str
    size: IntExpr
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MapAlias:
    """``map name target[selector]``; selector None aliases the whole
    target, an IntExpr selects one qubit, a Slice selects an array view."""

    name: str
    target: str
    selector: Union[None, IntLiteral, NameRef, Slice] = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetConstant:
    """An immutable named number; int/float is distinguished by the Python
    type of ``value`` and decides which argument positions accept it."""

    name: str
    value: Union[int, float]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    @property
    def is_float(self) -> bool:
        return isinstance(self.value, float)


@dataclass(frozen=True)
class GateStatement:
    name: str
    args: tuple = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GateBlock:
    """Sequential (``{}``) or parallel (``<>``) group of body statements."""

    parallel: bool
    statements: tuple = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LoopStatement:
    count: IntExpr
    body: GateBlock  # always a sequential block in a valid program
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MacroDef:
    """A named composite gate; the body block may be sequential or parallel
    and may only invoke macros defined earlier in the file."""

    name: str
    params: tuple = ()
    body: GateBlock = GateBlock(False)
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


HeaderStatement = Union[RegisterDecl, MapAlias, LetConstant]
BodyStatement = Union[GateStatement, GateBlock, LoopStatement, MacroDef]


@dataclass(frozen=True)
class Program:
    headers: tuple = ()
    body: tuple = ()


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

_INDENT = "    "


def _num(value) -> str:
    # repr of a float is the shortest string that parses back to the same
    # value, which is what the round-trip property needs
    return repr(value) if isinstance(value, float) else str(value)


def _int_expr(expr) -> str:
    if expr is None:
        return ""
    if isinstance(expr, IntLiteral):
        return str(expr.value)
    return expr.name


def _arg(arg) -> str:
    if isinstance(arg, QubitRef):
        if arg.index is None:
            return arg.base
        return f"{arg.base}[{_int_expr(arg.index)}]"
    if isinstance(arg, NameRef):
        return arg.name
    return _num(arg.value)


def _selector(selector) -> str:
    if selector is None:
        return ""
    if isinstance(selector, Slice):
        text = f"{_int_expr(selector.start)}:{_int_expr(selector.stop)}"
        if selector.step is not None:
            text += f":{_int_expr(selector.step)}"
        return f"[{text}]"
    return f"[{_int_expr(selector)}]"


def _emit(stmt, indent: int, lines: list):
    pad = _INDENT * indent
    if isinstance(stmt, RegisterDecl):
        lines.append(f"{pad}register {stmt.name}[{_int_expr(stmt.size)}]")
    elif isinstance(stmt, MapAlias):
        lines.append(f"{pad}map {stmt.name} {stmt.target}{_selector(stmt.selector)}")
    elif isinstance(stmt, LetConstant):
        lines.append(f"{pad}let {stmt.name} {_num(stmt.value)}")
    elif isinstance(stmt, GateStatement):
        parts = [stmt.name] + [_arg(a) for a in stmt.args]
        lines.append(pad + " ".join(parts))
    elif isinstance(stmt, GateBlock):
        open_ch, close_ch = ("<", ">") if stmt.parallel else ("{", "}")
        lines.append(pad + open_ch)
        for child in stmt.statements:
            _emit(child, indent + 1, lines)
        lines.append(pad + close_ch)
    elif isinstance(stmt, LoopStatement):
        _emit_headed_block(f"loop {_int_expr(stmt.count)}", stmt.body, indent, lines)
    elif isinstance(stmt, MacroDef):
        head = " ".join(["macro", stmt.name, *stmt.params])
        _emit_headed_block(head, stmt.body, indent, lines)
    else:
        raise TypeError(f"cannot print {type(stmt).__name__}")


def _emit_headed_block(head: str, body: GateBlock, indent: int, lines: list):
    # the opening bracket must share a line with the loop/macro head
    pad = _INDENT * indent
    open_ch, close_ch = ("<", ">") if body.parallel else ("{", "}")
    lines.append(f"{pad}{head} {open_ch}")
    for child in body.statements:
        _emit(child, indent + 1, lines)
    lines.append(pad + close_ch)


def pretty_print(program: Program) -> str:
    """Render a program as canonical source: one statement per line,
    newline separators, 4-space indentation.  Reparsing the result yields a
    structurally equal tree."""
    lines: list = []
    for stmt in program.headers:
        _emit(stmt, 0, lines)
    for stmt in program.body:
        _emit(stmt, 0, lines)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
