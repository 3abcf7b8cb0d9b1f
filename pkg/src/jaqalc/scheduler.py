"""Start-time assignment for flat circuits.

In a sequential block each child starts when the previous one ends; in a
parallel block every child starts at the block's start and the block lasts
as long as its longest child.  Each qubit that participates in a parallel
block is padded with synthetic idle entries (one ``I_pad`` per gap, sized
exactly) so that its busy time plus inserted idle time equals the block
duration.  Qubits the block never mentions receive no padding.

Scheduling is start-aligned; the timeline records that choice in its
``alignment`` field so a future finish-aligned mode has somewhere to live.

The scheduler independently detects temporal conflicts (two entries on one
qubit with overlapping half-open spans) even though analyzed programs
cannot produce them, so circuits built by hand get checked too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConflictError
from .expander import FlatBlock, FlatCircuit, PrimitiveGate, gate_qubits

PAD_IDLE_NAME = "I_pad"


@dataclass(frozen=True)
class TimelineEntry:
    gate: PrimitiveGate
    start: float
    duration: float

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class IdleEntry:
    """A synthetic variable-length idle inserted to pad a parallel block."""

    qubit: int
    start: float
    duration: float

    name = PAD_IDLE_NAME

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass
class Timeline:
    entries: list  # TimelineEntry, in execution order
    inserted_idles: list  # IdleEntry
    total_duration: float
    alignment: str = "start"


def _duration_lookup(gates):
    if gates is None:
        return lambda g: g.definition.duration
    return lambda g: gates[g.definition.name].duration


def _coverage(intervals, lo: float, hi: float):
    """Gaps of [lo, hi) not covered by the given (start, end) intervals.
    Intervals never overlap here (conflicts are checked separately)."""
    gaps = []
    cursor = lo
    for start, end in sorted(intervals):
        if start > cursor:
            gaps.append((cursor, start))
        cursor = max(cursor, end)
    if cursor < hi:
        gaps.append((cursor, hi))
    return gaps


class _Layout:
    def __init__(self, circuit: FlatCircuit, duration_of):
        self.n_qubits = circuit.n_qubits
        self.duration_of = duration_of
        self.entries: list = []
        self.idles: list = []

    def place(self, item, t0: float) -> float:
        if isinstance(item, PrimitiveGate):
            duration = self.duration_of(item)
            self.entries.append(TimelineEntry(item, t0, duration))
            return t0 + duration
        if item.parallel:
            return self.place_parallel(item, t0)
        t = t0
        for child in item.items:
            t = self.place(child, t)
        return t

    def place_parallel(self, block: FlatBlock, t0: float) -> float:
        mark_entries = len(self.entries)
        mark_idles = len(self.idles)
        end = t0
        for child in block.items:
            end = max(end, self.place(child, t0))
        # pad every participating qubit out to the block end
        occupancy: dict = {}
        for entry in self.entries[mark_entries:]:
            for q in gate_qubits(entry.gate, self.n_qubits):
                occupancy.setdefault(q, []).append((entry.start, entry.end))
        for idle in self.idles[mark_idles:]:
            occupancy.setdefault(idle.qubit, []).append((idle.start, idle.end))
        for qubit in sorted(occupancy):
            for gap_start, gap_end in _coverage(occupancy[qubit], t0, end):
                self.idles.append(
                    IdleEntry(qubit, gap_start, gap_end - gap_start))
        return end


def _check_conflicts(entries, idles, n_qubits: int):
    per_qubit: dict = {}
    for entry in entries:
        for q in gate_qubits(entry.gate, n_qubits):
            per_qubit.setdefault(q, []).append(
                (entry.start, entry.end, entry.gate.name))
    for idle in idles:
        per_qubit.setdefault(idle.qubit, []).append(
            (idle.start, idle.end, idle.name))
    for qubit in sorted(per_qubit):
        # zero-duration spans occupy nothing and would break the
        # adjacent-pair scan, so drop them first
        spans = sorted(s for s in per_qubit[qubit] if s[1] > s[0])
        for (s1, e1, name1), (s2, e2, name2) in zip(spans, spans[1:]):
            # half-open spans: touching endpoints do not overlap
            if s2 < e1:
                raise ConflictError(
                    f"qubit {qubit}: {name1} over [{s1:g}, {e1:g}) overlaps "
                    f"{name2} over [{s2:g}, {e2:g})", code="qubit-conflict")


def schedule(circuit: FlatCircuit, gates: dict = None, *,
             check: bool = True) -> Timeline:
    """Assign start times and durations to every gate of a flat circuit.

    Durations come from each gate's definition, or from ``gates`` when a
    mapping (for example one with manifest overrides applied) is supplied.
    Raises ConflictError if two entries occupy one qubit at once.
    """
    layout = _Layout(circuit, _duration_lookup(gates))
    total = layout.place(circuit.root, 0.0)
    if check:
        _check_conflicts(layout.entries, layout.idles, circuit.n_qubits)
    return Timeline(layout.entries, layout.idles, total)


def total_duration(circuit: FlatCircuit, gates: dict = None, *,
                   check: bool = True) -> float:
    """Total runtime of a circuit, computed algebraically: sequential
    blocks add, parallel blocks take the maximum.  With ``check`` the
    occupancy sweep still runs, so conflicting circuits fail the same way
    ``schedule`` does."""
    duration_of = _duration_lookup(gates)

    def measure(item) -> float:
        if isinstance(item, PrimitiveGate):
            return duration_of(item)
        if item.parallel:
            return max((measure(c) for c in item.items), default=0.0)
        return sum(measure(c) for c in item.items)

    if check:
        layout = _Layout(circuit, duration_of)
        layout.place(circuit.root, 0.0)
        _check_conflicts(layout.entries, layout.idles, circuit.n_qubits)
    return measure(circuit.root)


def dump_timeline(timeline: Timeline) -> str:
    """One line per entry, ``start duration name qubits... floats...``,
    sorted by (start, first qubit); inserted idles appear as I_pad lines."""
    rows = []
    for entry in timeline.entries:
        first = min(entry.gate.qubits) if entry.gate.qubits else -1
        parts = [f"{entry.start:g}", f"{entry.duration:g}", entry.gate.name]
        parts += [str(q) for q in entry.gate.qubits]
        parts += [repr(f) for f in entry.gate.float_args]
        rows.append(((entry.start, first, entry.gate.name), " ".join(parts)))
    for idle in timeline.inserted_idles:
        parts = [f"{idle.start:g}", f"{idle.duration:g}", idle.name,
                 str(idle.qubit)]
        rows.append(((idle.start, idle.qubit, idle.name), " ".join(parts)))
    rows.sort(key=lambda r: r[0])
    lines = [text for _, text in rows]
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
