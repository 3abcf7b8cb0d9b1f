"""Noiseless state-vector execution of flat circuits.

Basis-state indices are little-endian: bit b of an amplitude index is the
state of qubit b, and measurement bitstrings put qubit 0 in the first
character.  Each all-qubit measurement draws exactly one number from a
SplitMix64 stream seeded by the caller, so measurement records are
bit-reproducible across platforms for a given (circuit, seed) pair.

Measurement physically destroys the register: after ``measure_all`` the
state is poisoned and every operation except ``prepare_all`` raises, which
surfaces generated programs that forgot to re-prepare.
"""

from __future__ import annotations

import numpy as np

from .errors import SimulationError
from .expander import FlatCircuit, PrimitiveGate, iter_gates
from .gateset import IDLE, MEASUREMENT, PREPARATION, quantize_angle, unitary_of

MAX_QUBITS = 24  # 2**24 complex amplitudes is the practical cap

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Sequential 64-bit generator (Steele, Lea, Flood 2014 mixing
    constants); trivially portable because it is pure integer arithmetic."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """One double in (0, 1] using the top 53 bits.

        Excluding zero makes inverse-CDF sampling immune to probability
        entries below 2**-53, which is where pure float noise lives.
        """
        return ((self.next_u64() >> 11) + 1) * 2.0 ** -53


class QuantumState:
    """A normalized complex amplitude vector over 2**n_qubits basis states.

    ``destroyed`` marks the post-measurement state that only preparation
    can revive.
    """

    def __init__(self, n_qubits: int):
        if n_qubits > MAX_QUBITS:
            raise SimulationError(
                f"{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit "
                "simulation cap", code="too-many-qubits")
        self.n_qubits = n_qubits
        self.amplitudes = np.zeros(2 ** n_qubits, dtype=complex)
        self.amplitudes[0] = 1.0
        self.destroyed = False

    def reset(self):
        self.amplitudes[:] = 0.0
        self.amplitudes[0] = 1.0
        self.destroyed = False


def apply_unitary(state: QuantumState, unitary, qubits) -> QuantumState:
    """Apply a unitary to the given qubits, identity on the rest.

    The matrix is indexed with ``qubits[0]`` as the most significant bit of
    its row/column index.  Works in place and returns the state.
    """
    qubits = tuple(qubits)
    k = len(qubits)
    unitary = np.asarray(unitary, dtype=complex)
    if unitary.shape != (2 ** k, 2 ** k):
        raise SimulationError(
            f"unitary shape {unitary.shape} does not act on {k} qubit(s)")
    if len(set(qubits)) != k:
        raise SimulationError("duplicate qubit in unitary application",
                              code="duplicate-qubit")
    n = state.n_qubits
    for q in qubits:
        if not 0 <= q < n:
            raise SimulationError(f"qubit {q} out of range for {n}-qubit "
                                  "state")
    if k == 0:
        return state
    # row-major reshape puts qubit q on axis n-1-q
    axes = [n - 1 - q for q in qubits]
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(psi, axes, range(k))
    psi = unitary @ psi.reshape(2 ** k, -1)
    psi = np.moveaxis(psi.reshape((2,) * n), range(k), axes)
    state.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return state


def bitstring_of(index: int, n_qubits: int) -> str:
    """Little-endian rendering: character t is the state of qubit t."""
    return "".join("1" if index >> t & 1 else "0" for t in range(n_qubits))


def born_probabilities(state: QuantumState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def _sample_index(probs: np.ndarray, u: float) -> int:
    """Inverse-CDF draw: the first index whose cumulative probability
    reaches u, for u in (0, 1]."""
    cumulative = np.cumsum(probs)
    index = int(np.searchsorted(cumulative, u, side="left"))
    if index >= len(probs):  # float sums can land a hair under 1.0
        nonzero = np.nonzero(probs)[0]
        index = int(nonzero[-1]) if len(nonzero) else 0
    return index


def _execute(circuit: FlatCircuit, gates, quantize: bool, on_measure):
    state = QuantumState(circuit.n_qubits)
    for gate in iter_gates(circuit):
        definition = gate.definition
        if gates is not None:
            definition = gates[definition.name]
        if definition.kind == PREPARATION:
            state.reset()
            continue
        if state.destroyed:
            raise SimulationError(
                f"{definition.name} applied after measure_all destroyed "
                "the register; prepare_all must intervene",
                code="destroyed-state")
        if definition.kind == MEASUREMENT:
            index = on_measure(state)
            state.amplitudes[:] = 0.0
            state.amplitudes[index] = 1.0
            state.destroyed = True
            continue
        if definition.kind == IDLE:
            continue
        floats = gate.float_args
        if quantize:
            floats = tuple(quantize_angle(f) for f in floats)
        apply_unitary(state, unitary_of(definition, floats), gate.qubits)
    return state


def run(circuit: FlatCircuit, gates: dict = None, seed: int = 0,
        quantize: bool = False) -> list:
    """Execute a circuit, returning one little-endian bitstring per
    measure_all in execution order.

    Sampling draws one SplitMix64 uniform per measurement, so identical
    (circuit, seed) pairs reproduce identical records anywhere.  With
    ``quantize`` every angle is first snapped to the hardware grid.
    """
    rng = SplitMix64(seed)
    record: list = []

    def on_measure(state: QuantumState) -> int:
        index = _sample_index(born_probabilities(state), rng.uniform())
        record.append(bitstring_of(index, state.n_qubits))
        return index

    _execute(circuit, gates, quantize, on_measure)
    return record


def probabilities(circuit: FlatCircuit, gates: dict = None,
                  quantize: bool = False) -> list:
    """Exact Born distributions instead of samples: one mapping of
    bitstring to probability (nonzero outcomes only) per measure_all.

    Execution is deterministic; after each measurement the state follows
    the most probable outcome, ties breaking toward the lower basis index.
    """
    distributions: list = []

    def on_measure(state: QuantumState) -> int:
        probs = born_probabilities(state)
        distributions.append({
            bitstring_of(i, state.n_qubits): float(p)
            for i, p in enumerate(probs) if p != 0.0
        })
        return int(np.argmax(probs))

    _execute(circuit, gates, quantize, on_measure)
    return distributions
