"""Native gate definitions for the QSCOUT 1.0 trapped-ion platform.

The built-in set provides all-qubit preparation and measurement, arbitrary
single-qubit rotations about the x, y, and z axes (plus fixed pi and pi/2
variants in both directions), the two-qubit Molmer-Sorensen entangling gate
and its XX-type instance, and one idle twin per single- and two-qubit gate
whose duration matches the gate it shadows.

Unitaries follow the half-angle convention: a rotation by theta about axis A
is exp(-i*theta/2 * A), and the general Molmer-Sorensen gate is

    MS(phi, theta) = exp(-i*(theta/2) * (cos(phi) X + sin(phi) Y)^{tensor 2})

with Sxx = MS(0, pi/2).  Durations are placeholders in arbitrary time units
(single-qubit gates 1, two-qubit gates 10, prepare/measure 20) and can be
overridden through a duration manifest file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ManifestError

QUBIT = "qubit"
FLOAT = "float"

PREPARATION = "preparation"
MEASUREMENT = "measurement"
ROTATION = "rotation"
IDLE = "idle"

IDLE_PREFIX = "I_"

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class RotationSpec:
    """How to build a gate's unitary.

    family 'axis' is a single-qubit rotation about ``axis``; family 'ms' is
    the two-qubit Molmer-Sorensen gate.  A None angle means the value comes
    from the gate's float arguments, in declaration order.
    """

    family: str  # 'axis' or 'ms'
    axis: Optional[str] = None
    phi: Optional[float] = None
    theta: Optional[float] = None


@dataclass(frozen=True)
class GateDefinition:
    name: str
    param_kinds: tuple  # each QUBIT or FLOAT, in argument order
    duration: float
    kind: str  # PREPARATION, MEASUREMENT, ROTATION, or IDLE
    rotation: Optional[RotationSpec] = None

    @property
    def qubit_arity(self) -> int:
        return self.param_kinds.count(QUBIT)

    @property
    def float_arity(self) -> int:
        return self.param_kinds.count(FLOAT)


def _axis_gate(name, axis, theta, duration=1.0):
    if theta is None:
        kinds = (QUBIT, FLOAT)
    else:
        kinds = (QUBIT,)
    return GateDefinition(name, kinds, duration, ROTATION,
                          RotationSpec("axis", axis=axis, theta=theta))


def builtin_gateset() -> dict:
    """The built-in gate definitions, keyed by gate name."""
    gates = [
        GateDefinition("prepare_all", (), 20.0, PREPARATION),
        GateDefinition("measure_all", (), 20.0, MEASUREMENT),
        GateDefinition("MS", (QUBIT, QUBIT, FLOAT, FLOAT), 10.0, ROTATION,
                       RotationSpec("ms")),
        GateDefinition("Sxx", (QUBIT, QUBIT), 10.0, ROTATION,
                       RotationSpec("ms", phi=0.0, theta=math.pi / 2)),
    ]
    for axis in "xyz":
        up = axis.upper()
        gates.append(_axis_gate(f"R{axis}", axis, None))
        gates.append(_axis_gate(f"P{axis}", axis, math.pi))
        gates.append(_axis_gate(f"S{axis}", axis, math.pi / 2))
        # the d suffix marks the clockwise (dagger) quarter turn
        gates.append(_axis_gate(f"S{axis}d", axis, -math.pi / 2))
    table = {g.name: g for g in gates}
    # one idle twin per single- and two-qubit gate, same duration
    for g in gates:
        if g.qubit_arity in (1, 2):
            twin = GateDefinition(IDLE_PREFIX + g.name,
                                  (QUBIT,) * g.qubit_arity,
                                  g.duration, IDLE)
            table[twin.name] = twin
    return table


def unitary_of(definition: GateDefinition, float_args=()) -> np.ndarray:
    """Build the unitary matrix of a rotation or idle gate.

    ``float_args`` supplies the gate's float arguments; fixed-angle gates
    take none.  Preparation and measurement are not unitary operations and
    are rejected.
    """
    float_args = [float(a) for a in float_args]
    if len(float_args) != definition.float_arity:
        raise ValueError(
            f"{definition.name} takes {definition.float_arity} float "
            f"argument(s), got {len(float_args)}")
    if any(not math.isfinite(a) for a in float_args):
        raise ValueError(f"{definition.name}: angle must be finite")
    if definition.kind == IDLE:
        return np.eye(2 ** definition.qubit_arity, dtype=complex)
    if definition.kind != ROTATION:
        raise ValueError(f"{definition.name} has no unitary")
    spec = definition.rotation
    args = list(float_args)
    if spec.family == "axis":
        theta = spec.theta if spec.theta is not None else args.pop(0)
        axis = _PAULI[spec.axis]
        return (math.cos(theta / 2) * np.eye(2, dtype=complex)
                - 1j * math.sin(theta / 2) * axis)
    phi = spec.phi if spec.phi is not None else args.pop(0)
    theta = spec.theta if spec.theta is not None else args.pop(0)
    axis = math.cos(phi) * _PAULI["x"] + math.sin(phi) * _PAULI["y"]
    pair = np.kron(axis, axis)
    # (A tensor A) squares to the identity, so the exponential closes
    return (math.cos(theta / 2) * np.eye(4, dtype=complex)
            - 1j * math.sin(theta / 2) * pair)


# ---------------------------------------------------------------------------
# Hardware angle quantization
# ---------------------------------------------------------------------------

TWO_PI = 2.0 * math.pi
# Angles are wrapped into [-2pi, 2pi] (both endpoints representable) and
# snapped to a uniform grid of 2**40 steps across that interval.
ANGLE_STEP = 4.0 * math.pi / 2 ** 40


def wrap_angle(theta: float) -> float:
    """Reduce an angle modulo 4*pi into [-2pi, 2pi], preserving its action
    (half-angle rotations have period 4*pi)."""
    if not math.isfinite(theta):
        raise ValueError("angle must be finite")
    r = math.fmod(theta, 4.0 * math.pi)
    if r > TWO_PI:
        r -= 4.0 * math.pi
    elif r < -TWO_PI:
        r += 4.0 * math.pi
    return r


def quantize_angle(theta: float) -> float:
    """Round an angle the way the hardware converts it: wrap into
    [-2pi, 2pi], then snap to the nearest point of the 2**40-step grid.

    The result is within ANGLE_STEP/2 of the wrapped angle, and the
    function is idempotent.
    """
    wrapped = wrap_angle(theta)
    # -2pi and 2pi are exactly the grid points -2**39 and 2**39
    return round(wrapped / ANGLE_STEP) * ANGLE_STEP


# ---------------------------------------------------------------------------
# Duration manifests
# ---------------------------------------------------------------------------


def load_duration_manifest(text: str, gates=None) -> dict:
    """Parse a duration manifest into a name -> duration mapping.

    One ``<gate-name> <non-negative-number>`` per line; '#' starts a line
    comment and blank lines are ignored.  Overriding a gate also overrides
    its idle twin; naming an ``I_`` twin directly overrides just the twin,
    with later lines winning.
    """
    if gates is None:
        gates = builtin_gateset()
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ManifestError(
                f"manifest line {lineno}: expected '<gate> <duration>', "
                f"got {raw.strip()!r}")
        name, value = parts
        if name not in gates:
            raise ManifestError(f"manifest line {lineno}: unknown gate {name!r}")
        try:
            duration = float(value)
        except ValueError:
            raise ManifestError(
                f"manifest line {lineno}: bad duration {value!r}") from None
        if not math.isfinite(duration) or duration < 0:
            raise ManifestError(
                f"manifest line {lineno}: duration must be a non-negative "
                f"number, got {value}")
        overrides[name] = duration
        twin = IDLE_PREFIX + name
        if twin in gates:
            overrides[twin] = duration
    return overrides


def apply_durations(gates: dict, durations: dict) -> dict:
    """Return a copy of a gate mapping with the given durations applied."""
    out = dict(gates)
    for name, duration in durations.items():
        if name not in out:
            raise ManifestError(f"unknown gate {name!r}")
        out[name] = replace(out[name], duration=float(duration))
    return out
