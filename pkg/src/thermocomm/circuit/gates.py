"""Logic gates as column-stochastic transition matrices.

``transition[y, x]`` is p(y | x): rows are output states, columns are input
states.  Input states of a k-input gate are enumerated in lexicographic
order with the first input most significant, so a 2-input gate has columns
``00, 01, 10, 11``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import ValidationError
from ..thermo import SUM_TOLERANCE, Distribution


def state_label(values: Sequence[int]) -> str:
    return "".join(str(v) for v in values) if all(v < 10 for v in values) else ",".join(map(str, values))


def joint_labels(arities: Sequence[int]) -> list[str]:
    return [state_label(v) for v in itertools.product(*(range(a) for a in arities))]


@dataclass(frozen=True, eq=False)
class GateSpec:
    name: str
    input_states: tuple
    output_states: tuple
    transition: np.ndarray = field(repr=False)
    kind: str = "TABLE"
    input_arities: tuple = ()

    def __post_init__(self):
        t = np.array(self.transition, dtype=float)
        t.setflags(write=False)
        object.__setattr__(self, "transition", t)
        object.__setattr__(self, "input_states", tuple(self.input_states))
        object.__setattr__(self, "output_states", tuple(self.output_states))
        if not self.input_states or not self.output_states:
            raise ValidationError(f"gate {self.name}: state spaces must be nonempty")
        for what, states in (("input", self.input_states), ("output", self.output_states)):
            if len(set(states)) != len(states):
                raise ValidationError(f"gate {self.name}: duplicate {what} state label")
        if t.shape != (len(self.output_states), len(self.input_states)):
            raise ValidationError(
                f"gate {self.name}: transition has shape {t.shape}, expected "
                f"({len(self.output_states)}, {len(self.input_states)})"
            )
        if not np.all(np.isfinite(t)) or np.any(t < 0):
            raise ValidationError(f"gate {self.name}: transition entries must be finite and >= 0")
        sums = t.sum(axis=0)
        for x, s in zip(self.input_states, sums):
            if abs(s - 1.0) > SUM_TOLERANCE:
                raise ValidationError(
                    f"gate {self.name}: column for input {x!r} sums to {s!r}, not 1"
                )
        if not self.input_arities:
            object.__setattr__(self, "input_arities", (len(self.input_states),))
        elif int(np.prod(self.input_arities)) != len(self.input_states):
            raise ValidationError(f"gate {self.name}: input arities do not match input states")

    @property
    def n_inputs(self) -> int:
        return len(self.input_arities)

    @property
    def n_outputs(self) -> int:
        return len(self.output_states)

    def apply(self, p: Distribution) -> Distribution:
        """Push an input-state distribution through the gate."""
        if p.labels != self.input_states:
            raise ValidationError(f"gate {self.name}: distribution is not over the gate's input states")
        out = self.transition @ p.array
        # guard the sum tolerance against accumulated rounding
        return Distribution.normalized(self.output_states, np.clip(out, 0.0, None))

    def renamed(self, name: str) -> "GateSpec":
        return GateSpec(name, self.input_states, self.output_states, self.transition,
                        self.kind, self.input_arities)


@dataclass(frozen=True)
class IslandPartition:
    """Initial states grouped by shared positive-probability outputs."""

    islands: tuple  # tuple of frozensets of input-state labels
    masses: Optional[tuple] = None

    def island_of(self, state) -> int:
        for i, island in enumerate(self.islands):
            if state in island:
                return i
        raise KeyError(state)


def islands(g: GateSpec, p: Optional[Distribution] = None) -> IslandPartition:
    """Partition ``g``'s input states into islands; masses are filled if ``p`` is given."""
    n = len(g.input_states)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for row in g.transition:
        hits = np.flatnonzero(row > 0)
        for j in hits[1:]:
            a, b = find(int(hits[0])), find(int(j))
            if a != b:
                parent[max(a, b)] = min(a, b)

    groups: dict[int, list] = {}
    for i, x in enumerate(g.input_states):
        groups.setdefault(find(i), []).append(x)
    parts = tuple(frozenset(v) for v in groups.values())

    masses = None
    if p is not None:
        if set(p.labels) != set(g.input_states):
            raise ValidationError(f"gate {g.name}: distribution is not over the gate's input states")
        masses = tuple(float(sum(p[x] for x in part)) for part in parts)
    return IslandPartition(parts, masses)


def _truth_table(name, kind, n_in, fn) -> GateSpec:
    inputs = list(itertools.product((0, 1), repeat=n_in))
    t = np.zeros((2, len(inputs)))
    for j, x in enumerate(inputs):
        t[fn(*x), j] = 1.0
    return GateSpec(name, [state_label(x) for x in inputs], ["0", "1"], t, kind, (2,) * n_in)


_BINARY_OPS = {
    "AND": lambda *x: int(all(x)),
    "OR": lambda *x: int(any(x)),
    "NAND": lambda *x: 1 - int(all(x)),
    "NOR": lambda *x: 1 - int(any(x)),
    "XOR": lambda *x: sum(x) % 2,
}

BUILTIN_TYPES = ("AND", "OR", "NAND", "NOR", "XOR", "NOT", "ERASE", "ID")


def builtin_gate(kind: str, name: str, n_inputs: int) -> GateSpec:
    """Construct a built-in gate on binary inputs.

    ERASE maps every input to all-zeros and ID copies its inputs; both keep
    one output state per input bit pattern of the same width.
    """
    kind = kind.upper()
    if kind in _BINARY_OPS:
        if n_inputs < 2:
            raise ValidationError(f"gate {name}: {kind} needs at least 2 inputs")
        return _truth_table(name, kind, n_inputs, _BINARY_OPS[kind])
    if kind == "NOT":
        if n_inputs != 1:
            raise ValidationError(f"gate {name}: NOT takes exactly 1 input")
        return _truth_table(name, kind, 1, lambda x: 1 - x)
    if kind in ("ERASE", "ID"):
        if n_inputs < 1:
            raise ValidationError(f"gate {name}: {kind} needs at least 1 input")
        states = joint_labels((2,) * n_inputs)
        if kind == "ID":
            t = np.eye(len(states))
        else:
            t = np.zeros((len(states), len(states)))
            t[0, :] = 1.0
        return GateSpec(name, states, states, t, kind, (2,) * n_inputs)
    raise ValidationError(f"unknown gate type {kind!r}; expected one of {', '.join(BUILTIN_TYPES)} or TABLE")
