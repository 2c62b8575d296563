"""Line-oriented netlist format for feed-forward stochastic logic circuits.

Grammar (``#`` starts a comment, blank lines are ignored)::

    inputs a b c
    gate <name> <TYPE> <in1> [<in2> ...] -> <out>
    table <name> <row> ; <row> ; ...
    group <gname> = <gate> [<gate> ...]

``TYPE`` is a built-in (AND, OR, NAND, NOR, XOR, NOT, ERASE, ID) or TABLE.
A TABLE gate takes its matrix from the ``table`` line with the same name:
one row per output state, one entry per input state in lexicographic
order.  Entries may be decimals or fractions such as ``1/3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import NetlistError, ValidationError
from .gates import BUILTIN_TYPES, GateSpec, builtin_gate, joint_labels

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\[\]]*$")


@dataclass(frozen=True)
class GateInstance:
    spec: GateSpec
    inputs: tuple
    output: str

    @property
    def name(self) -> str:
        return self.spec.name


@dataclass(frozen=True)
class CircuitNetlist:
    wires: dict  # wire name -> alphabet size, in driver order
    primary_inputs: tuple
    gates: tuple  # GateInstance, topologically ordered
    groups: dict = field(default_factory=dict)  # group name -> tuple of gate names

    def __post_init__(self):
        drivers = {w: "input" for w in self.primary_inputs}
        for g in self.gates:
            for w in g.inputs:
                if w not in drivers:
                    raise ValidationError(f"gate {g.name}: input wire {w!r} is not driven by an earlier gate or input")
                if self.wires[w] != arity_of(g, g.inputs.index(w)):
                    raise ValidationError(f"gate {g.name}: wire {w!r} alphabet does not match gate input")
            if g.output in drivers:
                raise ValidationError(f"wire {g.output!r} is multiply driven")
            drivers[g.output] = g.name
        names = [g.name for g in self.gates]
        if len(set(names)) != len(names):
            raise ValidationError("gate names must be unique")
        seen = {}
        for group, members in self.groups.items():
            for m in members:
                if m not in names:
                    raise ValidationError(f"group {group}: unknown gate {m!r}")
                if m in seen:
                    raise ValidationError(f"gate {m!r} is in both group {seen[m]} and group {group}")
                seen[m] = group

    def gate(self, name: str) -> GateInstance:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(name)

    @property
    def input_labels(self) -> list[str]:
        """Joint primary-input state labels, first declared input most significant."""
        return joint_labels([self.wires[w] for w in self.primary_inputs])

    @property
    def outputs(self) -> tuple:
        """Wires driven by a gate and read by no other gate."""
        read = {w for g in self.gates for w in g.inputs}
        return tuple(g.output for g in self.gates if g.output not in read)


def arity_of(g: GateInstance, position: int) -> int:
    return g.spec.input_arities[position]


def _tokens(line: str):
    """Yield (token, 1-based column) pairs."""
    for m in re.finditer(r"\S+", line):
        yield m.group(), m.start() + 1


def _parse_entry(tok: str, lineno: int, col: int) -> float:
    try:
        return float(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise NetlistError(f"bad probability {tok!r}", lineno, col) from None


def _check_ident(tok: str, lineno: int, col: int) -> str:
    if not _IDENT.match(tok):
        raise NetlistError(f"invalid identifier {tok!r}", lineno, col)
    return tok


def parse_netlist(text: str) -> CircuitNetlist:
    inputs: list[str] = []
    raw_gates = []  # (name, type, inputs, output, lineno)
    tables: dict[str, tuple] = {}
    groups: dict[str, tuple] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        keyword, kcol = toks[0]
        if keyword == "inputs":
            if len(toks) < 2:
                raise NetlistError("'inputs' needs at least one wire", lineno, kcol)
            for tok, col in toks[1:]:
                inputs.append(_check_ident(tok, lineno, col))
        elif keyword == "gate":
            words = [t for t, _ in toks]
            if "->" not in words:
                raise NetlistError("gate line needs '-> <out>'", lineno, len(line.rstrip()) + 1)
            arrow = words.index("->")
            if arrow < 4:
                raise NetlistError("expected 'gate <name> <TYPE> <inputs...> -> <out>'", lineno, kcol)
            if arrow != len(words) - 2:
                col = toks[arrow + 1][1] if arrow + 1 < len(toks) else len(line) + 1
                raise NetlistError("exactly one output wire must follow '->'", lineno, col)
            name = _check_ident(toks[1][0], lineno, toks[1][1])
            kind = toks[2][0].upper()
            if kind not in BUILTIN_TYPES and kind != "TABLE":
                raise NetlistError(f"unknown gate type {toks[2][0]!r}", lineno, toks[2][1])
            ins = tuple(_check_ident(t, lineno, c) for t, c in toks[3:arrow])
            out = _check_ident(toks[-1][0], lineno, toks[-1][1])
            raw_gates.append((name, kind, ins, out, lineno))
        elif keyword == "table":
            if len(toks) < 3:
                raise NetlistError("expected 'table <name> <rows>'", lineno, kcol)
            name = _check_ident(toks[1][0], lineno, toks[1][1])
            rows, row = [], []
            for tok, col in toks[2:]:
                parts = tok.split(";")
                for k, piece in enumerate(parts):
                    if k > 0:
                        rows.append(row)
                        row = []
                    if piece:
                        row.append(_parse_entry(piece, lineno, col))
            rows.append(row)
            rows = [r for r in rows if r]
            if len({len(r) for r in rows}) != 1:
                raise NetlistError(f"table {name}: rows have unequal lengths", lineno, kcol)
            if name in tables:
                raise NetlistError(f"table {name} defined twice", lineno, kcol)
            tables[name] = (np.array(rows, dtype=float), lineno)
        elif keyword == "group":
            if len(toks) < 4 or toks[2][0] != "=":
                raise NetlistError("expected 'group <name> = <gates...>'", lineno, kcol)
            gname = _check_ident(toks[1][0], lineno, toks[1][1])
            if gname in groups:
                raise NetlistError(f"group {gname} defined twice", lineno, kcol)
            groups[gname] = tuple(_check_ident(t, lineno, c) for t, c in toks[3:])
        else:
            raise NetlistError(f"unknown statement {keyword!r}", lineno, kcol)

    if not inputs:
        raise NetlistError("no 'inputs' declaration")
    if len(set(inputs)) != len(inputs):
        raise NetlistError("duplicate primary input")

    # one driver per wire
    driver: dict[str, object] = {w: None for w in inputs}
    for name, kind, ins, out, lineno in raw_gates:
        if out in driver:
            raise NetlistError(f"wire {out!r} is multiply driven", lineno)
        driver[out] = name
    for name, kind, ins, out, lineno in raw_gates:
        for w in ins:
            if w not in driver:
                raise NetlistError(f"gate {name}: input wire {w!r} is undriven", lineno)

    ordered = _topological_order(raw_gates, set(inputs))

    wires = {w: 2 for w in inputs}
    gates = []
    used_tables = set()
    for name, kind, ins, out, lineno in ordered:
        arities = [wires[w] for w in ins]
        try:
            if kind == "TABLE":
                if name not in tables:
                    raise NetlistError(f"gate {name}: no 'table {name}' line", lineno)
                matrix, tline = tables[name]
                used_tables.add(name)
                expected = int(np.prod(arities))
                if matrix.shape[1] != expected:
                    raise NetlistError(
                        f"table {name}: {matrix.shape[1]} columns but inputs have {expected} joint states", tline)
                spec = GateSpec(name, joint_labels(arities), [str(i) for i in range(matrix.shape[0])],
                                matrix, "TABLE", tuple(arities))
            else:
                if any(a != 2 for a in arities):
                    raise NetlistError(f"gate {name}: built-in {kind} needs binary input wires", lineno)
                spec = builtin_gate(kind, name, len(ins))
        except NetlistError:
            raise
        except ValidationError as exc:
            raise NetlistError(str(exc), lineno) from None
        wires[out] = spec.n_outputs
        gates.append(GateInstance(spec, ins, out))

    unused = set(tables) - used_tables
    if unused:
        name = sorted(unused)[0]
        raise NetlistError(f"table {name} has no matching TABLE gate", tables[name][1])

    try:
        return CircuitNetlist(wires, tuple(inputs), tuple(gates), groups)
    except NetlistError:
        raise
    except ValidationError as exc:
        raise NetlistError(str(exc)) from None


def _topological_order(raw_gates, primary):
    """Order gates so every input is driven earlier, keeping file order where possible."""
    pending = list(raw_gates)
    ready = set(primary)
    ordered = []
    while pending:
        for i, g in enumerate(pending):
            if all(w in ready for w in g[2]):
                ordered.append(g)
                ready.add(g[3])
                del pending[i]
                break
        else:
            names = ", ".join(g[0] for g in pending)
            raise NetlistError(f"cycle detected among gates: {names}", pending[0][4])
    return ordered
