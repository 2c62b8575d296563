"""Entropy primitives and the entropy-flow to heat conversion.

All entropies are dimensionless and measured in nats.  Boltzmann's constant
only enters when an entropy flow is turned into heat, so ``S = k * H``
never has to be tracked through the intermediate algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import entr, rel_entr

from .errors import InfiniteRelativeEntropyError, ValidationError

BOLTZMANN = 1.380649e-23  # J/K, exact since the 2019 SI redefinition
SUM_TOLERANCE = 1e-12

# One NAND gate on uniform inputs sheds (3/4) ln 3 nats.  In bits this is
# (3/4)(2 + log2(3/4)); multiplying by ln 2 nats/bit gives the same number.
NAND_UNIFORM_FLOW = 0.75 * math.log(3.0)


@dataclass(frozen=True)
class PhysicalContext:
    temperature: float
    boltzmann_constant: float = BOLTZMANN

    def __post_init__(self):
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise ValidationError(f"temperature must be positive and finite, got {self.temperature!r}")

    @property
    def kT(self) -> float:
        return self.boltzmann_constant * self.temperature


@dataclass(frozen=True)
class Distribution:
    """A probability vector over an ordered set of unique state labels."""

    labels: tuple
    probabilities: tuple

    def __init__(self, labels: Iterable, probabilities: Iterable[float]):
        labels = tuple(labels)
        probs = tuple(float(p) for p in probabilities)
        if not labels:
            raise ValidationError("distribution needs at least one state")
        if len(labels) != len(probs):
            raise ValidationError(
                f"{len(labels)} labels but {len(probs)} probabilities"
            )
        if len(set(labels)) != len(labels):
            dup = next(l for l in labels if labels.count(l) > 1)
            raise ValidationError(f"duplicate state label {dup!r}")
        for label, p in zip(labels, probs):
            if not math.isfinite(p) or p < 0:
                raise ValidationError(f"probability of state {label!r} is {p!r}; must be finite and >= 0")
        total = math.fsum(probs)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(
                f"probabilities sum to {total!r}, not 1 (tolerance {SUM_TOLERANCE}); "
                "use Distribution.normalized() to rescale explicitly"
            )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def normalized(cls, labels: Iterable, weights: Iterable[float]) -> "Distribution":
        """Build a distribution by rescaling nonnegative weights to unit mass."""
        weights = [float(w) for w in weights]
        total = math.fsum(weights)
        if not total > 0:
            raise ValidationError("weights must have positive total mass")
        return cls(labels, [w / total for w in weights])

    @classmethod
    def uniform(cls, labels: Iterable) -> "Distribution":
        labels = tuple(labels)
        return cls(labels, [1.0 / len(labels)] * len(labels))

    @classmethod
    def point(cls, labels: Iterable, at) -> "Distribution":
        labels = tuple(labels)
        if at not in labels:
            raise ValidationError(f"unknown state {at!r}")
        return cls(labels, [1.0 if l == at else 0.0 for l in labels])

    @classmethod
    def from_mapping(cls, labels: Sequence, mapping: Mapping) -> "Distribution":
        """Order ``mapping`` by ``labels``; unlisted states get probability 0."""
        unknown = set(mapping) - set(labels)
        if unknown:
            raise ValidationError(f"unknown state labels: {sorted(map(str, unknown))}")
        return cls(labels, [mapping.get(l, 0.0) for l in labels])

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=float)

    def __getitem__(self, label) -> float:
        try:
            return self.probabilities[self.labels.index(label)]
        except ValueError:
            raise KeyError(label) from None

    def __len__(self) -> int:
        return len(self.labels)

    def support(self) -> tuple:
        return tuple(l for l, p in zip(self.labels, self.probabilities) if p > 0)

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.probabilities))


@dataclass(frozen=True)
class EntropyAccount:
    """Entropy bookkeeping of one process, all in nats.

    ``entropy_flow`` is always computed as the sum of the other three, so the
    balance holds by construction; accounts combine with ``+``.
    """

    entropy_change: float
    mismatch: float
    residual: float

    @property
    def entropy_flow(self) -> float:
        return self.entropy_change + self.mismatch + self.residual

    def __add__(self, other: "EntropyAccount") -> "EntropyAccount":
        return EntropyAccount(
            self.entropy_change + other.entropy_change,
            self.mismatch + other.mismatch,
            self.residual + other.residual,
        )

    @classmethod
    def zero(cls) -> "EntropyAccount":
        return cls(0.0, 0.0, 0.0)

    def as_dict(self) -> dict:
        return {
            "entropy_change": self.entropy_change,
            "mismatch": self.mismatch,
            "residual": self.residual,
            "entropy_flow": self.entropy_flow,
        }


def shannon_entropy(d: Distribution) -> float:
    """-sum p ln p in nats, with 0 ln 0 = 0."""
    return float(math.fsum(entr(d.array)))


def relative_entropy(p: Distribution, q: Distribution) -> float:
    """Kullback-Leibler divergence D(p || q) in nats."""
    if p.labels != q.labels:
        if set(p.labels) != set(q.labels):
            raise ValidationError("relative entropy needs identical state label sets")
        q = Distribution(p.labels, [q[l] for l in p.labels])
    terms = rel_entr(p.array, q.array)
    for label, t in zip(p.labels, terms):
        if math.isinf(t):
            raise InfiniteRelativeEntropyError(label)
    # rel_entr terms can be negative individually; the sum cannot
    return max(float(math.fsum(terms)), 0.0)


def heat_from_entropy_flow(s_f: float, ctx: PhysicalContext) -> float:
    """Heat in joules released by an entropy flow of ``s_f`` nats."""
    return ctx.kT * s_f


def landauer_limit(ctx: PhysicalContext) -> float:
    """Minimum heat for erasing one bit, kT ln 2."""
    return heat_from_entropy_flow(math.log(2.0), ctx)
