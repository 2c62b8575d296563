"""Transmission-rate models feeding the rate-dependent FLO counts.

The LinkBudget mode is a deliberately simple reconstruction: total power is
split equally among K users who all see the same path loss, and K of the U
symbols in each coherence block are spent on pilots.  It is an artifact
assumption, not a channel simulation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ValidationError
from .processing import SystemParams, coherence_block_symbols


class RateMode(str, enum.Enum):
    EXPLICIT = "explicit"
    LINK_BUDGET = "link_budget"
    TABLE = "table"


@dataclass(frozen=True)
class RateModel:
    mode: RateMode
    explicit_rate: Optional[float] = None
    distance: Optional[float] = None  # m
    path_loss_exponent: Optional[float] = None
    reference_gain: Optional[float] = None  # linear channel gain at 1 m
    table: Optional[tuple] = None  # ((K, R), ...) sorted by K

    def __post_init__(self):
        try:
            mode = RateMode(self.mode)
        except ValueError:
            raise ValidationError(f"unknown rate mode {self.mode!r}") from None
        object.__setattr__(self, "mode", mode)
        fields = {
            RateMode.EXPLICIT: ("explicit_rate",),
            RateMode.LINK_BUDGET: ("distance", "path_loss_exponent", "reference_gain"),
            RateMode.TABLE: ("table",),
        }
        for m, names in fields.items():
            for name in names:
                present = getattr(self, name) is not None
                if m is mode and not present:
                    raise ValidationError(f"{mode.value} rate model needs {name}")
                if m is not mode and present:
                    raise ValidationError(f"{name} is not used by the {mode.value} rate model")
        if mode is RateMode.EXPLICIT and not (self.explicit_rate >= 0 and math.isfinite(self.explicit_rate)):
            raise ValidationError(f"explicit rate must be finite and >= 0, got {self.explicit_rate!r}")
        if mode is RateMode.LINK_BUDGET:
            for name in ("distance", "path_loss_exponent", "reference_gain"):
                v = getattr(self, name)
                if not (v > 0 and math.isfinite(v)):
                    raise ValidationError(f"{name} must be positive and finite, got {v!r}")
        if mode is RateMode.TABLE:
            table = tuple((int(k), float(r)) for k, r in self.table)
            ks = [k for k, _ in table]
            if not table:
                raise ValidationError("rate table is empty")
            if any(b <= a for a, b in zip(ks, ks[1:])):
                raise ValidationError("rate table users must be unique and sorted ascending")
            if any(not (r >= 0 and math.isfinite(r)) for _, r in table):
                raise ValidationError("rate table entries must be finite and >= 0")
            object.__setattr__(self, "table", table)

    @classmethod
    def explicit(cls, rate: float) -> "RateModel":
        return cls(RateMode.EXPLICIT, explicit_rate=rate)

    @classmethod
    def link_budget(cls, distance: float, path_loss_exponent: float, reference_gain: float) -> "RateModel":
        return cls(RateMode.LINK_BUDGET, distance=distance, path_loss_exponent=path_loss_exponent,
                   reference_gain=reference_gain)

    @classmethod
    def from_table(cls, pairs) -> "RateModel":
        return cls(RateMode.TABLE, table=tuple(pairs))


def per_user_snr(rm: RateModel, p: SystemParams) -> float:
    gain = rm.distance ** (-rm.path_loss_exponent) * rm.reference_gain
    return (p.transmit_power / p.users) * gain / (p.noise_density * p.bandwidth)


def rate(rm: RateModel, p: SystemParams) -> float:
    """Sum transmission rate in bits/s."""
    if rm.mode is RateMode.EXPLICIT:
        return rm.explicit_rate
    if rm.mode is RateMode.TABLE:
        for k, r in rm.table:
            if k == p.users:
                return r
        avail = ", ".join(str(k) for k, _ in rm.table)
        raise ValidationError(f"rate table has no entry for K={p.users}; available K: {avail}")
    if p.bandwidth == 0:
        return 0.0
    K = p.users
    pilot_free = 1.0 - K / coherence_block_symbols(p)
    # log1p keeps full precision in the power-limited regime (SNR << 1)
    return p.bandwidth * pilot_free * K * math.log1p(per_user_snr(rm, p)) / math.log(2.0)
