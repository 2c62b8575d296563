"""FLO-count dissipation model for baseband information processing.

Every modulation's information dissipation is its FLO rate times the heat
of one FLO on ``N`` NAND gates with uniform inputs, (3/4) ln 3 * kT * N.
Residuals are physical-implementation constants in watts added on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import ValidationError
from .thermo import NAND_UNIFORM_FLOW, PhysicalContext

MODULATIONS = ("CE", "LP", "CD")  # channel estimation, linear processing, channel coding


def dbm_per_hz_to_watts(dbm_per_hz: float) -> float:
    return 10.0 ** (dbm_per_hz / 10.0) / 1000.0


@dataclass(frozen=True)
class LDPCCode:
    n: int = 648
    m: int = 324
    iterations: int = 10

    def __post_init__(self):
        if not (self.n >= 2 and self.n > self.m >= 1):
            raise ValidationError(f"LDPC code needs n > m >= 1 and n >= 2, got n={self.n}, m={self.m}")
        if self.iterations < 1:
            raise ValidationError("LDPC iterations must be >= 1")


@dataclass(frozen=True)
class SystemParams:
    """Massive MIMO system parameters; defaults follow the simulation table."""

    antennas: int = 256
    users: int = 20
    bandwidth: float = 100e6  # Hz
    coherence_bandwidth: float = 100e6  # Hz
    coherence_time: float = 35e-6  # s
    rf_chains: int = 32
    transistors: float = 1e8
    ldpc: LDPCCode = field(default_factory=LDPCCode)
    quantization_bits: int = 8
    transmit_power: float = 5.0  # W
    noise_density: float = dbm_per_hz_to_watts(-174.0)  # W/Hz

    def __post_init__(self):
        for name in ("antennas", "users", "rf_chains", "quantization_bits"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValidationError(f"{name} must be an integer >= 1, got {v!r}")
        if not self.transistors >= 1:
            raise ValidationError(f"transistors must be >= 1, got {self.transistors!r}")
        # zero bandwidth is admitted as a degenerate idle system
        if not (self.bandwidth >= 0 and math.isfinite(self.bandwidth)):
            raise ValidationError(f"bandwidth must be finite and >= 0, got {self.bandwidth!r}")
        for name in ("coherence_bandwidth", "coherence_time", "transmit_power", "noise_density"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be positive and finite, got {v!r}")
        if not isinstance(self.ldpc, LDPCCode):
            raise ValidationError("ldpc must be an LDPCCode")
        u = self.coherence_bandwidth * self.coherence_time
        if u < 1:
            raise ValidationError(f"coherence block holds {u!r} symbols; need at least 1")
        if self.users > u:
            raise ValidationError(f"users ({self.users}) exceed coherence block symbols ({u:g})")

    @property
    def quantization_step(self) -> float:
        return 2.0 ** -self.quantization_bits


def coherence_block_symbols(p: SystemParams) -> float:
    """Symbols per coherence block, U = B_c * T_c."""
    return p.coherence_bandwidth * p.coherence_time


def coherence_blocks_per_second(p: SystemParams) -> float:
    return p.bandwidth / coherence_block_symbols(p)


def flos_channel_estimation(p: SystemParams) -> float:
    M, K = p.antennas, p.users
    per_block = 6 * M * K ** 2 + 2 * M * K * (K - 1)
    return coherence_blocks_per_second(p) * per_block


def flos_linear_processing(p: SystemParams, rate: float) -> float:
    """Precoding per symbol vector plus MRT/MRC normalization once per block."""
    if rate < 0:
        raise ValidationError(f"rate must be >= 0, got {rate!r}")
    M, K, NRF = p.antennas, p.users, p.rf_chains
    per_symbol = 6 * NRF * K + 2 * NRF * (K - 1)
    per_block = 12 * M * K + 2 * (M - 1) * K
    return rate / K * per_symbol + coherence_blocks_per_second(p) * per_block


def flos_channel_coding(p: SystemParams, rate: float) -> float:
    """Soft-decision LDPC decoding; encoding is neglected."""
    if rate < 0:
        raise ValidationError(f"rate must be >= 0, got {rate!r}")
    c = p.ldpc
    return c.n * (c.n - 2) * c.iterations * rate / c.m


def flo_heat(p: SystemParams, ctx: PhysicalContext) -> float:
    """Minimum heat (J) of one FLO on the circuit's transistor count."""
    return NAND_UNIFORM_FLOW * ctx.kT * p.transistors


@dataclass(frozen=True)
class ProcessingReport:
    flos: dict  # modulation -> FLO/s
    information: dict  # modulation -> W
    residuals: dict  # modulation -> W
    rate: float

    @property
    def dissipation(self) -> dict:
        return {k: self.information[k] + self.residuals[k] for k in MODULATIONS}

    @property
    def information_total(self) -> float:
        return math.fsum(self.information.values())

    @property
    def total(self) -> float:
        return math.fsum(self.information.values()) + math.fsum(self.residuals.values())

    def as_dict(self) -> dict:
        return {
            "rate_bps": self.rate,
            "flos_per_s": dict(self.flos),
            "information_W": dict(self.information),
            "residual_W": dict(self.residuals),
            "dissipation_W": self.dissipation,
            "total_W": self.total,
        }


def _residuals(residuals: Optional[Mapping[str, float]]) -> dict:
    out = {k: 0.0 for k in MODULATIONS}
    for k, v in (residuals or {}).items():
        if k not in out:
            raise ValidationError(f"unknown processing modulation {k!r}; expected one of {MODULATIONS}")
        if not (v >= 0 and math.isfinite(v)):
            raise ValidationError(f"residual for {k} must be finite and >= 0, got {v!r}")
        out[k] = float(v)
    return out


def processing_dissipation(p: SystemParams, rate: float, ctx: PhysicalContext,
                           residuals: Optional[Mapping[str, float]] = None) -> ProcessingReport:
    flos = {
        "CE": flos_channel_estimation(p),
        "LP": flos_linear_processing(p, rate),
        "CD": flos_channel_coding(p, rate),
    }
    per_flo = flo_heat(p, ctx)
    info = {k: per_flo * v for k, v in flos.items()}
    return ProcessingReport(flos, info, _residuals(residuals), float(rate))


def processing_total_closed_form(p: SystemParams, rate: float, ctx: PhysicalContext,
                                 residual_total: float = 0.0) -> float:
    """Total processing dissipation from the combined single-bracket expression.

    Independent of :func:`processing_dissipation`: channel estimation and the
    per-block part of linear processing are merged into 8MK^2 + 2(6M-1)K.
    """
    M, K, NRF = p.antennas, p.users, p.rf_chains
    c = p.ldpc
    u = p.coherence_bandwidth * p.coherence_time
    bracket = (
        p.bandwidth / u * (8 * M * K ** 2 + 2 * (6 * M - 1) * K)
        + rate / K * (6 * NRF * K + 2 * NRF * (K - 1))
        + c.n * (c.n - 2) * c.iterations * rate / c.m
    )
    return 0.75 * math.log(3.0) * bracket * ctx.boltzmann_constant * ctx.temperature * p.transistors + residual_total
