"""Measurement-erasure dissipation of the analog transmission chain.

Each stage acquires I nats of information about its input per cycle and
must pay at least kT*I to erase it again; with one cycle per unit of
bandwidth the information dissipation of a stage is device_count*kT*I*B.

Powers enter logarithms, so they are divided by a reference power (1 W by
default) first.  The filter only sees the ratio P/(N0 B) and is unaffected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import ValidationError
from .thermo import PhysicalContext

TWO_PI_E = 2.0 * math.pi * math.e


class Stage(str, enum.Enum):
    FILTER = "filter"
    AMPLIFIER = "amplifier"
    ADC = "adc"
    MIXER = "mixer"
    PHASE_SHIFTER = "phase_shifter"

    @classmethod
    def parse(cls, value) -> "Stage":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ValidationError(f"unknown stage {value!r}; expected one of {names}") from None


@dataclass(frozen=True)
class StageParams:
    stage: Stage
    input_power: float  # W
    device_count: int = 1
    reference_power: float = 1.0  # W
    noise_density: Optional[float] = None  # W/Hz, filter only
    step: Optional[float] = None  # quantization step, ADC only
    entropy_power: Optional[float] = None  # amplifier only

    def __post_init__(self):
        object.__setattr__(self, "stage", Stage.parse(self.stage))
        if not (self.input_power > 0 and math.isfinite(self.input_power)):
            raise ValidationError(f"{self.stage.value}: input power must be positive, got {self.input_power!r}")
        if not (self.reference_power > 0 and math.isfinite(self.reference_power)):
            raise ValidationError(f"reference power must be positive, got {self.reference_power!r}")
        if int(self.device_count) != self.device_count or self.device_count < 0:
            raise ValidationError(f"{self.stage.value}: device count must be an integer >= 0")
        required = {Stage.FILTER: "noise_density", Stage.ADC: "step"}.get(self.stage)
        if required and getattr(self, required) is None:
            raise ValidationError(f"{self.stage.value}: {required} is required")
        for name in ("noise_density", "step", "entropy_power"):
            v = getattr(self, name)
            if v is not None and not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{self.stage.value}: {name} must be positive, got {v!r}")

    @property
    def normalized_power(self) -> float:
        return self.input_power / self.reference_power


def stage_information(s: StageParams, bandwidth: float) -> float:
    """Mutual information (nats) acquired by one device in one cycle."""
    if s.stage is Stage.FILTER:
        if not bandwidth > 0:
            raise ValidationError(f"filter needs a positive bandwidth, got {bandwidth!r}")
        return 0.5 * math.log1p(s.input_power / (s.noise_density * bandwidth))
    if s.stage is Stage.ADC:
        # quantization noise power is step^2 / 12
        return 0.5 * math.log(12.0 * s.normalized_power / s.step ** 2)
    # amplifier, mixer and phase shifter: Gaussian input entropy
    return 0.5 * math.log(TWO_PI_E * s.normalized_power)


@dataclass(frozen=True)
class StageEntry:
    stage: Stage
    device_count: int
    info_nats_per_cycle: float
    heat_J_per_cycle: float
    information_W: float
    residual_W: float
    output_power: Optional[float] = None
    warnings: tuple = ()

    @property
    def power_W(self) -> float:
        return self.information_W + self.residual_W

    def as_dict(self) -> dict:
        d = {
            "stage": self.stage.value,
            "device_count": self.device_count,
            "info_nats_per_cycle": self.info_nats_per_cycle,
            "heat_J_per_cycle": self.heat_J_per_cycle,
            "information_W": self.information_W,
            "residual_W": self.residual_W,
            "power_W": self.power_W,
            "warnings": list(self.warnings),
        }
        if self.output_power is not None:
            d["output_power_W"] = self.output_power
        return d


def stage_dissipation(s: StageParams, bandwidth: float, ctx: PhysicalContext,
                      residual: float = 0.0) -> StageEntry:
    if not (residual >= 0 and math.isfinite(residual)):
        raise ValidationError(f"{s.stage.value}: residual must be finite and >= 0, got {residual!r}")
    if not (bandwidth >= 0 and math.isfinite(bandwidth)):
        raise ValidationError(f"bandwidth must be finite and >= 0, got {bandwidth!r}")
    if s.stage is Stage.FILTER and bandwidth == 0:
        info = 0.0  # no cycles run; the B -> 0 limit of B*I is 0 as well
    else:
        info = stage_information(s, bandwidth)
    warnings = ()
    if info <= 0 and not (s.stage is Stage.FILTER and bandwidth == 0):
        warnings = (f"nonpositive information {info:.6g} nats; input power is below the "
                    "stage's reference level, result kept unclamped",)
    per_cycle = ctx.kT * info
    output_power = None
    if s.stage is Stage.AMPLIFIER and s.entropy_power is not None:
        output_power = s.input_power * s.entropy_power
    return StageEntry(s.stage, int(s.device_count), info, per_cycle,
                      s.device_count * per_cycle * bandwidth, float(residual), output_power, warnings)


@dataclass(frozen=True)
class TransmissionReport:
    entries: tuple
    bandwidth: float
    temperature: float
    reference_power: float

    def entry(self, stage) -> StageEntry:
        stage = Stage.parse(stage)
        for e in self.entries:
            if e.stage is stage:
                return e
        raise KeyError(stage.value)

    @property
    def total(self) -> float:
        return math.fsum(e.power_W for e in self.entries)

    @property
    def information_total(self) -> float:
        return math.fsum(e.information_W for e in self.entries)

    def ranked(self, key: str = "heat_J_per_cycle") -> list:
        """Entries sorted from largest to smallest ``key``."""
        return sorted(self.entries, key=lambda e: getattr(e, key), reverse=True)

    def as_dict(self) -> dict:
        return {
            "bandwidth_Hz": self.bandwidth,
            "temperature_K": self.temperature,
            "reference_power_W": self.reference_power,
            "stages": [e.as_dict() for e in self.entries],
            "total_W": self.total,
        }


def transmission_total(stages: Iterable[StageParams], bandwidth: float, ctx: PhysicalContext,
                       residuals: Optional[Mapping[str, float]] = None) -> TransmissionReport:
    stages = list(stages)
    residuals = {Stage.parse(k): v for k, v in (residuals or {}).items()}
    seen = set()
    for s in stages:
        if s.stage in seen:
            raise ValidationError(f"duplicate stage {s.stage.value!r}")
        seen.add(s.stage)
    extra = set(residuals) - seen
    if extra:
        raise ValidationError(f"residual given for absent stage(s): {sorted(e.value for e in extra)}")
    refs = {s.reference_power for s in stages}
    if len(refs) > 1:
        raise ValidationError("all stages must share one reference power")
    entries = tuple(stage_dissipation(s, bandwidth, ctx, residuals.get(s.stage, 0.0)) for s in stages)
    return TransmissionReport(entries, float(bandwidth), ctx.temperature, refs.pop() if refs else 1.0)


def measurement_erasure_bound(information: float, ctx: PhysicalContext) -> float:
    """Minimum work (J) of one measurement-erasure cycle acquiring ``information`` nats."""
    if not information >= 0:
        raise ValidationError(f"mutual information must be >= 0, got {information!r}")
    return ctx.kT * information
