"""JSON scenario files: loading, validation and canonical re-serialization."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .errors import ValidationError
from .link import RateMode, RateModel
from .processing import LDPCCode, SystemParams, dbm_per_hz_to_watts
from .thermo import PhysicalContext
from .transmission import Stage, StageParams

SWEEP_VARIABLES = ("bandwidth", "users", "quantization_bits")
DEFAULT_CHAIN_POWER = 1.0  # W, shared by amplifier, ADC, mixer and phase shifter
DEFAULT_ENTROPY_POWER = 5.0
SHIPPED = ("table1", "fig5", "fig6", "fig7", "fig8", "fig9")


def _schema() -> dict:
    return json.loads(resources.files("thermocomm.scenarios").joinpath("scenario.schema.json").read_text())


@dataclass(frozen=True)
class StageConfig:
    """A stage as configured; unset fields are resolved against the system at each grid point."""

    stage: Stage
    input_power: Optional[float] = None
    device_count: Optional[int] = None
    entropy_power: Optional[float] = None
    step: Optional[float] = None

    def resolve(self, p: SystemParams, reference_power: float) -> StageParams:
        power = self.input_power
        if power is None:
            power = p.transmit_power if self.stage is Stage.FILTER else DEFAULT_CHAIN_POWER
        count = self.device_count
        if count is None:
            count = default_device_count(self.stage, p)
        kwargs = {}
        if self.stage is Stage.FILTER:
            kwargs["noise_density"] = p.noise_density
        elif self.stage is Stage.ADC:
            kwargs["step"] = self.step if self.step is not None else p.quantization_step
        elif self.stage is Stage.AMPLIFIER:
            kwargs["entropy_power"] = self.entropy_power if self.entropy_power is not None else DEFAULT_ENTROPY_POWER
        return StageParams(self.stage, power, count, reference_power, **kwargs)


def default_device_count(stage: Stage, p: SystemParams) -> int:
    """Filters and amplifiers per antenna, ADCs and mixers per RF chain, shifters per antenna-chain pair."""
    return {
        Stage.FILTER: p.antennas,
        Stage.AMPLIFIER: p.antennas,
        Stage.ADC: p.rf_chains,
        Stage.MIXER: p.rf_chains,
        Stage.PHASE_SHIFTER: p.antennas * p.rf_chains,
    }[stage]


@dataclass(frozen=True)
class Baseline:
    value: float
    unit: str  # "W" or "J/FLO"
    source: str = ""


@dataclass(frozen=True)
class Scenario:
    name: str
    system: SystemParams
    rate_model: RateModel
    context: PhysicalContext = field(default_factory=lambda: PhysicalContext(300.0))
    stages: tuple = ()
    reference_power: float = 1.0
    residuals: dict = field(default_factory=lambda: {"processing": {}, "transmission": {}})
    sweep_variable: Optional[str] = None
    grid: tuple = ()
    baselines: dict = field(default_factory=dict)
    models: tuple = ("processing", "transmission")
    description: str = ""
    sources: dict = field(default_factory=dict)
    noise_dbm_per_hz: Optional[float] = None
    sha256: str = ""

    def __post_init__(self):
        if self.sweep_variable is not None:
            if self.sweep_variable not in SWEEP_VARIABLES:
                raise ValidationError(f"unknown sweep variable {self.sweep_variable!r}")
            if not self.grid:
                raise ValidationError("sweep grid must be nonempty")
            if any(not math.isfinite(v) for v in self.grid):
                raise ValidationError("sweep grid values must be finite")
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                raise ValidationError("sweep grid must be strictly increasing")
            if self.sweep_variable != "bandwidth" and any(int(v) != v for v in self.grid):
                raise ValidationError(f"{self.sweep_variable} grid values must be integers")
        for key, b in self.baselines.items():
            if not b.value > 0:
                raise ValidationError(f"baseline {key} must be strictly positive")
            if b.unit == "J/FLO" and key not in ("CE", "LP", "CD", "IP"):
                raise ValidationError(f"baseline {key}: J/FLO only applies to processing modulations")
        stages = [s.stage for s in self.stages]
        if len(set(stages)) != len(stages):
            raise ValidationError("each stage may appear at most once")

    def at(self, value) -> SystemParams:
        """System parameters with the sweep variable set to ``value``."""
        if self.sweep_variable is None:
            return self.system
        if self.sweep_variable == "bandwidth":
            return dataclasses.replace(self.system, bandwidth=float(value))
        return dataclasses.replace(self.system, **{self.sweep_variable: int(value)})

    def stage_params(self, p: Optional[SystemParams] = None) -> list[StageParams]:
        p = p or self.system
        return [s.resolve(p, self.reference_power) for s in self.stages]


def _build(doc: dict, sha: str) -> Scenario:
    sysd = dict(doc["system"])
    ldpc = LDPCCode(**sysd.pop("ldpc", {}))
    dbm = sysd.pop("noise_density_dbm_per_hz", None)
    if dbm is not None:
        sysd["noise_density"] = dbm_per_hz_to_watts(dbm)
    system = SystemParams(ldpc=ldpc, **sysd)

    r = dict(doc["rate"])
    mode = r.pop("mode")
    if mode == "explicit":
        rm = RateModel.explicit(r["rate"])
    elif mode == "link_budget":
        rm = RateModel.link_budget(r["distance"], r["path_loss_exponent"], r["reference_gain"])
    else:
        rm = RateModel.from_table(r["table"])

    stages = tuple(
        StageConfig(Stage.parse(s["stage"]), s.get("input_power"), s.get("device_count"),
                    s.get("entropy_power"), s.get("step"))
        for s in doc.get("stages", [])
    )
    residuals = doc.get("residuals", {})
    sweep = doc.get("sweep")
    baselines = {k: Baseline(v["value"], v["unit"], v.get("source", ""))
                 for k, v in doc.get("baselines", {}).items()}
    return Scenario(
        name=doc["name"],
        system=system,
        rate_model=rm,
        context=PhysicalContext(doc.get("temperature", 300.0)),
        stages=stages,
        reference_power=doc.get("reference_power", 1.0),
        residuals={"processing": dict(residuals.get("processing", {})),
                   "transmission": dict(residuals.get("transmission", {}))},
        sweep_variable=sweep["variable"] if sweep else None,
        grid=tuple(sweep["grid"]) if sweep else (),
        baselines=baselines,
        models=tuple(doc.get("models", ("processing", "transmission"))),
        description=doc.get("description", ""),
        sources=dict(doc.get("sources", {})),
        noise_dbm_per_hz=dbm,
        sha256=sha,
    )


def loads_scenario(data: bytes | str) -> Scenario:
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"scenario is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"scenario schema violation at {path}: {exc.message}") from None
    return _build(doc, hashlib.sha256(data).hexdigest())


def load_scenario(path) -> Scenario:
    """Load a scenario file, or a shipped scenario by bare name (e.g. ``"fig5"``)."""
    p = Path(path)
    if not p.exists() and str(path) in SHIPPED:
        return loads_scenario(shipped_scenario_bytes(str(path)))
    return loads_scenario(p.read_bytes())


def shipped_scenario_bytes(name: str) -> bytes:
    return resources.files("thermocomm.scenarios").joinpath(f"{name}.json").read_bytes()


def scenario_to_dict(s: Scenario) -> dict:
    """Canonical JSON document for ``s``; loading it yields an equal model."""
    p = s.system
    system = {
        "antennas": p.antennas,
        "users": p.users,
        "bandwidth": p.bandwidth,
        "coherence_bandwidth": p.coherence_bandwidth,
        "coherence_time": p.coherence_time,
        "rf_chains": p.rf_chains,
        "transistors": p.transistors,
        "ldpc": {"n": p.ldpc.n, "m": p.ldpc.m, "iterations": p.ldpc.iterations},
        "quantization_bits": p.quantization_bits,
        "transmit_power": p.transmit_power,
    }
    if s.noise_dbm_per_hz is not None:
        system["noise_density_dbm_per_hz"] = s.noise_dbm_per_hz
    else:
        system["noise_density"] = p.noise_density

    rm = s.rate_model
    if rm.mode is RateMode.EXPLICIT:
        rate = {"mode": "explicit", "rate": rm.explicit_rate}
    elif rm.mode is RateMode.LINK_BUDGET:
        rate = {"mode": "link_budget", "distance": rm.distance,
                "path_loss_exponent": rm.path_loss_exponent, "reference_gain": rm.reference_gain}
    else:
        rate = {"mode": "table", "table": [[k, r] for k, r in rm.table]}

    stages = []
    for st in s.stages:
        d = {"stage": st.stage.value}
        for name in ("input_power", "device_count", "entropy_power", "step"):
            v = getattr(st, name)
            if v is not None:
                d[name] = v
        stages.append(d)

    doc = {
        "name": s.name,
        "description": s.description,
        "temperature": s.context.temperature,
        "models": list(s.models),
        "system": system,
        "rate": rate,
        "reference_power": s.reference_power,
        "stages": stages,
        "residuals": {k: dict(v) for k, v in s.residuals.items()},
    }
    if s.sweep_variable is not None:
        doc["sweep"] = {"variable": s.sweep_variable, "grid": list(s.grid)}
    if s.baselines:
        doc["baselines"] = {k: {"value": b.value, "unit": b.unit, "source": b.source}
                            for k, b in s.baselines.items()}
    if s.sources:
        doc["sources"] = dict(s.sources)
    return doc


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"
