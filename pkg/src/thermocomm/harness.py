"""Parameter sweeps, per-cycle stage reports and baseline gap comparison."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .errors import ValidationError
from .link import rate
from .processing import MODULATIONS, SystemParams, flo_heat, processing_dissipation
from .scenario import Scenario
from .transmission import Stage, TransmissionReport, transmission_total

STAGE_KEYS = tuple(s.value for s in Stage)

# Published gap estimates, carried as text only.  Nothing in this module
# computes or checks against them.
REPORTED_GAPS = {
    "CE": "published estimate: about 3 orders of magnitude (reference only, not computed)",
    "LP": "published estimate: about 3 orders of magnitude (reference only, not computed)",
    "CD": "published estimate: about 8 orders of magnitude (reference only, not computed)",
    "IT": "published estimate: more than 7 orders of magnitude for transmission (reference only, not computed)",
}
for _k in STAGE_KEYS:
    REPORTED_GAPS[_k] = REPORTED_GAPS["IT"]


@dataclass(frozen=True)
class Point:
    """All model outputs at one operating point."""

    params: SystemParams
    rate: Optional[float]
    processing: Optional[object]  # ProcessingReport
    transmission: Optional[TransmissionReport]


def evaluate(s: Scenario, p: Optional[SystemParams] = None) -> Point:
    p = p or s.system
    proc = trans = r = None
    if "processing" in s.models:
        r = rate(s.rate_model, p)
        proc = processing_dissipation(p, r, s.context, s.residuals.get("processing"))
    if "transmission" in s.models:
        trans = transmission_total(s.stage_params(p), p.bandwidth, s.context, s.residuals.get("transmission"))
    return Point(p, r, proc, trans)


def sweep_columns(s: Scenario, scale_free: bool = False) -> list[tuple[str, str]]:
    cols = [(s.sweep_variable or "point", {"bandwidth": "Hz"}.get(s.sweep_variable, "1"))]
    power_cols = []
    if "processing" in s.models:
        cols.append(("rate_bps", "bit/s"))
        power_cols += [f"Q_{k}_W" for k in MODULATIONS] + ["Q_IP_W"]
    if "transmission" in s.models:
        present = [st.stage.value for st in s.stages]
        power_cols += [f"Q_{k}_W" for k in STAGE_KEYS if k in present] + ["Q_IT_W"]
    if "processing" in s.models and "transmission" in s.models:
        power_cols.append("Q_total_W")
    cols += [(c, "W") for c in power_cols]
    if scale_free:
        cols += [(c[:-2] + "_per_kT", "1/s") for c in power_cols]
        cols += [(c[:-2] + "_per_kTB", "1") for c in power_cols]
    return cols


def _row(s: Scenario, value, scale_free: bool) -> tuple:
    try:
        pt = evaluate(s, s.at(value))
    except ValidationError as exc:
        raise ValidationError(f"at {s.sweep_variable}={value}: {exc}") from None
    powers = []
    out = [value]
    if pt.processing is not None:
        out.append(pt.rate)
        d = pt.processing.dissipation
        powers += [d[k] for k in MODULATIONS] + [pt.processing.total]
    if pt.transmission is not None:
        by_stage = {e.stage.value: e.power_W for e in pt.transmission.entries}
        powers += [by_stage[k] for k in STAGE_KEYS if k in by_stage] + [pt.transmission.total]
    if pt.processing is not None and pt.transmission is not None:
        powers.append(pt.processing.total + pt.transmission.total)
    out += powers
    if scale_free:
        kT = s.context.kT
        out += [q / kT for q in powers]
        B = pt.params.bandwidth
        out += [q / (kT * B) if B > 0 else math.nan for q in powers]
    return tuple(out)


@dataclass(frozen=True)
class SweepResult:
    variable: str
    columns: tuple  # ((name, unit), ...)
    rows: tuple
    provenance: dict = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return [c for c, _ in self.columns]

    def column(self, name: str) -> list:
        i = self.names.index(name)
        return [r[i] for r in self.rows]

    def consistency_errors(self, rel: float = 1e-12) -> list[str]:
        """Rows whose totals differ from the sum of their components."""
        names = self.names
        groups = {
            "Q_IP_W": [f"Q_{k}_W" for k in MODULATIONS],
            "Q_IT_W": [f"Q_{k}_W" for k in STAGE_KEYS],
            "Q_total_W": ["Q_IP_W", "Q_IT_W"],
        }
        errors = []
        for total, parts in groups.items():
            if total not in names:
                continue
            parts = [p for p in parts if p in names]
            for r in self.rows:
                want = math.fsum(r[names.index(p)] for p in parts)
                got = r[names.index(total)]
                if abs(got - want) > rel * max(abs(want), abs(got)):
                    errors.append(f"{self.variable}={r[0]}: {total}={got!r} but components sum to {want!r}")
        return errors

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")  # RFC 4180 line endings
        w.writerow(self.names)
        for r in self.rows:
            w.writerow([format_number(v) for v in r])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, variable: Optional[str] = None, units: Optional[dict] = None) -> "SweepResult":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        rows = tuple(tuple(parse_number(v) for v in row) for row in reader if row)
        units = units or {}
        return cls(variable or header[0], tuple((h, units.get(h, "")) for h in header), rows)

    def metadata(self) -> dict:
        return {
            "variable": self.variable,
            "columns": [{"name": n, "unit": u} for n, u in self.columns],
            "provenance": dict(self.provenance),
        }


def format_number(v) -> str:
    """Shortest decimal string that parses back to the same double."""
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def run_sweep(s: Scenario, scale_free: bool = False, workers: int = 1) -> SweepResult:
    """Evaluate the scenario's models at every grid point, in grid order."""
    if s.sweep_variable is None:
        raise ValidationError(f"scenario {s.name!r} has no sweep section")
    grid = [float(v) if s.sweep_variable == "bandwidth" else int(v) for v in sorted(s.grid)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda v: _row(s, v, scale_free), grid))
    else:
        rows = [_row(s, v, scale_free) for v in grid]
    provenance = {
        "scenario": s.name,
        "scenario_sha256": s.sha256,
        "tool": "thermocomm",
        "tool_version": __version__,
        "temperature_K": s.context.temperature,
        "reference_power_W": s.reference_power,
    }
    return SweepResult(s.sweep_variable, tuple(sweep_columns(s, scale_free)), tuple(rows), provenance)


def per_cycle_report(s: Scenario) -> TransmissionReport:
    """Per-device, per-cycle stage heats at the scenario's base point; needs all five stages."""
    present = {st.stage for st in s.stages}
    missing = [st.value for st in Stage if st not in present]
    if missing:
        raise ValidationError(f"per-cycle report needs all five stages; missing: {', '.join(missing)}")
    return transmission_total(s.stage_params(), s.system.bandwidth, s.context)


@dataclass(frozen=True)
class GapEntry:
    modulation: str
    theoretical_W: float
    practical_W: Optional[float]
    gap_orders: Optional[float]
    status: str
    source: str = ""
    annotation: str = ""

    def as_dict(self) -> dict:
        return {
            "modulation": self.modulation,
            "theoretical_W": self.theoretical_W,
            "practical_W": self.practical_W,
            "gap_orders": self.gap_orders,
            "status": self.status,
            "source": self.source,
            "annotation": self.annotation,
        }


def theoretical_minimum(s: Scenario) -> dict:
    """Information-only dissipation (residuals zero) of every modulation, in W."""
    p = s.system
    r = rate(s.rate_model, p)
    proc = processing_dissipation(p, r, s.context)
    out = dict(proc.information)
    out["IP"] = proc.information_total
    trans = transmission_total(s.stage_params(p), p.bandwidth, s.context) if s.stages else None
    if trans is not None:
        for e in trans.entries:
            out[e.stage.value] = e.information_W
        out["IT"] = trans.information_total
    return out


def compare_baselines(s: Scenario) -> list[GapEntry]:
    """log10(practical / theoretical minimum) per modulation with a baseline."""
    theory = theoretical_minimum(s)
    p = s.system
    entries = []
    for key in ("CE", "LP", "CD", "IP") + STAGE_KEYS + ("IT",):
        if key not in theory:
            continue
        t = theory[key]
        b = s.baselines.get(key)
        note = REPORTED_GAPS.get(key, "")
        if b is None:
            entries.append(GapEntry(key, t, None, None, "no baseline provided", annotation=note))
            continue
        practical = b.value
        if b.unit == "J/FLO":
            practical = b.value * t / flo_heat(p, s.context)
        if not t > 0:
            entries.append(GapEntry(key, t, practical, None,
                                    "theoretical minimum is not positive; gap undefined", b.source, note))
            continue
        entries.append(GapEntry(key, t, practical, math.log10(practical / t), "ok", b.source, note))
    return entries


def gnuplot_script(result: SweepResult, csv_path: str, title: str = "") -> str:
    """Plain-text gnuplot script plotting every W column against the sweep variable."""
    names = result.names
    log_x = result.variable == "bandwidth"
    lines = [
        f"# generated by thermocomm {__version__}",
        "set datafile separator ','",
        "set key outside right",
        "set logscale y",
        f"set xlabel '{result.variable}'",
        "set ylabel 'energy dissipation (W)'",
    ]
    if log_x:
        lines.append("set logscale x")
    if title:
        lines.append(f"set title '{title}'")
    series = [
        f"'{csv_path}' using 1:{i + 1} skip 1 with linespoints title '{n[:-2]}'"
        for i, n in enumerate(names) if n.endswith("_W")
    ]
    lines.append("plot " + ", \\\n     ".join(series))
    return "\n".join(lines) + "\n"
