"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .circuit import circuit_entropy_flow, circuit_report, parse_netlist, theorem1_lower_bound, uniform_input
from .errors import ValidationError
from .harness import compare_baselines, gnuplot_script, per_cycle_report, run_sweep
from .link import rate
from .processing import processing_dissipation
from .scenario import load_scenario
from .thermo import NAND_UNIFORM_FLOW, Distribution, PhysicalContext, landauer_limit
from .transmission import transmission_total

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3


def _dump(obj, out):
    out.write(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def cmd_limits(args, out):
    ctx = PhysicalContext(args.temperature)
    data = {
        "temperature_K": ctx.temperature,
        "landauer_limit_J": landauer_limit(ctx),
        "nand_per_gate_per_flo_nats": NAND_UNIFORM_FLOW,
        "nand_per_gate_per_flo_J": theorem1_lower_bound(1, 1, ctx),
    }
    if args.json:
        _dump(data, out)
    else:
        out.write(f"temperature                 {ctx.temperature:g} K\n")
        out.write(f"Landauer limit (kT ln 2)    {data['landauer_limit_J']:.6e} J\n")
        out.write(f"NAND per gate per FLO       {data['nand_per_gate_per_flo_J']:.6e} J"
                  f"  ((3/4) ln 3 = {NAND_UNIFORM_FLOW:.6f} nats)\n")


def _read_input_distribution(spec: str, c) -> Distribution:
    if spec == "uniform":
        return uniform_input(c)
    doc = json.loads(Path(spec).read_text())
    if isinstance(doc, dict) and "labels" in doc:
        return Distribution.from_mapping(c.input_labels, dict(zip(doc["labels"], doc["probabilities"])))
    if isinstance(doc, dict):
        return Distribution.from_mapping(c.input_labels, doc)
    raise ValidationError("input distribution file must be a JSON object")


def cmd_circuit(args, out):
    c = parse_netlist(Path(args.netlist).read_text())
    dist = _read_input_distribution(args.input, c)
    residuals = {}
    if args.residuals:
        residuals = json.loads(Path(args.residuals).read_text())
    ctx = PhysicalContext(args.temperature)
    result = circuit_entropy_flow(c, dist, residuals=residuals)
    report = circuit_report(c, result, ctx)
    if args.json:
        _dump(report, out)
        return
    out.write(f"{'gate':<10}{'type':<7}{'dS (nats)':>14}{'mismatch':>14}{'residual':>12}{'S_F (nats)':>14}{'heat (J)':>14}\n")
    for g in report["gates"]:
        a = g["account_nats"]
        out.write(f"{g['gate']:<10}{g['type']:<7}{a['entropy_change']:>14.6f}{a['mismatch']:>14.6f}"
                  f"{a['residual']:>12.6f}{a['entropy_flow']:>14.6f}{g['heat_J']:>14.4e}\n")
    for name, grp in report["groups"].items():
        out.write(f"group {name:<20}S_F = {grp['account_nats']['entropy_flow']:.6f} nats\n")
    t = report["total"]
    out.write(f"total S_F = {t['account_nats']['entropy_flow']:.6f} nats, heat = {t['heat_J']:.6e} J "
              f"at {ctx.temperature:g} K\n")
    if "nand" in report:
        n = report["nand"]
        out.write(f"NAND gates: {n['count']}, uniform-input estimate {n['uniform_input_estimate_nats']:.6f} nats\n")
    out.write(report["units_note"] + "\n")


def cmd_processing(args, out):
    s = load_scenario(args.scenario)
    r = args.rate if args.rate is not None else rate(s.rate_model, s.system)
    rep = processing_dissipation(s.system, r, s.context, s.residuals.get("processing"))
    if args.json:
        _dump(rep.as_dict(), out)
        return
    out.write(f"scenario {s.name}: rate {r:.6g} bit/s, T = {s.context.temperature:g} K\n")
    out.write(f"{'modulation':<12}{'FLO/s':>14}{'information (W)':>18}{'residual (W)':>15}\n")
    for k in rep.flos:
        out.write(f"{k:<12}{rep.flos[k]:>14.6e}{rep.information[k]:>18.6e}{rep.residuals[k]:>15.6e}\n")
    out.write(f"total Q_IP = {rep.total:.6e} W\n")


def cmd_transmission(args, out):
    s = load_scenario(args.scenario)
    if args.per_cycle:
        rep = per_cycle_report(s)
    else:
        rep = transmission_total(s.stage_params(), s.system.bandwidth, s.context, s.residuals.get("transmission"))
    if args.json:
        d = rep.as_dict()
        if args.per_cycle:
            d["ranking"] = [e.stage.value for e in rep.ranked()]
        _dump(d, out)
        return
    entries = rep.ranked() if args.per_cycle else rep.entries
    out.write(f"scenario {s.name}: B = {rep.bandwidth:g} Hz, T = {rep.temperature:g} K, "
              f"reference power {rep.reference_power:g} W\n")
    out.write(f"{'stage':<15}{'devices':>8}{'I (nats)':>12}{'J/cycle':>14}{'power (W)':>14}  warnings\n")
    for e in entries:
        out.write(f"{e.stage.value:<15}{e.device_count:>8}{e.info_nats_per_cycle:>12.6f}"
                  f"{e.heat_J_per_cycle:>14.6e}{e.power_W:>14.6e}  {'; '.join(e.warnings)}\n")
    if not args.per_cycle:
        out.write(f"total Q_IT = {rep.total:.6e} W\n")


def cmd_sweep(args, out):
    s = load_scenario(args.scenario)
    result = run_sweep(s, scale_free=args.scale_free, workers=args.workers)
    text = result.to_csv()
    if args.out in (None, "-"):
        out.write(text)
    else:
        Path(args.out).write_text(text, newline="")
        meta = Path(args.out).with_suffix(Path(args.out).suffix + ".meta.json")
        meta.write_text(json.dumps(result.metadata(), indent=2) + "\n")
    for err in result.consistency_errors():
        sys.stderr.write(f"warning: {err}\n")


def cmd_compare(args, out):
    s = load_scenario(args.scenario)
    entries = compare_baselines(s)
    if args.json:
        _dump([e.as_dict() for e in entries], out)
        return
    out.write(f"{'modulation':<15}{'theoretical (W)':>17}{'practical (W)':>16}{'gap (orders)':>14}\n")
    for e in entries:
        if e.gap_orders is None:
            out.write(f"{e.modulation:<15}{e.theoretical_W:>17.6e}{'':>16}{'':>14}  {e.status}\n")
        else:
            out.write(f"{e.modulation:<15}{e.theoretical_W:>17.6e}{e.practical_W:>16.6e}{e.gap_orders:>14.3f}\n")
        if e.annotation:
            out.write(f"{'':<15}note: {e.annotation}\n")


def cmd_plot_script(args, out):
    s = load_scenario(args.scenario)
    result = run_sweep(s)
    out.write(gnuplot_script(result, args.csv, title=s.name))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thermocomm", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"thermocomm {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limits", help="Landauer limit and NAND per-gate-per-FLO energy")
    p.add_argument("--temperature", type=float, default=300.0, help="kelvin (default 300)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("circuit", help="stochastic logic circuit analysis")
    csub = p.add_subparsers(dest="circuit_command", required=True)
    a = csub.add_parser("analyze", help="entropy-flow report for a netlist")
    a.add_argument("netlist")
    a.add_argument("--input", default="uniform",
                   help="'uniform' or a JSON file mapping joint input labels to probabilities")
    a.add_argument("--residuals", help="JSON file mapping gate names to residual entropy production (nats)")
    a.add_argument("--temperature", type=float, default=300.0)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_circuit)

    p = sub.add_parser("processing", help="information-processing dissipation report")
    p.add_argument("--scenario", required=True, help="scenario JSON file or shipped scenario name")
    p.add_argument("--rate", type=float, help="override the transmission rate (bit/s)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_processing)

    p = sub.add_parser("transmission", help="information-transmission dissipation report")
    p.add_argument("--scenario", required=True)
    p.add_argument("--per-cycle", action="store_true", help="rank per-device heat per measurement-erasure cycle")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_transmission)

    p = sub.add_parser("sweep", help="run the scenario's parameter sweep to CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", help="CSV path (default stdout); a .meta.json sidecar records provenance")
    p.add_argument("--scale-free", action="store_true", help="add columns in units of kT and kT*B")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="gap between practical baselines and theoretical minima")
    p.add_argument("--scenario", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot-script", help="emit a gnuplot script for a sweep CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--csv", required=True, help="path of the CSV produced by 'sweep'")
    p.set_defaults(func=cmd_plot_script)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON: {exc}\n")
        return EXIT_VALIDATION
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
