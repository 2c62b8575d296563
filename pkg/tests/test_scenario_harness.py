import dataclasses
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermocomm import ValidationError
from thermocomm.harness import (
    REPORTED_GAPS,
    SweepResult,
    compare_baselines,
    evaluate,
    gnuplot_script,
    per_cycle_report,
    run_sweep,
    theoretical_minimum,
)
from thermocomm.processing import flo_heat
from thermocomm.scenario import (
    SHIPPED,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_to_dict,
    shipped_scenario_bytes,
)
from thermocomm.transmission import Stage


def doc(name="table1"):
    return json.loads(shipped_scenario_bytes(name))


def numeric_leaves(node, path=""):
    if isinstance(node, bool):
        return
    if isinstance(node, (int, float)):
        yield path
    elif isinstance(node, dict):
        for k, v in node.items():
            yield from numeric_leaves(v, f"{path}.{k}" if path else k)
    elif isinstance(node, list):
        for v in node:
            # stages are keyed by their name, grids and tables by the list itself
            if isinstance(v, dict) and "stage" in v:
                yield from numeric_leaves({k: x for k, x in v.items() if k != "stage"}, f"{path}.{v['stage']}")
            else:
                yield from numeric_leaves(v, path)


class TestShippedScenarios:
    @pytest.mark.parametrize("name", SHIPPED)
    def test_loads(self, name):
        s = load_scenario(name)
        assert s.name == name and len(s.sha256) == 64

    @pytest.mark.parametrize("name", SHIPPED)
    def test_every_numeric_value_has_a_source(self, name):
        d = doc(name)
        sources = d["sources"]
        body = {k: v for k, v in d.items() if k != "sources"}
        missing = []
        for leaf in set(numeric_leaves(body)):
            parts = leaf.split(".")
            if not any(".".join(parts[:i]) in sources for i in range(1, len(parts) + 1)):
                missing.append(leaf)
        assert not missing, f"{name}: no source for {sorted(missing)}"
        assert all(v.split(":")[0] in ("published", "calibrated", "default", "illustrative") for v in sources.values())

    @pytest.mark.parametrize("name", SHIPPED)
    def test_round_trip(self, name):
        s = load_scenario(name)
        again = loads_scenario(dumps_scenario(s))
        assert dataclasses.replace(again, sha256="") == dataclasses.replace(s, sha256="")
        assert scenario_to_dict(again) == scenario_to_dict(s)


class TestScenarioValidation:
    def mutate(self, fn, name="fig5"):
        d = doc(name)
        fn(d)
        return json.dumps(d)

    @pytest.mark.parametrize("fn,needle", [
        (lambda d: d.pop("name"), "name"),
        (lambda d: d["system"].update(antennas="many"), "system/antennas"),
        (lambda d: d["sweep"].update(grid=[2e7, 1e7]), "strictly increasing"),
        (lambda d: d["sweep"].update(grid=[]), "grid"),
        (lambda d: d["sweep"].update(variable="users", grid=[1.5, 2]), "integers"),
        (lambda d: d["system"].update(users=5000), "exceed"),
        (lambda d: d.update(sources={"x": "folklore"}), "sources"),
        (lambda d: d.update(rate={"mode": "explicit"}), "rate"),
        (lambda d: d["system"].update(noise_density=1e-20), "system"),
        (lambda d: d.update(baselines={"CE": {"value": -1.0, "unit": "W"}}), "baselines"),
        (lambda d: d.update(baselines={"filter": {"value": 1.0, "unit": "J/FLO"}}), "J/FLO"),
        (lambda d: d.update(stages=[{"stage": "mixer"}, {"stage": "mixer"}]), "once"),
    ])
    def test_rejects(self, fn, needle):
        with pytest.raises(ValidationError, match=needle):
            loads_scenario(self.mutate(fn))

    def test_not_json(self):
        with pytest.raises(ValidationError, match="not valid JSON"):
            loads_scenario(b"{")

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(tmp_path / "nope.json")

    def test_hash_tracks_bytes(self):
        raw = shipped_scenario_bytes("fig7")
        assert loads_scenario(raw).sha256 != loads_scenario(raw + b"\n").sha256


class TestEvaluate:
    def test_table1_point(self):
        pt = evaluate(load_scenario("table1"))
        assert pt.rate == pytest.approx(275353002.86256199, rel=1e-12)
        assert pt.processing.information["CE"] == pytest.approx(0.0078880427735862608, rel=1e-12)
        assert pt.transmission.entry("filter").information_W == pytest.approx(1.5990695131957565e-9, rel=1e-12)

    def test_model_selection(self):
        pt = evaluate(load_scenario("fig7"))
        assert pt.processing is None and pt.transmission is not None


class TestSweep:
    def test_fig5_columns(self):
        r = run_sweep(load_scenario("fig5"))
        assert r.names == ["bandwidth", "rate_bps", "Q_CE_W", "Q_LP_W", "Q_CD_W", "Q_IP_W"]
        assert len(r.rows) == 8
        assert not r.consistency_errors()

    def test_table1_has_no_sweep(self):
        with pytest.raises(ValidationError, match="no sweep"):
            run_sweep(load_scenario("table1"))

    def test_workers_do_not_change_output(self):
        s = load_scenario("fig6")
        assert run_sweep(s, workers=4).to_csv() == run_sweep(s).to_csv()

    def test_scale_free_columns(self):
        s = load_scenario("fig8")
        r = run_sweep(s, scale_free=True)
        kT = s.context.kT
        for row in r.rows:
            B = row[0]
            q = row[r.names.index("Q_IT_W")]
            assert row[r.names.index("Q_IT_per_kT")] == pytest.approx(q / kT, rel=1e-15)
            assert row[r.names.index("Q_IT_per_kTB")] == pytest.approx(q / (kT * B), rel=1e-15)

    def test_csv_round_trip_is_exact(self):
        r = run_sweep(load_scenario("fig6"))
        back = SweepResult.from_csv(r.to_csv())
        assert back.rows == r.rows
        assert back.to_csv() == r.to_csv()
        assert r.to_csv().endswith("\r\n")

    def test_consistency_check_catches_tampering(self):
        r = run_sweep(load_scenario("fig5"))
        rows = list(r.rows)
        rows[0] = rows[0][:-1] + (rows[0][-1] * 2,)
        bad = dataclasses.replace(r, rows=tuple(rows))
        assert len(bad.consistency_errors()) == 1

    def test_error_names_grid_point(self):
        d = doc("fig6")
        d["sweep"]["grid"] = [10, 20, 3600]
        with pytest.raises(ValidationError, match="users=3600"):
            run_sweep(loads_scenario(json.dumps(d)))

    def test_provenance(self):
        r = run_sweep(load_scenario("fig8"))
        meta = r.metadata()
        assert meta["provenance"]["scenario_sha256"] == load_scenario("fig8").sha256
        assert {"name": "Q_IT_W", "unit": "W"} in meta["columns"]

    def test_gnuplot(self):
        text = gnuplot_script(run_sweep(load_scenario("fig8")), "fig8.csv", "fig8")
        assert "set logscale y" in text and "'fig8.csv' using 1:2" in text


class TestPerCycle:
    def test_fig7_ranking(self):
        rep = per_cycle_report(load_scenario("fig7"))
        ranked = [e.stage for e in rep.ranked()]
        assert ranked[0] is Stage.FILTER and ranked[1] is Stage.ADC
        gauss = [rep.entry(s).heat_J_per_cycle for s in ("amplifier", "mixer", "phase_shifter")]
        assert gauss[0] == gauss[1] == gauss[2]

    def test_needs_all_stages(self):
        d = doc("fig7")
        d["stages"] = d["stages"][:3]
        with pytest.raises(ValidationError, match="missing: mixer, phase_shifter"):
            per_cycle_report(loads_scenario(json.dumps(d)))


class TestCompare:
    def test_fig9_entries(self):
        entries = {e.modulation: e for e in compare_baselines(load_scenario("fig9"))}
        assert entries["mixer"].status == "no baseline provided"
        assert entries["filter"].gap_orders == pytest.approx(
            math.log10(0.5 / entries["filter"].theoretical_W), rel=1e-14)
        for key, e in entries.items():
            assert e.annotation == REPORTED_GAPS.get(key, "")

    def test_jflo_conversion(self):
        s = load_scenario("fig9")
        theory = theoretical_minimum(s)
        e = {x.modulation: x for x in compare_baselines(s)}["CE"]
        assert e.practical_W == pytest.approx(1e-10 * theory["CE"] / flo_heat(s.system, s.context), rel=1e-14)

    @settings(max_examples=50)
    @given(st.floats(-5, 12))
    def test_gap_is_log_ratio(self, exponent):
        s = load_scenario("table1")
        t = theoretical_minimum(s)["CE"]
        d = doc("table1")
        d["baselines"] = {"CE": {"value": t * 10 ** exponent, "unit": "W", "source": "synthetic"}}
        e = {x.modulation: x for x in compare_baselines(loads_scenario(json.dumps(d)))}["CE"]
        assert e.gap_orders == pytest.approx(exponent, abs=1e-9)

    def test_annotations_are_text_only(self):
        assert all(isinstance(v, str) and "not computed" in v for v in REPORTED_GAPS.values())
