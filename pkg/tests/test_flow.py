import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermocomm import NAND_UNIFORM_FLOW, Distribution, EnumerationLimitError, ValidationError
from thermocomm.circuit import (
    circuit_entropy_flow,
    circuit_report,
    nand_entropy_flow,
    parse_netlist,
    propagate,
    theorem1_lower_bound,
    uniform_input,
)
from thermocomm.circuit.flow import run_propagation

import oracles
from conftest import MAJORITY, MAJORITY_GATES

# mpmath, 50 digits
THREE_QUARTER_LN3 = 0.82395921650108226835


def random_input(c, seed):
    rng = np.random.default_rng(seed)
    w = rng.random(len(c.input_labels))
    w[rng.random(w.size) < 0.3] = 0.0
    if w.sum() == 0:
        w[0] = 1.0
    return Distribution.normalized(c.input_labels, w)


class TestPropagation:
    @settings(max_examples=50)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_majority_matches_enumeration(self, seed):
        c = parse_netlist(MAJORITY)
        p = random_input(c, seed)
        probs = {tuple(int(b) for b in l): p[l] for l in c.input_labels}
        ref = oracles.enumerate_circuit(["a", "b", "c"], MAJORITY_GATES, probs)
        for trace in propagate(c, p):
            ini, end = ref[trace.gate]
            for label, v in trace.initial_distribution.as_dict().items():
                assert v == pytest.approx(ini.get(label, 0.0), abs=1e-12)
            for label, v in trace.end_distribution.as_dict().items():
                assert v == pytest.approx(end.get(label, 0.0), abs=1e-12)

    def test_majority_output_is_majority(self, majority):
        prop = run_propagation(majority, uniform_input(majority))
        joint = prop.joint
        for a, b, c in itertools.product((0, 1), repeat=3):
            idx = [a, b, c] + [slice(None)] * (joint.ndim - 3)
            sub = joint[tuple(idx)]
            out_axis = prop.wires.index("out") - 3
            out = np.unravel_index(np.argmax(sub), sub.shape)[out_axis]
            assert out == int(a + b + c >= 2)

    def test_repeated_wire_takes_diagonal(self):
        c = parse_netlist("inputs a\ngate G AND a a -> y\n")
        t = propagate(c, Distribution(["0", "1"], [0.3, 0.7]))[0]
        assert t.initial_distribution.as_dict() == pytest.approx({"00": 0.3, "01": 0, "10": 0, "11": 0.7})
        assert t.end_distribution["1"] == pytest.approx(0.7)
        assert t.input_correlation == 0.0

    def test_input_correlation_reported(self, majority):
        traces = {t.gate: t for t in propagate(majority, uniform_input(majority))}
        assert traces["AND1"].input_correlation == pytest.approx(0.0, abs=1e-15)
        assert traces["XOR2"].input_correlation > 1e-3

    def test_wrong_input_space(self, majority):
        with pytest.raises(ValidationError):
            propagate(majority, Distribution.uniform(["00", "01", "10", "11"]))

    def test_enumeration_limit(self):
        names = " ".join(f"x{i}" for i in range(21))
        c = parse_netlist(f"inputs {names}\n")
        with pytest.raises(EnumerationLimitError):
            propagate(c, Distribution.uniform(c.input_labels[:1]))


class TestAccounts:
    def test_erase_is_landauer(self, erase_circuit):
        r = circuit_entropy_flow(erase_circuit, uniform_input(erase_circuit))
        a = r.accounts["E"]
        assert a.entropy_change == pytest.approx(math.log(2), abs=1e-15)
        assert a.mismatch == pytest.approx(0.0, abs=1e-15)
        assert a.entropy_flow == pytest.approx(math.log(2), abs=1e-15)

    def test_nand_uniform(self, nand_circuit):
        r = circuit_entropy_flow(nand_circuit, uniform_input(nand_circuit))
        assert r.total.entropy_flow == pytest.approx(THREE_QUARTER_LN3, abs=1e-12)
        assert NAND_UNIFORM_FLOW == pytest.approx(THREE_QUARTER_LN3, abs=1e-15)

    def test_id_gate_flow_is_zero(self):
        c = parse_netlist("inputs a b\ngate I ID a b -> y\n")
        r = circuit_entropy_flow(c, random_input(c, 3))
        assert r.total.entropy_flow == pytest.approx(0.0, abs=1e-14)

    def test_and_gate_against_mpmath(self):
        c = parse_netlist("inputs a b\ngate G AND a b -> y\n")
        p = [0.1, 0.2, 0.3, 0.4]
        a = circuit_entropy_flow(c, Distribution(c.input_labels, p)).accounts["G"]
        p_end = [0.6, 0.4]
        assert a.entropy_change == pytest.approx(oracles.entropy(p) - oracles.entropy(p_end), abs=1e-13)
        expected = oracles.kl(p, [0.25] * 4) - oracles.kl(p_end, [0.75, 0.25])
        assert a.mismatch == pytest.approx(expected, abs=1e-13)

    def test_residuals_and_priors(self, nand_circuit):
        q = Distribution(["00", "01", "10", "11"], [0.1, 0.2, 0.3, 0.4])
        r = circuit_entropy_flow(nand_circuit, uniform_input(nand_circuit),
                                 q_policy={"G": q}, residuals={"G": 0.5})
        assert r.accounts["G"].residual == 0.5
        expected = oracles.kl([0.25] * 4, [0.1, 0.2, 0.3, 0.4]) - oracles.kl([0.25, 0.75], [0.4, 0.6])
        assert r.accounts["G"].mismatch == pytest.approx(expected, abs=1e-13)

    def test_unknown_override(self, nand_circuit):
        with pytest.raises(ValidationError, match="unknown gate"):
            circuit_entropy_flow(nand_circuit, uniform_input(nand_circuit), residuals={"X": 1.0})

    def test_negative_residual(self, nand_circuit):
        with pytest.raises(ValidationError):
            circuit_entropy_flow(nand_circuit, uniform_input(nand_circuit), residuals={"G": -1.0})

    def test_ungrouped_bucket(self, majority):
        r = circuit_entropy_flow(majority, uniform_input(majority), groups={"A": ("AND1",)})
        assert set(r.groups) == {"A", "ungrouped"}
        total = r.groups["A"].entropy_flow + r.groups["ungrouped"].entropy_flow
        assert total == pytest.approx(r.total.entropy_flow, abs=1e-14)

    @settings(max_examples=100)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_mismatch_nonnegative_on_circuits(self, seed):
        c = parse_netlist(MAJORITY)
        r = circuit_entropy_flow(c, random_input(c, seed))
        for a in r.accounts.values():
            assert a.mismatch >= -1e-12

    @settings(max_examples=100)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_grouping_invariance(self, seed):
        c = parse_netlist(MAJORITY)
        p = random_input(c, seed)
        names = [g.name for g in c.gates]
        rng = np.random.default_rng(seed)
        labels = rng.integers(0, 3, size=len(names))
        grouping = {}
        for n, k in zip(names, labels):
            grouping.setdefault(f"g{k}", []).append(n)
        r = circuit_entropy_flow(c, p, groups={k: tuple(v) for k, v in grouping.items()})
        assert math.fsum(g.entropy_flow for g in r.groups.values()) == pytest.approx(
            r.total.entropy_flow, abs=1e-12)


class TestNandClosedForm:
    @given(st.floats(0, 1))
    def test_matches_generic(self, p1):
        c = parse_netlist("inputs a b\ngate G NAND a b -> y\n")
        # p(11) = 1 - p1 fixes the NAND output; spread the rest over 00, 01, 10
        p = Distribution.normalized(c.input_labels, [p1 / 3, p1 / 3, p1 / 3, 1 - p1])
        r = circuit_entropy_flow(c, p)
        assert r.total.entropy_flow == pytest.approx(nand_entropy_flow(r.traces[0].end_distribution["1"]), abs=1e-12)

    def test_range(self):
        with pytest.raises(ValidationError):
            nand_entropy_flow(1.5)

    def test_bound_scales(self, ctx300):
        unit = theorem1_lower_bound(1, 1, ctx300)
        assert theorem1_lower_bound(7, 3, ctx300) == pytest.approx(21 * unit, rel=1e-15)
        assert theorem1_lower_bound(0, 5, ctx300) == 0.0
        with pytest.raises(ValidationError):
            theorem1_lower_bound(-1, 1, ctx300)


def test_report_is_json_and_consistent(majority, ctx300):
    r = circuit_entropy_flow(majority, uniform_input(majority))
    rep = json.loads(json.dumps(circuit_report(majority, r, ctx300)))
    assert [g["gate"] for g in rep["gates"]] == ["AND1", "XOR1", "AND2", "XOR2"]
    heat = math.fsum(g["heat_J"] for g in rep["gates"])
    assert heat == pytest.approx(rep["total"]["heat_J"], rel=1e-12)
    assert rep["ignored_input_correlation_nats"] > 0
    assert "nand" not in rep
    for g in rep["gates"]:
        assert math.fsum(i["mass"] for i in g["islands"]) == pytest.approx(1.0, abs=1e-12)


def test_report_nand_section(nand_circuit, ctx300):
    r = circuit_entropy_flow(nand_circuit, uniform_input(nand_circuit))
    rep = circuit_report(nand_circuit, r, ctx300)
    assert rep["nand"]["closed_form_total_nats"] == pytest.approx(THREE_QUARTER_LN3, abs=1e-12)
    assert rep["nand"]["uniform_input_estimate_nats"] == NAND_UNIFORM_FLOW
