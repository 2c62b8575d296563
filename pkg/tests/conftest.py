import pytest

from thermocomm import PhysicalContext
from thermocomm.circuit import parse_netlist

MAJORITY = """\
# three-input majority: maj = (a AND b) XOR (c AND (a XOR b))
inputs a b c
gate AND1 AND a b -> w1
gate XOR1 XOR a b -> w2
gate AND2 AND c w2 -> w3
gate XOR2 XOR w1 w3 -> out
group G1 = AND1 XOR1
group G2 = AND2 XOR2
"""

MAJORITY_GATES = [
    ("AND1", "AND", ("a", "b"), "w1"),
    ("XOR1", "XOR", ("a", "b"), "w2"),
    ("AND2", "AND", ("c", "w2"), "w3"),
    ("XOR2", "XOR", ("w1", "w3"), "out"),
]


@pytest.fixture
def ctx300():
    return PhysicalContext(300.0)


@pytest.fixture
def majority():
    return parse_netlist(MAJORITY)


@pytest.fixture
def nand_circuit():
    return parse_netlist("inputs a b\ngate G NAND a b -> y\n")


@pytest.fixture
def erase_circuit():
    return parse_netlist("inputs a\ngate E ERASE a -> y\n")
