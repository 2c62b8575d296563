from .flow import (
    CircuitEntropyFlow,
    GateTrace,
    circuit_entropy_flow,
    circuit_report,
    gate_entropy_account,
    nand_entropy_flow,
    propagate,
    run_propagation,
    theorem1_lower_bound,
    uniform_input,
)
from .gates import BUILTIN_TYPES, GateSpec, IslandPartition, builtin_gate, islands
from .netlist import CircuitNetlist, GateInstance, parse_netlist

__all__ = [
    "BUILTIN_TYPES", "GateSpec", "IslandPartition", "builtin_gate", "islands",
    "CircuitNetlist", "GateInstance", "parse_netlist",
    "GateTrace", "CircuitEntropyFlow", "propagate", "run_propagation", "uniform_input",
    "gate_entropy_account", "circuit_entropy_flow", "nand_entropy_flow",
    "theorem1_lower_bound", "circuit_report",
]
