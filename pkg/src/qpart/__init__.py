"""Partition quantum circuits across multiple QPUs with minimal ebit cost.

Pipeline: parse OpenQASM 2 (or generate a benchmark family), group gates
that reuse a control, translate to a hypergraph, partition it under the
connectivity-minus-one metric, then plan the distributed execution and
emit per-QPU subcircuits.  Brute-force and statevector oracles back the
test suite; the bench module reproduces the random-vs-FM comparisons.
"""

from .circuit import (Circuit, Gate, GateKind, QasmError, QubitRef,
                      compute_metrics, emit_qasm, gate_layers, make_circuit,
                      parse_qasm)
from .generators import CircuitFamily, generate
from .grouping import (GROUPABLE, GateGroup, GroupingPolicy, Segment,
                       find_groups, segment_by_depth, segment_subcircuit)
from .hypergraph import (CutReport, Hyperedge, Hypergraph, Vertex,
                         block_endpoints, build_hypergraph, cut_cost,
                         edge_home, export_hmetis, import_hmetis)
from .fm import (BlockStats, InfeasibleError, Mode, PartitionConfig,
                 PartitionResult, PassStats, bipartition, direct_kway,
                 fm_pass, gain, initial_partition, partition,
                 random_partition, recursive_kway, resolve_capacities)
from .oracle import (MAX_SIM_QUBITS, OracleResult, brute_force_mincut,
                     equivalent, simulate)
from .distribution import (Channel, CommModel, DistributionPlan,
                           QpuEnvironment, QpuPlan, emit_subcircuits,
                           environment_for, exec_block_of, feasibility_check,
                           plan_distribution)
from .bench import (CSV_COLUMNS, METHODS, BenchRow, CircuitJob, SuiteSpec,
                    format_summary, load_suite, run_suite, write_csv)

__version__ = "0.1.0"

__all__ = [
    "Circuit", "Gate", "GateKind", "QasmError", "QubitRef",
    "compute_metrics", "emit_qasm", "gate_layers", "make_circuit", "parse_qasm",
    "CircuitFamily", "generate",
    "GROUPABLE", "GateGroup", "GroupingPolicy", "Segment",
    "find_groups", "segment_by_depth", "segment_subcircuit",
    "CutReport", "Hyperedge", "Hypergraph", "Vertex",
    "block_endpoints", "build_hypergraph", "cut_cost", "edge_home",
    "export_hmetis", "import_hmetis",
    "BlockStats", "InfeasibleError", "Mode", "PartitionConfig",
    "PartitionResult", "PassStats", "bipartition", "direct_kway",
    "fm_pass", "gain", "initial_partition", "partition",
    "random_partition", "recursive_kway", "resolve_capacities",
    "MAX_SIM_QUBITS", "OracleResult", "brute_force_mincut",
    "equivalent", "simulate",
    "Channel", "CommModel", "DistributionPlan", "QpuEnvironment", "QpuPlan",
    "emit_subcircuits", "environment_for", "exec_block_of",
    "feasibility_check", "plan_distribution",
    "CSV_COLUMNS", "METHODS", "BenchRow", "CircuitJob", "SuiteSpec",
    "format_summary", "load_suite", "run_suite", "write_csv",
    "__version__",
]
