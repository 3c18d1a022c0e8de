"""Detection of controlled-gate runs that can share one entangled pair.

A group is a maximal run of CX/CZ/CP gates driven by the same control
qubit, with no intervening gate touching that control wire.  Gates on the
target wires do not break a run.  The control of a symmetric gate (CZ, CP)
is its syntactic first operand.  CCX/CCZ are never grouped.

Also provides depth-window segmentation, used to partition deep circuits
stage by stage.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Gate, GateKind, QubitRef, gate_layers

GROUPABLE = frozenset({GateKind.CX, GateKind.CZ, GateKind.CP})

_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class GroupingPolicy:
    """Knobs for run detection.

    min_group_size: runs shorter than this fall apart into singletons.
    require_equal_cp_angles: CP members must share one phase to co-group.
    allow_mixed_kinds: whether CX/CZ/CP may appear in the same group.
    """

    min_group_size: int = 2
    require_equal_cp_angles: bool = False
    allow_mixed_kinds: bool = True

    def __post_init__(self) -> None:
        if self.min_group_size < 1:
            raise ValueError("min_group_size must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> "GroupingPolicy":
        return cls(**{k: data[k] for k in data
                      if k in ("min_group_size", "require_equal_cp_angles", "allow_mixed_kinds")})


@dataclass(frozen=True)
class GateGroup:
    """One run of controlled gates sharing a control qubit.

    ``members`` are gate seq numbers in circuit order.  A group with two or
    more members is a reuse group: its control state can be shared once and
    reused by every member.
    """

    id: int
    control: QubitRef
    members: tuple[int, ...]
    targets: frozenset[QubitRef]
    kinds: frozenset[GateKind]

    @property
    def is_reuse(self) -> bool:
        return len(self.members) >= 2


def _compatible(run: list[Gate], gate: Gate, policy: GroupingPolicy) -> bool:
    if not policy.allow_mixed_kinds and any(g.kind is not gate.kind for g in run):
        return False
    if policy.require_equal_cp_angles and gate.kind is GateKind.CP:
        for g in run:
            if g.kind is GateKind.CP and abs(g.params[0] - gate.params[0]) > _ANGLE_TOL:
                return False
    return True


def find_groups(circuit: Circuit,
                policy: GroupingPolicy | None = None,
                seqs: list[int] | None = None) -> list[GateGroup]:
    """Partition the circuit's CX/CZ/CP gates into control-wire runs.

    ``seqs`` restricts the scan to a gate subset (used per segment); runs
    are then judged within that subset only.
    """
    policy = policy or GroupingPolicy()
    gates = circuit.gates if seqs is None else [circuit.gates[s] for s in sorted(seqs)]
    open_runs: dict[QubitRef, list[Gate]] = {}
    closed: list[list[Gate]] = []

    def close(wire: QubitRef) -> None:
        run = open_runs.pop(wire, None)
        if run:
            closed.append(run)

    for g in gates:
        if g.kind in GROUPABLE:
            control, target = g.operands[0], g.operands[1]
            run = open_runs.get(control)
            if run is not None and _compatible(run, g, policy):
                run.append(g)
            else:
                close(control)
                open_runs[control] = [g]
            close(target)
        else:
            for q in g.operands:
                close(q)
    for wire in list(open_runs):
        close(wire)

    closed.sort(key=lambda run: run[0].seq)
    groups: list[GateGroup] = []
    for run in closed:
        pieces = [run] if len(run) >= policy.min_group_size else [[g] for g in run]
        for piece in pieces:
            groups.append(GateGroup(
                id=len(groups),
                control=piece[0].operands[0],
                members=tuple(g.seq for g in piece),
                targets=frozenset(g.operands[1] for g in piece),
                kinds=frozenset(g.kind for g in piece),
            ))
    return groups


@dataclass(frozen=True)
class Segment:
    """A consecutive window of depth layers and the gates scheduled in it."""

    index: int
    layer_range: tuple[int, int]
    gates: tuple[int, ...]


def segment_by_depth(circuit: Circuit, window: int) -> list[Segment]:
    """Split the ASAP layering into consecutive windows of ``window`` layers.

    Every gate lands in the segment covering its layer; a trailing BARRIER
    whose sync point equals the depth is clamped into the last segment.
    Concatenating segments reproduces the circuit up to reordering of gates
    on disjoint wires (per-wire order is always preserved).
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    if not circuit.gates:
        return []
    layers = gate_layers(circuit)
    depth = max(circuit.depth, 1)
    n_seg = -(-depth // window)
    buckets: list[list[int]] = [[] for _ in range(n_seg)]
    for g, lay in zip(circuit.gates, layers):
        buckets[min(lay // window, n_seg - 1)].append(g.seq)
    return [Segment(index=s,
                    layer_range=(s * window, min((s + 1) * window, depth)),
                    gates=tuple(b))
            for s, b in enumerate(buckets)]


def segment_subcircuit(circuit: Circuit, segment: Segment) -> Circuit:
    """Materialise one segment as a circuit over the same registers."""
    from .circuit import make_circuit
    gates = [circuit.gates[s] for s in segment.gates]
    return make_circuit(f"{circuit.name}.seg{segment.index}",
                        circuit.registers, gates, circuit.cregs)
