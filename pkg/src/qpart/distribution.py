"""Turn a partition into an executable multi-QPU plan.

Each cut hyperedge needs its anchor state shared from its home block to
every remote block it spans.  One shared copy is one channel: a cat
entangler on the home side binds the anchor qubit to a communication
qubit on the remote side, the remote gates use that copy as their
control, and a cat disentangler releases it after the last use.  A
channel consumes one entangled pair, i.e. two ebits, one endpoint per
side, which is exactly how the connectivity-minus-one metric prices the
edge.

Gates are executed where their target lives (CX/CCX) or where most of
their operands live (the diagonal CZ/CP/CCZ, ties to the last operand).
A remote operand that is not the edge anchor cannot ride an existing
channel; it gets a fallback channel of its own.  That only happens for
three-qubit gates whose controls are split from the target, and it makes
the realised ebit count exceed the metric; two-qubit and grouped
interactions never need it.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .circuit import Circuit, Gate, GateKind, QubitRef, _fmt_param
from .fm import InfeasibleError, resolve_capacities
from .grouping import GROUPABLE, GateGroup
from .hypergraph import CutReport, Hypergraph, cut_cost


class CommModel(Enum):
    """How communication qubits are provisioned per QPU.

    PER_CHANNEL gives every channel endpoint its own slot.  SINGLE_LINK
    funnels all of a QPU's traffic through one slot, which is only
    feasible when no two channel lifetimes overlap there.
    """

    PER_CHANNEL = "per-channel"
    SINGLE_LINK = "single-link"


@dataclass(frozen=True)
class QpuEnvironment:
    """Target hardware: QPU count, data-qubit capacities, comm model."""

    blocks: int
    capacities: tuple[int, ...]
    comm: CommModel = CommModel.PER_CHANNEL

    def __post_init__(self) -> None:
        object.__setattr__(self, "capacities", tuple(self.capacities))
        if self.blocks < 1:
            raise ValueError("need at least one QPU")
        if len(self.capacities) != self.blocks:
            raise ValueError(f"{self.blocks} QPUs but {len(self.capacities)} capacities")
        if any(c < 1 for c in self.capacities):
            raise ValueError("QPU capacities must be positive")


def environment_for(n_qubits: int, blocks: int,
                    capacities: tuple[int, ...] | None = None,
                    comm: CommModel = CommModel.PER_CHANNEL) -> QpuEnvironment:
    """Environment with resolved capacities (equal split when not given)."""
    return QpuEnvironment(blocks=blocks,
                          capacities=resolve_capacities(capacities, n_qubits, blocks),
                          comm=comm)


@dataclass(frozen=True)
class Channel:
    """One shared anchor copy: ``carries`` (a vertex id) is entangled from
    ``home`` into a comm qubit on ``remote`` over [first_use, last_use]."""

    id: int
    edge: int
    carries: int
    home: int
    remote: int
    first_use: int
    last_use: int
    primary: bool = True


@dataclass(frozen=True)
class QpuPlan:
    """Per-QPU ledger: resident data qubits, executed original gates o,
    ebit endpoints e, their ratio r = e / o (None when o is zero), and
    the comm register width of the emitted program."""

    block: int
    data: int
    o: int
    e: int
    r: float | None
    comm_width: int


@dataclass(frozen=True)
class DistributionPlan:
    assignment: tuple[int, ...]
    blocks: int
    comm: CommModel
    channels: tuple[Channel, ...]
    exec_block: tuple[int, ...]  # per gate seq; -1 for BARRIER
    per_block: tuple[QpuPlan, ...]
    cut: CutReport
    ebits: int  # realised: 2 per channel; equals cut.ebits without fallbacks

    def to_json(self) -> dict:
        return {
            "blocks": [{"data": p.data, "e": p.e, "o": p.o, "r": p.r}
                       for p in self.per_block],
            "channels": [{"id": c.id, "edge": c.edge, "carries": c.carries,
                          "home": c.home, "remote": c.remote,
                          "span": [c.first_use, c.last_use],
                          "primary": c.primary} for c in self.channels],
            "cut_edges": self.cut.cut_edges,
            "lambda_minus_one": self.cut.lambda_minus_one,
            "ebits": self.ebits,
            "comm": self.comm.value,
        }


_DIAGONAL = {GateKind.CZ, GateKind.CP, GateKind.CCZ}


def _edge_of_gate(h: Hypergraph, groups: list[GateGroup] | None) -> dict[int, int]:
    """Map gate seq -> hyperedge id, resolving group edges to their members."""
    by_group: dict[int, int] = {}
    seq_edge: dict[int, int] = {}
    for e in h.edges:
        if e.origin is None:
            continue
        kind, ident = e.origin
        if kind == "gate":
            seq_edge[ident] = e.id
        elif kind == "group":
            by_group[ident] = e.id
    if by_group:
        if groups is None:
            raise ValueError("hypergraph has group edges; pass the groups used to build it")
        for grp in groups:
            eid = by_group.get(grp.id)
            if eid is not None:
                for seq in grp.members:
                    seq_edge[seq] = eid
    return seq_edge


def exec_block_of(gate: Gate, block_of: dict[QubitRef, int]) -> int:
    """Block a gate runs on: target's block for CX/CCX, majority block for
    diagonal gates (ties to the last operand), operand's block otherwise."""
    blocks = [block_of[q] for q in gate.operands]
    if len(set(blocks)) == 1:
        return blocks[0]
    if gate.kind in _DIAGONAL:
        best = blocks[-1]
        for b in set(blocks):
            if blocks.count(b) > blocks.count(best):
                best = b
        return best
    if gate.kind in (GateKind.CX, GateKind.CCX):
        return blocks[-1]
    raise InfeasibleError(f"gate {gate.seq} ({gate.qasm_name}) has operands on "
                          f"blocks {sorted(set(blocks))} and cannot be split")


def plan_distribution(circuit: Circuit, h: Hypergraph, assignment: list[int],
                      groups: list[GateGroup] | None = None,
                      env: QpuEnvironment | None = None) -> DistributionPlan:
    """Place every gate, open the channels remote operands need, and
    account ebits and gate counts per QPU.

    ``assignment`` is the vertex -> block map from the partitioner, over
    the same hypergraph ``h`` (grouped graphs need the same ``groups``).
    """
    blocks = env.blocks if env is not None else max(assignment) + 1
    comm = env.comm if env is not None else CommModel.PER_CHANNEL
    index = circuit.qubit_index()
    block_of = {q: assignment[i] for q, i in index.items()}
    seq_edge = _edge_of_gate(h, groups)

    exec_block: list[int] = []
    order: list[tuple[int, int, int]] = []  # (edge, carries, remote) creation order
    uses: dict[tuple[int, int, int], list[int]] = {}
    o = [0] * blocks
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER:
            exec_block.append(-1)
            continue
        at = exec_block_of(g, block_of)
        exec_block.append(at)
        o[at] += 1
        for q in g.operands:
            if block_of[q] == at:
                continue
            eid = seq_edge.get(g.seq)
            if eid is None:
                raise InfeasibleError(f"gate {g.seq} ({g.qasm_name}) is split "
                                      "but has no hyperedge")
            key = (eid, index[q], at)
            if key not in uses:
                uses[key] = []
                order.append(key)
            uses[key].append(g.seq)

    channels = []
    for cid, key in enumerate(order):
        eid, carries, remote = key
        seqs = uses[key]
        channels.append(Channel(id=cid, edge=eid, carries=carries,
                                home=assignment[carries], remote=remote,
                                first_use=seqs[0], last_use=seqs[-1],
                                primary=carries == h.edges[eid].control))

    e = [0] * blocks
    for c in channels:
        e[c.home] += 1
        e[c.remote] += 1
    if comm is CommModel.PER_CHANNEL:
        widths = list(e)
    else:
        widths = [1 if x else 0 for x in e]

    data = [0] * blocks
    for v in h.vertices:
        if v.is_qubit:
            data[assignment[v.id]] += 1

    per_block = tuple(QpuPlan(block=b, data=data[b], o=o[b], e=e[b],
                              r=e[b] / o[b] if o[b] else None,
                              comm_width=widths[b])
                      for b in range(blocks))
    return DistributionPlan(assignment=tuple(assignment), blocks=blocks,
                            comm=comm, channels=tuple(channels),
                            exec_block=tuple(exec_block), per_block=per_block,
                            cut=cut_cost(h, list(assignment), blocks),
                            ebits=2 * len(channels))


def feasibility_check(plan: DistributionPlan,
                      env: QpuEnvironment | None = None) -> list[str]:
    """Problems that stop the plan running as written; empty means go.

    Checks data capacities when an environment is given, and under
    SINGLE_LINK that no two channels occupy a QPU's one comm slot at the
    same time.  A remote copy occupies its slot from entangle to
    disentangle; the home half is consumed by the entangler immediately.
    """
    problems = []
    if env is not None:
        for p in plan.per_block:
            if p.data > env.capacities[p.block]:
                problems.append(f"block {p.block} holds {p.data} data qubits, "
                                f"capacity {env.capacities[p.block]}")
    if plan.comm is CommModel.SINGLE_LINK:
        for b in range(plan.blocks):
            spans = [(c.first_use, c.last_use, c.id) for c in plan.channels
                     if c.remote == b]
            points = [(c.first_use, c.id) for c in plan.channels if c.home == b]
            for lo, hi, cid in spans:
                for lo2, hi2, cid2 in spans:
                    if cid < cid2 and lo <= hi2 and lo2 <= hi:
                        problems.append(f"block {b}: channels {cid} and {cid2} "
                                        "overlap on the single comm slot")
                for at, cid2 in points:
                    # entangling for cid2 happens just before gate `at`
                    if cid != cid2 and lo < at <= hi:
                        problems.append(f"block {b}: channel {cid2} entangles "
                                        f"while channel {cid} holds the comm slot")
    return problems


# --------------------------------------------------------------------------
# subcircuit emission

def _slot_maps(plan: DistributionPlan) -> tuple[dict[int, int], dict[int, int]]:
    """Comm slot per channel endpoint, (home map, remote map) by channel id."""
    home, remote = {}, {}
    if plan.comm is CommModel.SINGLE_LINK:
        for c in plan.channels:
            home[c.id] = 0
            remote[c.id] = 0
        return home, remote
    nxt = [0] * plan.blocks
    for c in plan.channels:  # id order; one slot per endpoint
        home[c.id] = nxt[c.home]
        nxt[c.home] += 1
        remote[c.id] = nxt[c.remote]
        nxt[c.remote] += 1
    return home, remote


def emit_subcircuits(circuit: Circuit, plan: DistributionPlan) -> list[str]:
    """One OpenQASM program per QPU, in block order.

    Programs re-declare the original registers at full size and only touch
    the slice that lives locally, plus an ``ebit`` register for their comm
    slots.  Channel activity is marked with ``// channel`` comments; the
    opaque cat primitives carry the nonlocal protocol.
    """
    bad = [p for p in feasibility_check(plan) if "comm slot" in p]
    if bad:
        raise InfeasibleError("; ".join(bad))
    home_slot, remote_slot = _slot_maps(plan)
    index = circuit.qubit_index()
    block_of = {q: plan.assignment[index[q]] for q in index}
    vertex_ref = {i: q for q, i in index.items()}

    entangle_at: dict[int, list] = {}  # first-use seq -> channels
    release_at: dict[int, list] = {}
    for c in plan.channels:
        entangle_at.setdefault(c.first_use, []).append(c)
        release_at.setdefault(c.last_use, []).append(c)
    serving: dict[tuple[int, int], Channel] = {}  # (carries, remote) -> channel
    for c in plan.channels:
        serving[(c.carries, c.remote)] = c

    cregs = circuit.cregs
    if not cregs and any(g.kind is GateKind.MEASURE for g in circuit.gates):
        cregs = (("c", circuit.width),)

    texts = []
    for b in range(plan.blocks):
        lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
        if any(c.home == b for c in plan.channels):
            lines.append("opaque cat_entangler a,b;")
        if any(c.remote == b for c in plan.channels):
            lines.append("opaque cat_disentangler a;")
        opaque_decls: dict[str, int] = {}
        for g in circuit.gates:
            if (g.kind is GateKind.OPAQUE and plan.exec_block[g.seq] == b
                    and g.label not in opaque_decls):
                opaque_decls[g.label] = len(g.operands)
        for label, arity in opaque_decls.items():
            formals = ",".join(chr(ord("a") + i) for i in range(arity))
            lines.append(f"opaque {label} {formals};")
        for reg, n in circuit.registers:
            lines.append(f"qreg {reg}[{n}];")
        width = plan.per_block[b].comm_width
        if width:
            lines.append(f"qreg ebit[{width}];")
        for reg, n in cregs:
            lines.append(f"creg {reg}[{n}];")

        for g in circuit.gates:
            for c in entangle_at.get(g.seq, ()):
                if c.home == b:
                    lines.append(f"// channel {c.id}")
                    lines.append(f"cat_entangler {vertex_ref[c.carries]},"
                                 f"ebit[{home_slot[c.id]}];")
            at = plan.exec_block[g.seq]
            if g.kind is GateKind.BARRIER:
                local = [q for q in g.operands if block_of[q] == b]
                if local:
                    lines.append("barrier " + ",".join(str(q) for q in local) + ";")
            elif at == b:
                ops = []
                for q in g.operands:
                    if block_of[q] == b:
                        ops.append(str(q))
                    else:
                        c = serving[(index[q], b)]
                        ops.append(f"ebit[{remote_slot[c.id]}]")
                if g.kind is GateKind.MEASURE:
                    cb = g.cbit if g.cbit is not None else (cregs[0][0], index[g.operands[0]])
                    lines.append(f"measure {ops[0]} -> {cb[0]}[{cb[1]}];")
                elif g.params:
                    args = ",".join(_fmt_param(p) for p in g.params)
                    lines.append(f"{g.qasm_name}({args}) {','.join(ops)};")
                else:
                    lines.append(f"{g.qasm_name} {','.join(ops)};")
            for c in release_at.get(g.seq, ()):
                if c.remote == b:
                    lines.append(f"// channel {c.id}")
                    lines.append(f"cat_disentangler ebit[{remote_slot[c.id]}];")
        texts.append("\n".join(lines) + "\n")
    return texts
