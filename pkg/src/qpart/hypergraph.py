"""Hypergraph view of a circuit's non-local interactions.

Every circuit qubit becomes a weight-1 vertex.  Without grouping, each
CX/CZ/CP gate contributes a 2-pin edge (control, target) and each CCX/CCZ
a 3-pin edge.  With grouping, each reuse group becomes one weight-0
grouping vertex plus a single hyperedge over {grouping vertex, control,
targets}; singleton groups keep their per-gate edges.  Single-qubit gates,
MEASURE and BARRIER do not appear.

The cut metric is connectivity minus one: an edge spanning b blocks costs
b - 1, and every unit of cost is one entangled pair, i.e. two ebits.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, GateKind, QubitRef
from .grouping import GROUPABLE, GateGroup


@dataclass(frozen=True)
class Vertex:
    """Weight-1 qubit vertex, weight-0 grouping vertex, or plain (imported)."""

    id: int
    weight: int = 1
    ref: QubitRef | None = None
    group: int | None = None
    anchor: int | None = None  # grouping vertex: vertex id of its control qubit

    @property
    def is_qubit(self) -> bool:
        return self.weight > 0


@dataclass(frozen=True)
class Hyperedge:
    """Pins are distinct vertex ids, at least two of them.

    ``origin`` records where the edge came from: ("gate", seq) or
    ("group", group id).  ``control`` is the vertex id that anchors the
    home side of the interaction.
    """

    id: int
    pins: tuple[int, ...]
    weight: int = 1
    origin: tuple[str, int] | None = None
    control: int | None = None


class Hypergraph:
    """Vertex and edge lists plus the derived incidence structure."""

    def __init__(self, vertices: list[Vertex], edges: list[Hyperedge]):
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.incidence: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            for p in e.pins:
                if not 0 <= p < len(self.incidence):
                    raise ValueError(f"edge {e.id} pin {p} out of range")
                self.incidence[p].append(e.id)
        self.validate()

    def validate(self) -> None:
        n = len(self.vertices)
        for i, v in enumerate(self.vertices):
            if v.id != i:
                raise ValueError(f"vertex ids must be dense, got {v.id} at {i}")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise ValueError(f"edge ids must be dense, got {e.id} at {i}")
            if len(e.pins) < 2:
                raise ValueError(f"edge {e.id} has fewer than 2 pins")
            if len(set(e.pins)) != len(e.pins):
                raise ValueError(f"edge {e.id} has repeated pins {e.pins}")
            for p in e.pins:
                if not 0 <= p < n:
                    raise ValueError(f"edge {e.id} pin {p} out of range")
        if sum(len(inc) for inc in self.incidence) != self.total_pins():
            raise ValueError("incidence is inconsistent with edge pins")

    def n_vertices(self) -> int:
        return len(self.vertices)

    def n_qubit_vertices(self) -> int:
        return sum(1 for v in self.vertices if v.is_qubit)

    def total_pins(self) -> int:
        return sum(len(e.pins) for e in self.edges)

    def vertex_of(self, ref: QubitRef) -> int:
        for v in self.vertices:
            if v.ref == ref:
                return v.id
        raise KeyError(f"no vertex for {ref}")

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "weight": v.weight,
                          "ref": str(v.ref) if v.ref else None,
                          "group": v.group} for v in self.vertices],
            "edges": [{"id": e.id, "pins": list(e.pins), "weight": e.weight,
                       "origin": list(e.origin) if e.origin else None} for e in self.edges],
        }


def build_hypergraph(circuit: Circuit, groups: list[GateGroup] | None = None) -> Hypergraph:
    """Translate a circuit, optionally folding reuse groups into hyperedges."""
    index = circuit.qubit_index()
    vertices = [Vertex(id=i, weight=1, ref=q) for q, i in index.items()]

    member_of: dict[int, GateGroup] = {}
    if groups:
        n_gates = len(circuit.gates)
        for grp in groups:
            for seq in grp.members:
                if not 0 <= seq < n_gates or circuit.gates[seq].kind not in GROUPABLE:
                    raise ValueError(f"group {grp.id} references gate {seq}, "
                                     "which is not a groupable gate of this circuit")
                member_of[seq] = grp

    gv_of: dict[int, int] = {}  # group id -> grouping vertex id
    if groups:
        for grp in groups:
            if grp.is_reuse:
                gv_of[grp.id] = len(vertices)
                vertices.append(Vertex(id=len(vertices), weight=0, group=grp.id,
                                       anchor=index[grp.control]))

    edges: list[Hyperedge] = []
    emitted_groups: set[int] = set()
    for g in circuit.gates:
        if g.kind in (GateKind.CCX, GateKind.CCZ):
            pins = tuple(index[q] for q in g.operands)
            edges.append(Hyperedge(id=len(edges), pins=pins,
                                   origin=("gate", g.seq), control=pins[0]))
        elif g.kind in GROUPABLE:
            grp = member_of.get(g.seq)
            if grp is not None and grp.is_reuse:
                if grp.id in emitted_groups:
                    continue
                emitted_groups.add(grp.id)
                control = index[grp.control]
                targets = []
                for seq in grp.members:
                    t = index[circuit.gates[seq].operands[1]]
                    if t not in targets:
                        targets.append(t)
                pins = (gv_of[grp.id], control, *targets)
                edges.append(Hyperedge(id=len(edges), pins=pins,
                                       origin=("group", grp.id), control=control))
            else:
                pins = (index[g.operands[0]], index[g.operands[1]])
                edges.append(Hyperedge(id=len(edges), pins=pins,
                                       origin=("gate", g.seq), control=pins[0]))
    return Hypergraph(vertices, edges)


@dataclass(frozen=True)
class CutReport:
    """cut_edges: edges spanning more than one block.
    lambda_minus_one: sum over edges of (blocks spanned - 1).
    ebits: 2 * lambda_minus_one, one entangled pair per unit of cost."""

    cut_edges: int
    lambda_minus_one: int
    ebits: int


def _check_assignment(h: Hypergraph, assignment: list[int], blocks: int) -> None:
    if len(assignment) != h.n_vertices():
        raise ValueError(f"assignment covers {len(assignment)} of {h.n_vertices()} vertices")
    for v, b in enumerate(assignment):
        if b is None or not 0 <= b < blocks:
            raise ValueError(f"vertex {v} assigned to invalid block {b}")


def cut_cost(h: Hypergraph, assignment: list[int], blocks: int) -> CutReport:
    """Evaluate an assignment under the connectivity-minus-one metric."""
    _check_assignment(h, assignment, blocks)
    cut = 0
    lam = 0
    for e in h.edges:
        spanned = len({assignment[p] for p in e.pins})
        if spanned > 1:
            cut += 1
            lam += (spanned - 1) * e.weight
    return CutReport(cut_edges=cut, lambda_minus_one=lam, ebits=2 * lam)


def edge_home(h: Hypergraph, e: Hyperedge, assignment: list[int]) -> int:
    """Block hosting the shared control state of an edge."""
    pin = e.control if e.control is not None else e.pins[0]
    return assignment[pin]


def block_endpoints(h: Hypergraph, assignment: list[int], blocks: int) -> list[int]:
    """Communication endpoints per block: one per (cut edge, remote block)
    on the remote side plus one on the home side.  Sums to 2*(lambda-1)."""
    _check_assignment(h, assignment, blocks)
    counts = [0] * blocks
    for e in h.edges:
        spanned = sorted({assignment[p] for p in e.pins})
        if len(spanned) < 2:
            continue
        home = edge_home(h, e, assignment)
        for b in spanned:
            if b != home:
                counts[home] += e.weight
                counts[b] += e.weight
    return counts


# --------------------------------------------------------------------------
# hMETIS interchange format

def export_hmetis(h: Hypergraph) -> str:
    """Render in hMETIS format: header "E V [fmt]", 1-indexed pin lines.

    Weights are written (fmt 11) only when some vertex or edge weight is
    not 1; a plain unit-weight graph gets the bare two-field header.
    """
    weighted = any(v.weight != 1 for v in h.vertices) or any(e.weight != 1 for e in h.edges)
    lines = [f"{len(h.edges)} {len(h.vertices)}" + (" 11" if weighted else "")]
    for e in h.edges:
        pins = " ".join(str(p + 1) for p in e.pins)
        lines.append(f"{e.weight} {pins}" if weighted else pins)
    if weighted:
        lines.extend(str(v.weight) for v in h.vertices)
    return "\n".join(lines) + "\n"


def import_hmetis(text: str) -> Hypergraph:
    """Parse hMETIS format (fmt absent, 1, 10 or 11) into a plain hypergraph."""
    rows = [line.split("//")[0].split("%")[0].strip() for line in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("empty hmetis input")
    header = rows[0].split()
    if len(header) not in (2, 3) or not all(f.isdigit() for f in header):
        raise ValueError(f"malformed hmetis header {rows[0]!r}")
    n_edges, n_vertices = int(header[0]), int(header[1])
    fmt = header[2] if len(header) == 3 else ""
    if fmt not in ("", "1", "10", "11"):
        raise ValueError(f"unsupported hmetis fmt {fmt!r}")
    edge_weighted = fmt in ("1", "11")
    vertex_weighted = fmt in ("10", "11")
    expect = 1 + n_edges + (n_vertices if vertex_weighted else 0)
    if len(rows) != expect:
        raise ValueError(f"expected {expect} lines, got {len(rows)}")

    edges = []
    for i, row in enumerate(rows[1:1 + n_edges]):
        fields = [int(f) for f in row.split()]
        weight = 1
        if edge_weighted:
            weight, fields = fields[0], fields[1:]
        pins = []
        for p in fields:
            if not 1 <= p <= n_vertices:
                raise ValueError(f"edge {i} pin {p} out of range 1..{n_vertices}")
            pins.append(p - 1)
        edges.append(Hyperedge(id=i, pins=tuple(pins), weight=weight))
    if vertex_weighted:
        weights = [int(r) for r in rows[1 + n_edges:]]
        vertices = [Vertex(id=i, weight=w) for i, w in enumerate(weights)]
    else:
        vertices = [Vertex(id=i, weight=1) for i in range(n_vertices)]
    return Hypergraph(vertices, edges)
