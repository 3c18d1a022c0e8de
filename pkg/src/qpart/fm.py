"""Fiduccia-Mattheyses partitioning over circuit hypergraphs.

The pass engine is the classic one: bucket lists indexed by gain, one
bucket array per block, FIFO order inside a gain level, critical-edge gain
updates, and rollback of each pass to its best feasible prefix.  Balance is
capacity-driven: block loads count qubit vertices only, and a move may
overfill the target by at most one unit while the pass explores; returned
prefixes always satisfy the strict bound, so without that transient slack
an exactly-filled balanced instance would admit no qubit moves at all.

k-way partitioning comes in two flavours: recursive bisection (cut edges
keep their restricted pin sets in each half, which charges every further
split exactly as the global metric does) and a direct k-way pass where each
vertex is scored by its best feasible target block.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .hypergraph import (CutReport, Hyperedge, Hypergraph, Vertex,
                         block_endpoints, cut_cost)


class InfeasibleError(ValueError):
    """Capacities cannot host the circuit (sum of capacities below width)."""


class Mode(Enum):
    RECURSIVE_BISECT = "fm"
    DIRECT_KWAY = "kway"
    RANDOM = "random"


@dataclass(frozen=True)
class PartitionConfig:
    """Knobs shared by every partitioning entry point.

    capacities=None means an equal split of the qubit count over the
    blocks.  epsilon widens each block's bound to ceil((1+epsilon)*cap).
    restarts run the seeds seed, seed+1, ... and keep the best result.
    """

    blocks: int = 2
    capacities: tuple[int, ...] | None = None
    epsilon: float = 0.0
    restarts: int = 8
    seed: int = 0
    mode: Mode = Mode.RECURSIVE_BISECT
    max_passes: int = 32

    def __post_init__(self) -> None:
        if self.blocks < 2:
            raise ValueError("need at least 2 blocks")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must be in [0, 1)")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.max_passes < 1:
            raise ValueError("max_passes must be positive")
        if self.capacities is not None:
            object.__setattr__(self, "capacities", tuple(self.capacities))
            if len(self.capacities) != self.blocks:
                raise ValueError(f"{self.blocks} blocks but {len(self.capacities)} capacities")
            if any(c < 1 for c in self.capacities):
                raise ValueError("capacities must be positive")

    def to_json(self) -> dict:
        return {"blocks": self.blocks,
                "capacities": list(self.capacities) if self.capacities else None,
                "epsilon": self.epsilon, "restarts": self.restarts,
                "seed": self.seed, "mode": self.mode.value,
                "max_passes": self.max_passes}

    @classmethod
    def from_json(cls, data: dict) -> "PartitionConfig":
        data = dict(data)
        if "mode" in data:
            data["mode"] = Mode(data["mode"])
        if data.get("capacities") is not None:
            data["capacities"] = tuple(data["capacities"])
        return cls(**data)


def resolve_capacities(capacities, n: int, blocks: int) -> list[int]:
    """Explicit capacities, or an equal split of n over the blocks.

    Raises InfeasibleError when the total capacity cannot host n qubits.
    """
    if capacities is None:
        base, extra = divmod(n, blocks)
        return [base + (1 if b < extra else 0) for b in range(blocks)]
    caps = list(capacities)
    if sum(caps) < n:
        raise InfeasibleError(f"capacities sum to {sum(caps)}, need at least {n}")
    return caps


@dataclass(frozen=True)
class BlockStats:
    """Per-block accounting: data qubits, communication qubits e, executed
    operations o, and the ratio r = e / o (None while o is unknown)."""

    data: int
    e: int
    o: int = 0
    r: float | None = None


@dataclass(frozen=True)
class PartitionResult:
    assignment: tuple[int, ...]
    blocks_used: int
    cut: CutReport
    per_block: tuple[BlockStats, ...]
    passes_run: int
    seed_used: int
    gain_updates: int = 0

    def to_json(self) -> dict:
        return {"assignment": list(self.assignment),
                "blocks_used": self.blocks_used,
                "cut": {"cut_edges": self.cut.cut_edges,
                        "lambda_minus_one": self.cut.lambda_minus_one,
                        "ebits": self.cut.ebits},
                "per_block": [{"data": s.data, "e": s.e, "o": s.o, "r": s.r}
                              for s in self.per_block],
                "passes_run": self.passes_run,
                "seed_used": self.seed_used}


@dataclass
class PassStats:
    """Instrumentation for one pass; gain_updates counts every time a
    vertex's gain is computed or adjusted."""

    moves: int = 0
    gain_updates: int = 0


# --------------------------------------------------------------------------
# gain buckets

class GainBuckets:
    """Doubly linked bucket lists, one array per block, FIFO per gain level.

    Vertices are nodes of intrusive linked lists (prev/next arrays), so
    removal and re-insertion are O(1).  ``stamp`` is a global insertion
    counter used to break equal-gain ties across blocks: the least recently
    inserted vertex wins.
    """

    def __init__(self, n_vertices: int, max_gain: int, blocks: int):
        self.off = max_gain
        self.span = 2 * max_gain + 1
        self.head = [[-1] * self.span for _ in range(blocks)]
        self.tail = [[-1] * self.span for _ in range(blocks)]
        self.nxt = [-1] * n_vertices
        self.prv = [-1] * n_vertices
        self.gain = [0] * n_vertices
        self.home = [-1] * n_vertices
        self.present = [False] * n_vertices
        self.stamp = [0] * n_vertices
        self.top = [-max_gain - 1] * blocks
        self._clock = 0

    def insert(self, v: int, block: int, gain: int) -> None:
        assert not self.present[v]
        slot = gain + self.off
        self.gain[v] = gain
        self.home[v] = block
        self.present[v] = True
        self._clock += 1
        self.stamp[v] = self._clock
        tail = self.tail[block][slot]
        self.prv[v] = tail
        self.nxt[v] = -1
        if tail == -1:
            self.head[block][slot] = v
        else:
            self.nxt[tail] = v
        self.tail[block][slot] = v
        if gain > self.top[block]:
            self.top[block] = gain

    def remove(self, v: int) -> None:
        if not self.present[v]:
            return
        block, slot = self.home[v], self.gain[v] + self.off
        p, n = self.prv[v], self.nxt[v]
        if p == -1:
            self.head[block][slot] = n
        else:
            self.nxt[p] = n
        if n == -1:
            self.tail[block][slot] = p
        else:
            self.prv[n] = p
        self.present[v] = False

    def adjust(self, v: int, delta: int) -> None:
        if not self.present[v] or delta == 0:
            return
        block, gain = self.home[v], self.gain[v]
        self.remove(v)
        self.insert(v, block, gain + delta)

    def candidates(self, block: int):
        """Yield present vertices of a block in (gain desc, FIFO) order."""
        g = min(self.top[block], self.off)
        while g >= -self.off:
            v = self.head[block][g + self.off]
            if v == -1:
                if g == self.top[block]:
                    self.top[block] = g - 1
                g -= 1
                continue
            while v != -1:
                yield v
                v = self.nxt[v]
            g -= 1


# --------------------------------------------------------------------------
# shared engine state

class _Engine:
    def __init__(self, h: Hypergraph, blocks: int, bounds: list[int], assignment: list[int]):
        self.h = h
        self.k = blocks
        self.bounds = bounds
        self.pins = [list(e.pins) for e in h.edges]
        self.ew = [e.weight for e in h.edges]
        self.vw = [v.weight for v in h.vertices]
        self.inc = h.incidence
        self.assign = assignment
        self.phi = [[0] * blocks for _ in h.edges]
        for e, pins in enumerate(self.pins):
            for p in pins:
                self.phi[e][assignment[p]] += 1
        self.load = [0] * blocks   # qubit weight per block
        self.count = [0] * blocks  # qubit vertices per block
        for v, b in enumerate(assignment):
            self.load[b] += self.vw[v]
            self.count[b] += 1 if self.vw[v] > 0 else 0
        self.max_gain = max((sum(self.ew[e] for e in self.inc[v])
                             for v in range(len(self.vw))), default=1) or 1

    def cost(self) -> int:
        return sum((sum(1 for c in row if c) - 1) * w for row, w in zip(self.phi, self.ew))

    def overloaded(self) -> int:
        return sum(1 for b in range(self.k) if self.load[b] > self.bounds[b])

    def move_ok(self, v: int, target: int) -> bool:
        src = self.assign[v]
        if target == src:
            return False
        if self.vw[v] == 0:
            return True
        # the mover itself may overfill the target by its own weight while
        # the pass explores; prefixes are re-checked against the strict bound
        if self.load[target] > self.bounds[target]:
            return False
        if self.count[src] <= 1:
            return False  # a block must keep at least one qubit vertex
        return True

    def apply(self, v: int, target: int) -> None:
        src = self.assign[v]
        for e in self.inc[v]:
            self.phi[e][src] -= 1
            self.phi[e][target] += 1
        self.assign[v] = target
        w = self.vw[v]
        self.load[src] -= w
        self.load[target] += w
        if w > 0:
            self.count[src] -= 1
            self.count[target] += 1

    def gain_of(self, v: int, target: int) -> int:
        src = self.assign[v]
        g = 0
        for e in self.inc[v]:
            if self.phi[e][src] == 1:
                g += self.ew[e]
            if self.phi[e][target] == 0:
                g -= self.ew[e]
        return g


def gain(h: Hypergraph, assignment: list[int], vertex: int, target: int) -> int:
    """Change in lambda-minus-one if ``vertex`` moved to ``target`` (positive
    is an improvement)."""
    if assignment[vertex] == target:
        raise ValueError("vertex already lives in the target block")
    g = 0
    for e in h.incidence[vertex]:
        counts: dict[int, int] = {}
        for p in h.edges[e].pins:
            counts[assignment[p]] = counts.get(assignment[p], 0) + 1
        w = h.edges[e].weight
        if counts.get(assignment[vertex], 0) == 1:
            g += w
        if counts.get(target, 0) == 0:
            g -= w
    return g


# --------------------------------------------------------------------------
# passes

def _pass_2way(eng: _Engine, stats: PassStats | None = None) -> bool:
    """One FM pass; mutates eng.assign, returns True when the best prefix
    strictly improved the cost."""
    n = len(eng.vw)
    buckets = GainBuckets(n, eng.max_gain, 2)
    for v in range(n):
        side = eng.assign[v]
        buckets.insert(v, side, eng.gain_of(v, 1 - side))
        if stats:
            stats.gain_updates += 1

    start_cost = eng.cost()
    cur = start_cost
    best_cost = start_cost
    best_prefix = 0
    moves: list[tuple[int, int, int]] = []

    while True:
        chosen = None
        for side in (0, 1):
            for v in buckets.candidates(side):
                if eng.move_ok(v, 1 - side):
                    key = (buckets.gain[v], -buckets.stamp[v])
                    if chosen is None or key > chosen[0]:
                        chosen = (key, v, 1 - side)
                    break
        if chosen is None:
            break
        _, v, target = chosen
        src = eng.assign[v]
        moved_gain = buckets.gain[v]
        buckets.remove(v)

        for e in eng.inc[v]:
            w = eng.ew[e]
            phi = eng.phi[e]
            if phi[target] == 0:
                for u in eng.pins[e]:
                    buckets.adjust(u, w)
                    if stats:
                        stats.gain_updates += 1
            elif phi[target] == 1:
                for u in eng.pins[e]:
                    if eng.assign[u] == target:
                        buckets.adjust(u, -w)
                        if stats:
                            stats.gain_updates += 1
            phi[src] -= 1
            phi[target] += 1
            if phi[src] == 0:
                for u in eng.pins[e]:
                    buckets.adjust(u, -w)
                    if stats:
                        stats.gain_updates += 1
            elif phi[src] == 1:
                for u in eng.pins[e]:
                    if u != v and eng.assign[u] == src:
                        buckets.adjust(u, w)
                        if stats:
                            stats.gain_updates += 1
        eng.assign[v] = target
        w = eng.vw[v]
        eng.load[src] -= w
        eng.load[target] += w
        if w > 0:
            eng.count[src] -= 1
            eng.count[target] += 1

        cur -= moved_gain
        moves.append((v, src, target))
        if stats:
            stats.moves += 1
        if eng.overloaded() == 0 and cur < best_cost:
            best_cost = cur
            best_prefix = len(moves)

    for v, src, target in reversed(moves[best_prefix:]):
        eng.apply(v, src)
    return best_cost < start_cost


def _best_target(eng: _Engine, v: int) -> tuple[int, int] | None:
    """Highest-gain feasible target for v, ties to the lowest block id."""
    best = None
    for t in range(eng.k):
        if not eng.move_ok(v, t):
            continue
        g = eng.gain_of(v, t)
        if best is None or g > best[0]:
            best = (g, t)
    return best


def _pass_kway(eng: _Engine, stats: PassStats | None = None) -> bool:
    """Direct k-way pass: every vertex scored by its best feasible target,
    highest gain moves first, lowest vertex id on ties."""
    n = len(eng.vw)
    locked = [False] * n
    start_cost = eng.cost()
    cur = start_cost
    best_cost = start_cost
    best_prefix = 0
    moves: list[tuple[int, int, int]] = []

    while True:
        chosen = None
        for v in range(n):
            if locked[v]:
                continue
            bt = _best_target(eng, v)
            if stats:
                stats.gain_updates += 1
            if bt is None:
                continue
            key = (bt[0], -v)
            if chosen is None or key > chosen[0]:
                chosen = (key, v, bt[1])
        if chosen is None:
            break
        (g, _), v, target = chosen
        src = eng.assign[v]
        eng.apply(v, target)
        locked[v] = True
        cur -= g
        moves.append((v, src, target))
        if stats:
            stats.moves += 1
        if eng.overloaded() == 0 and cur < best_cost:
            best_cost = cur
            best_prefix = len(moves)

    for v, src, target in reversed(moves[best_prefix:]):
        eng.apply(v, src)
    return best_cost < start_cost


def fm_pass(h: Hypergraph, assignment: list[int], config: PartitionConfig,
            stats: PassStats | None = None) -> tuple[list[int], bool]:
    """Run one pass over a copy of ``assignment``; the input is not mutated."""
    caps = resolve_capacities(config.capacities, _qubit_weight(h), config.blocks)
    bounds = [math.ceil((1 + config.epsilon) * c) for c in caps]
    work = list(assignment)
    eng = _Engine(h, config.blocks, bounds, work)
    if config.blocks == 2:
        improved = _pass_2way(eng, stats)
    else:
        improved = _pass_kway(eng, stats)
    return work, improved


def _qubit_weight(h: Hypergraph) -> int:
    return sum(v.weight for v in h.vertices)


# --------------------------------------------------------------------------
# initial and random partitions

def initial_partition(h: Hypergraph, config: PartitionConfig) -> list[int]:
    """Seeded deal: shuffle the qubit vertices, hand the first k out to
    blocks 0..k-1 so no block starts empty, then hand each remaining one
    to the block with the most remaining capacity (lowest id on ties);
    grouping vertices land with their control qubit."""
    caps = resolve_capacities(config.capacities, _qubit_weight(h), config.blocks)
    rng = random.Random(config.seed)
    qubit_vs = [v.id for v in h.vertices if v.is_qubit]
    rng.shuffle(qubit_vs)
    remaining = list(caps)
    assignment = [0] * h.n_vertices()
    for pos, v in enumerate(qubit_vs):
        if pos < config.blocks:
            b = pos
        else:
            b = max(range(config.blocks), key=lambda i: (remaining[i], -i))
        if remaining[b] < 1:
            raise InfeasibleError("capacities exhausted during the deal")
        assignment[v] = b
        remaining[b] -= 1
    for v in h.vertices:
        if not v.is_qubit:
            anchor = v.anchor if v.anchor is not None else 0
            assignment[v.id] = assignment[anchor]
    return assignment


def _snap_free_vertices(h: Hypergraph, assignment: list[int]) -> None:
    """Move each weight-0 vertex into a block its edge already spans; never
    increases the cut and keeps every channel anchored to real qubits."""
    for v in h.vertices:
        if v.is_qubit or not h.incidence[v.id]:
            continue
        e = h.edges[h.incidence[v.id][0]]
        blocks = sorted(assignment[p] for p in e.pins if h.vertices[p].is_qubit)
        if blocks and assignment[v.id] not in blocks:
            assignment[v.id] = blocks[0]


def _finalize(h: Hypergraph, assignment: list[int], config: PartitionConfig,
              passes: int, seed_used: int, gain_updates: int) -> PartitionResult:
    _snap_free_vertices(h, assignment)
    cut = cut_cost(h, assignment, config.blocks)
    endpoints = block_endpoints(h, assignment, config.blocks)
    data = [0] * config.blocks
    for v in h.vertices:
        data[assignment[v.id]] += v.weight
    used = sum(1 for d in data if d > 0)
    per_block = tuple(BlockStats(data=data[b], e=endpoints[b]) for b in range(config.blocks))
    return PartitionResult(assignment=tuple(assignment), blocks_used=used, cut=cut,
                           per_block=per_block, passes_run=passes,
                           seed_used=seed_used, gain_updates=gain_updates)


def random_partition(h: Hypergraph, config: PartitionConfig) -> PartitionResult:
    """The seeded deal alone, no improvement passes; the baseline method."""
    assignment = initial_partition(h, config)
    return _finalize(h, assignment, config, 0, config.seed, 0)


# --------------------------------------------------------------------------
# drivers

def _balance_deviation(h: Hypergraph, assignment: list[int], config: PartitionConfig,
                       caps: list[int]) -> float:
    total = sum(caps)
    n = _qubit_weight(h)
    load = [0] * config.blocks
    for v in h.vertices:
        load[assignment[v.id]] += v.weight
    return sum(abs(load[b] - caps[b] * n / total) for b in range(config.blocks))


def _improve(h: Hypergraph, assignment: list[int], config: PartitionConfig,
             bounds: list[int]) -> tuple[int, int]:
    """Run passes until no improvement; returns (passes, gain updates)."""
    eng = _Engine(h, config.blocks, bounds, assignment)
    run_pass = _pass_2way if config.blocks == 2 else _pass_kway
    passes = 0
    updates = 0
    while passes < config.max_passes:
        stats = PassStats()
        improved = run_pass(eng, stats)
        passes += 1
        updates += stats.gain_updates
        if not improved:
            break
    return passes, updates


def _restart_driver(h: Hypergraph, config: PartitionConfig) -> PartitionResult:
    caps = resolve_capacities(config.capacities, _qubit_weight(h), config.blocks)
    if config.blocks > max(h.n_qubit_vertices(), 1):
        raise ValueError(f"{config.blocks} blocks exceed the "
                         f"{h.n_qubit_vertices()} qubit vertices")
    bounds = [math.ceil((1 + config.epsilon) * c) for c in caps]
    best = None
    best_key = None
    for r in range(config.restarts):
        seed = config.seed + r
        sub = PartitionConfig(blocks=config.blocks, capacities=config.capacities,
                              epsilon=config.epsilon, restarts=1, seed=seed,
                              mode=config.mode, max_passes=config.max_passes)
        assignment = initial_partition(h, sub)
        passes, updates = _improve(h, assignment, sub, bounds)
        result = _finalize(h, assignment, sub, passes, seed, updates)
        key = (result.cut.lambda_minus_one,
               _balance_deviation(h, list(result.assignment), sub, caps), r)
        if best_key is None or key < best_key:
            best, best_key = result, key
    return best


def bipartition(h: Hypergraph, config: PartitionConfig) -> PartitionResult:
    """Seeded restarts of (initial deal + FM passes) for two blocks."""
    if config.blocks != 2:
        raise ValueError("bipartition needs blocks=2")
    return _restart_driver(h, config)


def direct_kway(h: Hypergraph, config: PartitionConfig) -> PartitionResult:
    """Single-level k-way refinement with best-target moves."""
    return _restart_driver(h, config)


def recursive_kway(h: Hypergraph, config: PartitionConfig) -> PartitionResult:
    """Recursive bisection down to the capacity list.

    The capacity list is split into two halves with greedily balanced
    sums; after bipartitioning, each side keeps the restriction of every
    edge with two or more pins inside it, so later splits of an already
    cut edge are charged exactly once more, matching the global metric.
    """
    caps = resolve_capacities(config.capacities, _qubit_weight(h), config.blocks)
    if config.blocks > max(h.n_qubit_vertices(), 1):
        raise ValueError(f"{config.blocks} blocks exceed the "
                         f"{h.n_qubit_vertices()} qubit vertices")
    assignment = [0] * h.n_vertices()
    passes_total = 0
    updates_total = 0

    def split_blocks(block_ids: list[int]) -> tuple[list[int], list[int]]:
        left: list[int] = []
        right: list[int] = []
        lsum = rsum = 0
        for b in sorted(block_ids, key=lambda b: (-caps[b], b)):
            if lsum <= rsum:
                left.append(b)
                lsum += caps[b]
            else:
                right.append(b)
                rsum += caps[b]
        return sorted(left), sorted(right)

    def restrict(vertex_ids: list[int]) -> tuple[Hypergraph, dict[int, int]]:
        local = {g: i for i, g in enumerate(vertex_ids)}
        verts = []
        for g in vertex_ids:
            v = h.vertices[g]
            anchor = local.get(v.anchor) if v.anchor is not None else None
            verts.append(Vertex(id=local[g], weight=v.weight, ref=v.ref,
                                group=v.group, anchor=anchor))
        edges = []
        for e in h.edges:
            pins = tuple(local[p] for p in e.pins if p in local)
            if len(pins) >= 2:
                edges.append(Hyperedge(id=len(edges), pins=pins, weight=e.weight,
                                       origin=e.origin,
                                       control=local.get(e.control) if e.control is not None else None))
        return Hypergraph(verts, edges), local

    def rec(vertex_ids: list[int], block_ids: list[int]) -> None:
        nonlocal passes_total, updates_total
        if len(block_ids) == 1:
            for g in vertex_ids:
                assignment[g] = block_ids[0]
            return
        left, right = split_blocks(block_ids)
        sub_h, local = restrict(vertex_ids)
        weight_here = sum(v.weight for v in sub_h.vertices)
        # a side may not hoard so much that the other cannot fill its blocks
        lbound = min(sum(math.ceil((1 + config.epsilon) * caps[b]) for b in left),
                     weight_here - len(right))
        rbound = min(sum(math.ceil((1 + config.epsilon) * caps[b]) for b in right),
                     weight_here - len(left))
        side_caps = (sum(caps[b] for b in left), sum(caps[b] for b in right))
        sub = PartitionConfig(blocks=2, capacities=side_caps, epsilon=config.epsilon,
                              restarts=config.restarts, seed=config.seed,
                              max_passes=config.max_passes)
        # run the restart loop with the exact per-side bounds
        best = None
        best_key = None
        if side_caps[0] + side_caps[1] < weight_here:
            raise InfeasibleError("side capacities cannot host the sub-hypergraph")
        for r in range(config.restarts):
            seed_cfg = PartitionConfig(blocks=2, capacities=side_caps,
                                       epsilon=config.epsilon, restarts=1,
                                       seed=config.seed + r, max_passes=config.max_passes)
            side_assign = initial_partition(sub_h, seed_cfg)
            eng = _Engine(sub_h, 2, [lbound, rbound], side_assign)
            passes = 0
            updates = 0
            while passes < config.max_passes:
                stats = PassStats()
                improved = _pass_2way(eng, stats)
                passes += 1
                updates += stats.gain_updates
                if not improved:
                    break
            cost = cut_cost(sub_h, side_assign, 2).lambda_minus_one
            load0 = sum(sub_h.vertices[i].weight for i in range(sub_h.n_vertices())
                        if side_assign[i] == 0)
            dev = abs(load0 - side_caps[0] * weight_here / max(sum(side_caps), 1))
            key = (cost, dev, r)
            if best_key is None or key < best_key:
                best, best_key = list(side_assign), key
                best_stats = (passes, updates)
        passes_total += best_stats[0]
        updates_total += best_stats[1]
        left_vs = [g for g in vertex_ids if best[local[g]] == 0]
        right_vs = [g for g in vertex_ids if best[local[g]] == 1]
        rec(left_vs, left)
        rec(right_vs, right)

    rec(list(range(h.n_vertices())), list(range(config.blocks)))
    return _finalize(h, assignment, config, passes_total, config.seed, updates_total)


def partition(h: Hypergraph, config: PartitionConfig) -> PartitionResult:
    """Dispatch on config.mode."""
    if config.mode is Mode.RANDOM:
        return random_partition(h, config)
    if config.mode is Mode.DIRECT_KWAY:
        return direct_kway(h, config)
    if config.blocks == 2:
        return bipartition(h, config)
    return recursive_kway(h, config)
