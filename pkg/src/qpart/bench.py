"""Seeded experiment suite over circuits x methods x block counts.

A suite runs the full pipeline (parse -> [group] -> build -> partition ->
account) for every requested combination and collects one BenchRow per
(circuit, method, seed, k).  The Random method is the baseline: it is run
once per seed in the suite's range, and a method's improvement is measured
against the mean random ebits over that range, always on the same
hypergraph the method itself was partitioned on.

Row order is deterministic and the CSV is byte-stable for a given spec
apart from the runtime column.
"""
from __future__ import annotations

import csv
import json
import statistics
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import Circuit, parse_qasm
from .distribution import DistributionPlan, plan_distribution
from .fm import Mode, PartitionConfig, partition, resolve_capacities
from .generators import CircuitFamily, generate
from .grouping import find_groups
from .hypergraph import Hypergraph, build_hypergraph

METHODS = ("Random", "FM", "FMGrouped")


@dataclass(frozen=True)
class CircuitJob:
    """One circuit to benchmark: a generated family or a QASM file."""

    label: str
    family: CircuitFamily | None = None
    n: int | None = None
    gen_seed: int = 0
    path: str | None = None

    @classmethod
    def parse(cls, entry) -> "CircuitJob":
        """Accepts {"family","n","seed"?}, {"file"}, "family:n[:seed]", or a path."""
        if isinstance(entry, dict):
            if "file" in entry:
                return cls(label=Path(entry["file"]).stem, path=entry["file"])
            fam = CircuitFamily(entry["family"])
            n = int(entry["n"])
            seed = int(entry.get("seed", 0))
            return cls(label=f"{fam.value}{n}", family=fam, n=n, gen_seed=seed)
        text = str(entry)
        head = text.split(":", 1)[0]
        if ":" in text and head in {f.value for f in CircuitFamily}:
            parts = text.split(":")
            fam = CircuitFamily(parts[0])
            n = int(parts[1])
            seed = int(parts[2]) if len(parts) > 2 else 0
            return cls(label=f"{fam.value}{n}", family=fam, n=n, gen_seed=seed)
        return cls(label=Path(text).stem, path=text)

    def load(self) -> Circuit:
        if self.path is not None:
            return parse_qasm(Path(self.path).read_text(), name=self.label)
        return generate(self.family, self.n, self.gen_seed)


@dataclass(frozen=True)
class SuiteSpec:
    """What to run.  ``capacities`` aligns with ``parts`` entry for entry;
    None (or a None entry) means an equal split.  Seeds are the half-open
    range [seed_from, seed_to) used for the Random baseline."""

    circuits: tuple[CircuitJob, ...]
    methods: tuple[str, ...] = METHODS
    parts: tuple[int, ...] = (2,)
    capacities: tuple[tuple[int, ...] | None, ...] | None = None
    seed_from: int = 0
    seed_to: int = 1000
    epsilon: float = 0.0
    restarts: int = 8
    mode: Mode = Mode.RECURSIVE_BISECT

    def __post_init__(self) -> None:
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
        if self.capacities is not None and len(self.capacities) != len(self.parts):
            raise ValueError("capacities must align with parts, one profile per k")
        if self.seed_to <= self.seed_from:
            raise ValueError("empty seed range")

    @classmethod
    def from_json(cls, data: dict) -> "SuiteSpec":
        seeds = data.get("seeds", {})
        caps = data.get("capacities")
        if caps is not None:
            caps = tuple(tuple(c) if c is not None else None for c in caps)
        return cls(
            circuits=tuple(CircuitJob.parse(c) for c in data["circuits"]),
            methods=tuple(data.get("methods", METHODS)),
            parts=tuple(data.get("parts", (2,))),
            capacities=caps,
            seed_from=int(seeds.get("from", 0)),
            seed_to=int(seeds.get("to", 1000)),
            epsilon=float(data.get("epsilon", 0.0)),
            restarts=int(data.get("restarts", 8)),
            mode=Mode(data.get("mode", "fm")),
        )


CSV_COLUMNS = ("circuit", "n", "size", "depth", "method", "k", "capacities",
               "seed", "cut_edges", "ebits", "r_per_block", "runtime_ms")


@dataclass(frozen=True)
class BenchRow:
    circuit: str
    n: int
    size: int
    depth: int
    method: str
    k: int
    capacities: tuple[int, ...]
    seed: int
    cut_edges: int
    ebits: int
    r_per_block: tuple[float | None, ...]
    runtime_ms: float
    plan: DistributionPlan | None = field(default=None, repr=False, compare=False)

    def csv_cells(self) -> list[str]:
        return [self.circuit, str(self.n), str(self.size), str(self.depth),
                self.method, str(self.k),
                ";".join(str(c) for c in self.capacities),
                str(self.seed), str(self.cut_edges), str(self.ebits),
                ";".join("-" if r is None else str(round(r, 4))
                         for r in self.r_per_block),
                f"{self.runtime_ms:.3f}"]


def _one_run(job: CircuitJob, circuit: Circuit, h: Hypergraph, groups,
             method: str, config: PartitionConfig, caps: list[int]) -> BenchRow:
    t0 = time.perf_counter()
    result = partition(h, config)
    ms = (time.perf_counter() - t0) * 1000.0
    plan = plan_distribution(circuit, h, list(result.assignment), groups=groups)
    return BenchRow(circuit=job.label, n=circuit.width, size=circuit.size,
                    depth=circuit.depth, method=method, k=config.blocks,
                    capacities=tuple(caps), seed=config.seed,
                    cut_edges=result.cut.cut_edges, ebits=result.cut.ebits,
                    r_per_block=tuple(p.r for p in plan.per_block),
                    runtime_ms=ms, plan=plan)


def run_suite(spec: SuiteSpec, strict: bool = False) -> tuple[list[BenchRow], list[dict]]:
    """All rows in spec order plus one improvement summary per (circuit, k).

    A missing circuit file is skipped with a warning unless ``strict``.
    Improvement is None when there is no baseline or the baseline is zero.
    """
    rows: list[BenchRow] = []
    summaries: list[dict] = []
    for job in spec.circuits:
        try:
            circuit = job.load()
        except FileNotFoundError:
            if strict:
                raise
            print(f"warning: skipping missing circuit file {job.path}", file=sys.stderr)
            continue
        h_plain = build_hypergraph(circuit)
        groups = find_groups(circuit) if "FMGrouped" in spec.methods else None
        h_grouped = build_hypergraph(circuit, groups) if groups is not None else None

        for ki, k in enumerate(spec.parts):
            caps_in = spec.capacities[ki] if spec.capacities is not None else None
            caps = resolve_capacities(caps_in, circuit.width, k)
            summary = {"circuit": job.label, "n": circuit.width, "k": k,
                       "random_mean_ebits": None,
                       "fm_ebits": None, "fm_improvement_pct": None,
                       "fm_grouped_ebits": None, "fm_grouped_improvement_pct": None}

            def config(method_mode: Mode, seed: int, restarts: int) -> PartitionConfig:
                return PartitionConfig(blocks=k, capacities=caps_in,
                                       epsilon=spec.epsilon, restarts=restarts,
                                       seed=seed, mode=method_mode,
                                       max_passes=32)

            if "Random" in spec.methods:
                vals = []
                for seed in range(spec.seed_from, spec.seed_to):
                    row = _one_run(job, circuit, h_plain, None, "Random",
                                   config(Mode.RANDOM, seed, 1), caps)
                    rows.append(row)
                    vals.append(row.ebits)
                summary["random_mean_ebits"] = statistics.mean(vals)

            if "FM" in spec.methods:
                row = _one_run(job, circuit, h_plain, None, "FM",
                               config(spec.mode, spec.seed_from, spec.restarts), caps)
                rows.append(row)
                summary["fm_ebits"] = row.ebits
                base = summary["random_mean_ebits"]
                if base:
                    summary["fm_improvement_pct"] = 100.0 * (base - row.ebits) / base

            if "FMGrouped" in spec.methods:
                row = _one_run(job, circuit, h_grouped, groups, "FMGrouped",
                               config(spec.mode, spec.seed_from, spec.restarts), caps)
                rows.append(row)
                summary["fm_grouped_ebits"] = row.ebits
                if "Random" in spec.methods:
                    # baseline on the same (grouped) hypergraph the method saw
                    base = statistics.mean(
                        partition(h_grouped, config(Mode.RANDOM, seed, 1)).cut.ebits
                        for seed in range(spec.seed_from, spec.seed_to))
                    if base:
                        summary["fm_grouped_improvement_pct"] = \
                            100.0 * (base - row.ebits) / base

            summaries.append(summary)
    return rows, summaries


def write_csv(rows: list[BenchRow], out) -> None:
    """Write rows to a path or file object, header first, spec order."""
    if hasattr(out, "write"):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(row.csv_cells())
        return
    with open(out, "w", newline="") as fh:
        write_csv(rows, fh)


def format_summary(summaries: list[dict]) -> str:
    lines = []
    for s in summaries:
        bits = [f"{s['circuit']} k={s['k']}"]
        if s["random_mean_ebits"] is not None:
            bits.append(f"random mean ebits {s['random_mean_ebits']:.2f}")
        if s["fm_ebits"] is not None:
            imp = s["fm_improvement_pct"]
            bits.append(f"FM ebits {s['fm_ebits']}"
                        + (f" ({imp:.1f}% better)" if imp is not None else ""))
        if s["fm_grouped_ebits"] is not None:
            imp = s["fm_grouped_improvement_pct"]
            bits.append(f"FMGrouped ebits {s['fm_grouped_ebits']}"
                        + (f" ({imp:.1f}% better)" if imp is not None else ""))
        lines.append("  ".join(bits))
    return "\n".join(lines)


def load_suite(path: str) -> SuiteSpec:
    with open(path) as fh:
        return SuiteSpec.from_json(json.load(fh))
