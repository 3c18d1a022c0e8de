"""Command-line front end: stats, partition, hmetis export, bench.

Circuit arguments are QASM file paths; ``family:n[:seed]`` shorthands
(ghz:10, qft:8, random:12:3) generate the built-in families instead.
``partition`` also accepts a .hmetis/.hgr file and then partitions the
imported hypergraph directly, without circuit-level accounting.

Exit codes: 0 success, 1 usage or input error, 2 infeasible capacities.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from .bench import CircuitJob, format_summary, load_suite, run_suite, write_csv
from .circuit import Circuit, QasmError, parse_qasm
from .distribution import emit_subcircuits, plan_distribution
from .fm import InfeasibleError, Mode, PartitionConfig, partition, resolve_capacities
from .grouping import find_groups, segment_by_depth, segment_subcircuit
from .hypergraph import build_hypergraph, export_hmetis, import_hmetis

BASELINE_SEEDS = 1000


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we reserve that
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_circuit(arg: str) -> Circuit:
    job = CircuitJob.parse(arg)
    if job.path is not None and not Path(job.path).exists():
        raise FileNotFoundError(f"no such file: {job.path}")
    return job.load()


def _parse_caps(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        caps = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise QasmError(f"bad capacity list {text!r}; expected e.g. 3,3,2")
    return caps


def _report(circuit_label: str, n: int, method: str, k: int,
            cut, blocks: list[dict], improvement: float | None) -> dict:
    report = {"circuit": circuit_label, "n": n, "method": method, "k": k,
              "cut_edges": cut.cut_edges, "ebits": cut.ebits, "blocks": blocks}
    if improvement is not None:
        report["improvement_pct"] = improvement
    return report


def _random_mean_ebits(h, config: PartitionConfig) -> float:
    vals = []
    for seed in range(config.seed, config.seed + BASELINE_SEEDS):
        cfg = PartitionConfig(blocks=config.blocks, capacities=config.capacities,
                              epsilon=config.epsilon, restarts=1, seed=seed,
                              mode=Mode.RANDOM)
        vals.append(partition(h, cfg).cut.ebits)
    return statistics.mean(vals)


def _cmd_stats(args) -> int:
    c = _load_circuit(args.file)
    print(f"width={c.width} size={c.size} depth={c.depth}")
    return 0


def _cmd_hmetis(args) -> int:
    c = _load_circuit(args.file)
    groups = find_groups(c) if args.grouping == "on" else None
    text = export_hmetis(build_hypergraph(c, groups))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _partition_hypergraph_file(args) -> int:
    h = import_hmetis(Path(args.file).read_text())
    config = PartitionConfig(blocks=args.parts, capacities=_parse_caps(args.capacities),
                             epsilon=args.epsilon, restarts=args.restarts,
                             seed=args.seed, mode=Mode(args.method))
    result = partition(h, config)
    improvement = None
    if config.mode is not Mode.RANDOM:
        base = _random_mean_ebits(h, config)
        if base:
            improvement = 100.0 * (base - result.cut.ebits) / base
    blocks = [{"data": s.data, "e": s.e, "o": s.o, "r": s.r} for s in result.per_block]
    report = _report(Path(args.file).stem, h.n_qubit_vertices(), args.method,
                     args.parts, result.cut, blocks, improvement)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"cut_edges={result.cut.cut_edges} ebits={result.cut.ebits}")
        for s in result.per_block:
            print(f"  block data={s.data} e={s.e}")
        if improvement is not None:
            print(f"improvement={improvement:.1f}%")
    return 0


def _run_pipeline(circuit: Circuit, args, config: PartitionConfig):
    """Partition one circuit and account it; returns (result, plan, groups)."""
    groups = find_groups(circuit) if args.grouping == "on" else None
    h = build_hypergraph(circuit, groups)
    result = partition(h, config)
    plan = plan_distribution(circuit, h, list(result.assignment), groups=groups)
    improvement = None
    if config.mode is not Mode.RANDOM and circuit.width >= config.blocks:
        base = _random_mean_ebits(h, config)
        if base:
            improvement = 100.0 * (base - result.cut.ebits) / base
    return result, plan, improvement


def _plan_blocks(plan) -> list[dict]:
    return [{"data": p.data, "e": p.e, "o": p.o, "r": p.r} for p in plan.per_block]


def _cmd_partition(args) -> int:
    if args.file.endswith((".hmetis", ".hgr")):
        for flag in ("segment_depth", "emit"):
            if getattr(args, flag):
                raise QasmError(f"--{flag.replace('_', '-')} needs a circuit, "
                                "not a hypergraph file")
        return _partition_hypergraph_file(args)
    circuit = _load_circuit(args.file)
    config = PartitionConfig(blocks=args.parts, capacities=_parse_caps(args.capacities),
                             epsilon=args.epsilon, restarts=args.restarts,
                             seed=args.seed, mode=Mode(args.method))
    # surface capacity infeasibility before any partitioning work
    resolve_capacities(config.capacities, circuit.width, config.blocks)

    if args.segment_depth:
        segments = segment_by_depth(circuit, args.segment_depth)
        reports = []
        total_cut = total_ebits = 0
        for seg in segments:
            sub = segment_subcircuit(circuit, seg)
            result, plan, improvement = _run_pipeline(sub, args, config)
            reports.append(_report(f"{circuit.name}[{seg.index}]", sub.width,
                                   args.method, args.parts, result.cut,
                                   _plan_blocks(plan), improvement))
            total_cut += result.cut.cut_edges
            total_ebits += result.cut.ebits
            if args.emit:
                _write_subcircuits(sub, plan, args.emit,
                                   prefix=f"{circuit.name}_seg{seg.index}")
        if args.json:
            print(json.dumps({"circuit": circuit.name, "n": circuit.width,
                              "method": args.method, "k": args.parts,
                              "cut_edges": total_cut, "ebits": total_ebits,
                              "segments": reports}, indent=2))
        else:
            for rep in reports:
                print(f"{rep['circuit']}: cut_edges={rep['cut_edges']} "
                      f"ebits={rep['ebits']}")
            print(f"total: cut_edges={total_cut} ebits={total_ebits}")
        return 0

    result, plan, improvement = _run_pipeline(circuit, args, config)
    report = _report(circuit.name, circuit.width, args.method, args.parts,
                     result.cut, _plan_blocks(plan), improvement)
    if args.emit:
        _write_subcircuits(circuit, plan, args.emit, prefix=circuit.name)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"cut_edges={result.cut.cut_edges} ebits={result.cut.ebits}")
        for p in plan.per_block:
            r = "-" if p.r is None else f"{p.r:.3f}"
            print(f"  block {p.block}: data={p.data} o={p.o} e={p.e} r={r}")
        if improvement is not None:
            print(f"improvement={improvement:.1f}%")
    return 0


def _write_subcircuits(circuit: Circuit, plan, out_dir: str, prefix: str) -> None:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    for b, text in enumerate(emit_subcircuits(circuit, plan)):
        (d / f"{prefix}_block{b}.qasm").write_text(text)


def _cmd_bench(args) -> int:
    spec = load_suite(args.suite)
    rows, summaries = run_suite(spec, strict=args.strict)
    if args.out:
        write_csv(rows, args.out)
        print(format_summary(summaries))
    else:
        write_csv(rows, sys.stdout)
        print(format_summary(summaries), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qpart",
                description="circuit partitioning for distributed execution")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", help="print width/size/depth of a circuit")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_stats)

    s = sub.add_parser("partition", help="partition a circuit over k QPUs")
    s.add_argument("file")
    s.add_argument("--parts", type=int, required=True, metavar="K")
    s.add_argument("--capacities", metavar="a,b,...")
    s.add_argument("--method", choices=["fm", "kway", "random"], default="fm")
    s.add_argument("--grouping", choices=["on", "off"], default="on")
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--segment-depth", type=int, default=0, metavar="W")
    s.add_argument("--emit", metavar="DIR", help="write per-QPU subcircuits here")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_partition)

    s = sub.add_parser("hmetis", help="export the circuit hypergraph")
    s.add_argument("file")
    s.add_argument("--out", metavar="PATH")
    s.add_argument("--grouping", choices=["on", "off"], default="off")
    s.set_defaults(fn=_cmd_hmetis)

    s = sub.add_parser("bench", help="run a benchmark suite to CSV")
    s.add_argument("--suite", required=True, metavar="SPEC.json")
    s.add_argument("--out", metavar="CSV")
    s.add_argument("--strict", action="store_true",
                   help="fail on missing circuit files instead of skipping")
    s.set_defaults(fn=_cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as ex:  # argparse usage failure path
        return ex.code if isinstance(ex.code, int) else 1
    except InfeasibleError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except (QasmError, FileNotFoundError, ValueError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
