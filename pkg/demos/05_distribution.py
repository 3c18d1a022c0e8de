#!/usr/bin/env python3
# Turn a partition into an execution plan: which QPU runs each gate, which
# channels carry shared control state across the cut, and what each block's
# program looks like with explicit entangle/disentangle calls.

from qpart import (PartitionConfig, build_hypergraph, emit_subcircuits,
                   find_groups, generate, partition, plan_distribution)

qft = generate("qft", 4)
groups = find_groups(qft)
h = build_hypergraph(qft, groups)
res = partition(h, PartitionConfig(blocks=2))
plan = plan_distribution(qft, h, list(res.assignment), groups=groups)

print("assignment:", plan.assignment)
print("channels:")
for ch in plan.channels:
    kind = "primary" if ch.primary else "fallback"
    print(f"  {kind} channel {ch.id}: vertex {ch.carries} "
          f"from QPU {ch.home} to QPU {ch.remote}, live gates "
          f"{ch.first_use}..{ch.last_use}")

print("per block:")
for b in plan.per_block:
    r = "-" if b.r is None else f"{b.r:.3f}"
    print(f"  QPU {b.block}: data={b.data} ops={b.o} comm={b.e} r={r}")
print("total ebits:", plan.ebits)

for i, text in enumerate(emit_subcircuits(qft, plan)):
    print(f"\n--- QPU {i} program ---")
    print(text, end="")
