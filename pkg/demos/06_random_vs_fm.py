#!/usr/bin/env python3
# Run a small seeded suite and compare the refined partitions against the
# random baseline.  This is the same machinery behind `qpart bench`.

import io

from qpart.bench import CircuitJob, SuiteSpec, format_summary, run_suite, write_csv

spec = SuiteSpec(
    circuits=tuple(CircuitJob.parse(s) for s in ("ghz:10", "qft:8")),
    methods=("Random", "FM", "FMGrouped"),
    parts=(2,),
    seed_from=0,
    seed_to=50,            # half-open range: seeds 0..49
    restarts=8,
)

rows, summaries = run_suite(spec)
print(f"{len(rows)} rows collected")
print(format_summary(summaries))

# first few CSV lines, as `qpart bench --out` would write them
buf = io.StringIO()
write_csv(rows[:3] + rows[-2:], buf)
print("\ncsv sample:")
print(buf.getvalue(), end="")
