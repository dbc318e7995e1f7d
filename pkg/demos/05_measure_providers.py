"""Benchmark harness demo: timed trials, retention, statistics, report.

A mock provider with an artificial delay stands in for a hosted model, so
the whole measurement pipeline runs offline: per-trial latency,
structural-validity retention, mean and sample-SD per cell, and a Markdown
report that also carries the published reference numbers for hosted
providers. Records aggregate by provider name, so sweeps at different
delays are summarized separately here.
"""

from scenedirector import (
    default_config,
    run_benchmark,
    standard_classes,
    stats_to_markdown,
    summarize,
)

classes = standard_classes()[:3]  # 1O-1A, 5O-1A, 5O-2A

# How latency statistics track the underlying delay.
for delay in (0.02, 0.08):
    config = default_config("mock", mock_latency=delay, mock_seed=1)
    stats = summarize(run_benchmark([config], classes[:1], trials=5))[0]
    print(f"delay {delay:.2f}s -> M={stats.mean:.3f}s SD={stats.sd:.4f}s "
          f"validity={stats.validity_rate:.0%} over {stats.trial_count} trials")

# A full sweep and its report.
records = run_benchmark([default_config("mock", mock_seed=3)], classes, trials=5)
print(f"\nsweep: {len(records)} records, {sum(r.retained for r in records)} retained")
print()
print(stats_to_markdown(summarize(records)))
