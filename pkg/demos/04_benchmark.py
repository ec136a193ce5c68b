"""A desk-scale Monte-Carlo sweep and what its summary says.

Pass an output directory as the first argument to keep the CSV and summary.
"""

import sys
import tempfile

from resque import BenchConfig, run_bench, write_results

config = BenchConfig(n_instances=40, timing=False, workers=2)
result = run_bench(config)
out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="resque-bench-")
csv_path, summary_path = write_results(result, out)

s = result.summary
print(f"{'algorithm':14s} {'coverage':>9s} {'+/- sd':>7s} {'queries':>8s} {'rewires':>8s}")
for algo, e in s["algorithms"].items():
    print(f"{algo:14s} {e['normalized_coverage_mean']:9.4f} {e['normalized_coverage_std']:7.4f} "
          f"{e['queries_mean']:8.2f} {e['rewires_mean']:8.2f}")

cmp = s["resque_vs_sg"]
print(f"\nresque >= sg on {cmp['fraction_resque_ge_sg']:.0%} of instances, "
      f"strictly better on {cmp['fraction_resque_gt_sg']:.0%}")
print(f"mean coverage gap {cmp['mean_gap']:.2e} (standard error {cmp['gap_stderr']:.2e})")
print(f"certified {s['certified_instances']} instances exactly, bound violations {s['bound_violations']}")
print("\nwrote", csv_path, "and", summary_path)
