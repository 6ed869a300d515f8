"""Compare the compiled kernels against the pure-Python fallback.

Each workload runs in a fresh interpreter, once with the compiled kernels and
once with DQCOUNT_PURE=1, and the best of ``--repeat`` wall times is reported.
Counts from both runs must agree.

    python3 benchmarks/bench_kernel.py [--repeat 3] [--json]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    # BDD kernel: closure, components and candidate enumeration
    "symbolic two-col n=10": "count(gen_two_col(10, 0), 'symbolic')",
    "symbolic ind-set n=7 k=2": "count(gen_ind_set(7, 2), 'symbolic')",
    "symbolic random n=6": "count(gen_random(GenSpec(n=6, seed=3, widths=(3, 3), gates=8)), 'symbolic')",
    "expansion two-col n=8": "count(gen_two_col(8, 0), 'expansion')",
    # search kernel: brute-force oracle
    "brute ind-set n=4 k=1": "brute_count(gen_ind_set(4, 1), max_cells=64)",
    "brute ind-set n=5 k=2": "brute_count(gen_ind_set(5, 2), max_cells=64)",
    "brute random k=3": "brute_count(gen_random(GenSpec(n=5, seed=2, widths=(4, 4, 3), gates=4)), max_cells=64)",
}

_RUNNER = """
import time, json
from dqcount.brute import brute_count
from dqcount.counter import count
from dqcount.generators import GenSpec, gen_ind_set, gen_random, gen_two_col
from dqcount.bdd import KERNEL_COMPILED
best = None
for _ in range({repeat}):
    t0 = time.perf_counter()
    r = {expr}
    dt = time.perf_counter() - t0
    best = dt if best is None else min(best, dt)
print(json.dumps({{"seconds": best, "count": str(getattr(r, "count", r)), "compiled": KERNEL_COMPILED}}))
"""


def run(expr: str, repeat: int, pure: bool) -> dict:
    env = dict(os.environ)
    env.pop("DQCOUNT_PURE", None)
    if pure:
        env["DQCOUNT_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", _RUNNER.format(repeat=repeat, expr=expr)],
        env=env, capture_output=True, text=True, check=True,
    ).stdout
    return json.loads(out)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--only", help="substring filter on workload names")
    args = ap.parse_args(argv)

    rows = []
    for name, expr in WORKLOADS.items():
        if args.only and args.only not in name:
            continue
        fast = run(expr, args.repeat, pure=False)
        slow = run(expr, args.repeat, pure=True)
        if fast["count"] != slow["count"]:
            print(f"count mismatch on {name}: {fast['count']} vs {slow['count']}", file=sys.stderr)
            return 1
        rows.append({
            "workload": name,
            "compiled_s": fast["seconds"],
            "pure_s": slow["seconds"],
            "speedup": slow["seconds"] / fast["seconds"] if fast["seconds"] else float("inf"),
            "compiled_available": fast["compiled"],
        })

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    if rows and not rows[0]["compiled_available"]:
        print("note: compiled kernels are not built, both columns use the pure kernel")
    print(f"{'workload':30} {'compiled':>10} {'pure':>10} {'speedup':>8}")
    for r in rows:
        print(f"{r['workload']:30} {r['compiled_s']:10.4f} {r['pure_s']:10.4f} {r['speedup']:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
