"""Compare the compiled jet kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the raw multiplication kernel on dense jets and two end-to-end
workloads (curvature suite, normal-coordinates pipeline) under each
backend.  The backend is chosen at import time, so each half of the
comparison runs in a subprocess with SYMPJET_PURE set accordingly.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _run_case(case: str, repeat: int) -> float:
    start = time.perf_counter()
    if case == "mul_dense":
        from sympjet._kernels import mul_trunc
        from sympjet.jets import monomials_upto
        from sympjet.rationals import Q

        n, order = 4, 6
        keys = monomials_upto(n, order)
        a = {k: Q(i + 1, 7) for i, k in enumerate(keys)}
        b = {k: Q(2 * i - 5, 3) for i, k in enumerate(keys)}
        for _ in range(repeat * 20):
            mul_trunc(a, b, order)
    elif case == "curvature_suite":
        from sympjet.charts import random_fedosov_chart
        from sympjet.curvature import curvature, identity_report, ricci

        for i in range(repeat):
            chart = random_fedosov_chart(1000 + i, 4, 4)
            cd = curvature(chart)
            identity_report(chart, cd)
            ricci(chart, cd)
    elif case == "normal_pipeline":
        from sympjet.charts import random_fedosov_chart
        from sympjet.normal import normal_tensors

        for i in range(repeat):
            chart = random_fedosov_chart(2000 + i, 4, 4)
            normal_tensors(chart, 2)
    else:
        raise SystemExit(f"unknown case {case}")
    return time.perf_counter() - start


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--case", help=argparse.SUPPRESS)  # subprocess mode
    args = parser.parse_args()

    if args.case:
        from sympjet import kernel_backend

        elapsed = _run_case(args.case, args.repeat)
        print(json.dumps({"backend": kernel_backend, "seconds": elapsed}))
        return 0

    cases = ["mul_dense", "curvature_suite", "normal_pipeline"]
    results = {}
    for case in cases:
        results[case] = {}
        for backend, env_value in (("compiled", ""), ("pure", "1")):
            env = dict(os.environ)
            if env_value:
                env["SYMPJET_PURE"] = env_value
            else:
                env.pop("SYMPJET_PURE", None)
            proc = subprocess.run(
                [sys.executable, __file__, "--case", case, "--repeat", str(args.repeat)],
                capture_output=True,
                text=True,
                env=env,
            )
            if proc.returncode != 0:
                print(proc.stderr, file=sys.stderr)
                return 1
            payload = json.loads(proc.stdout)
            if payload["backend"] != backend:
                print(f"note: requested {backend} backend, got {payload['backend']}")
            results[case][backend] = payload["seconds"]

    width = max(len(c) for c in cases)
    print(f"{'case':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}")
    for case in cases:
        fast = results[case]["compiled"]
        slow = results[case]["pure"]
        print(f"{case:<{width}}  {fast:>9.3f}s  {slow:>9.3f}s  {slow / fast:>7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
