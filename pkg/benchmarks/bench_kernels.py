"""Compiled kernels against the pure-Python fallback.

Each backend runs in its own interpreter (MARKEDKH_PURE selects the fallback),
assembling and computing homology for a few alternating braid closures.  The
kernels are also timed directly on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORDS = {
    "8 crossings": [1, -2] * 4,
    "10 crossings": [1, -2] * 5,
    "12 crossings": [1, -2] * 6,
    "14 crossings": [1, -2, 1, -2, 3, -2, 1] * 2,
}

CHILD = r"""
import json, sys, time
from markedkh import kernels
from markedkh.cube import Cube
from markedkh.diagram import MarkingData, braid_closure
from markedkh.khovanov import assemble
words, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
out = {"backend": kernels.BACKEND, "cases": {}}
for name, w in words.items():
    d = braid_closure(w)
    best = {}
    for _ in range(repeat):
        t = time.perf_counter()
        cube = Cube(d, MarkingData())
        t1 = time.perf_counter()
        cx = assemble(d, MarkingData(), check=False)
        t2 = time.perf_counter()
        rank = cx.total_rank()
        t3 = time.perf_counter()
        for k, v in (("resolve", t1 - t), ("assemble", t2 - t1), ("homology", t3 - t2)):
            best[k] = min(best.get(k, v), v)
    best["rank"] = rank
    out["cases"][name] = best
print(json.dumps(out))
"""


def run_backend(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("MARKEDKH_PURE", None)
    if pure:
        env["MARKEDKH_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", CHILD, json.dumps(WORDS), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args(argv)
    fast = run_backend(False, a.repeat)
    slow = run_backend(True, a.repeat)
    if fast["backend"] != "compiled":
        print("compiled extension not built; both runs use the fallback")
    print(f"{'case':<14}{'stage':<10}{'compiled s':>12}{'python s':>12}{'speedup':>9}")
    for name in WORDS:
        f, s = fast["cases"][name], slow["cases"][name]
        assert f["rank"] == s["rank"], "backends disagree"
        for stage in ("resolve", "assemble", "homology"):
            ratio = s[stage] / f[stage] if f[stage] else float("inf")
            print(f"{name:<14}{stage:<10}{f[stage]:>12.4f}{s[stage]:>12.4f}{ratio:>9.1f}")
    return 0


if __name__ == "__main__":
    t0 = time.perf_counter()
    code = main()
    print(f"total {time.perf_counter() - t0:.1f} s")
    sys.exit(code)
