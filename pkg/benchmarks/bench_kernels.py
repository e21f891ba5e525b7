"""Compare the compiled and pure-Python kernels on real multiplier netlists.

    python benchmarks/bench_kernels.py [--bits 16,36,64] [--vectors 1024] [--repeat 3]

Both backends run on identical inputs; their outputs must agree bit for bit.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

import numpy as np

from revmult import build_toom25
from revmult._backend import _table, kernels
from revmult.sim import pack


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bits", default="16,36,64")
    ap.add_argument("--vectors", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    try:
        cy = kernels("cython")
    except ImportError:
        print("compiled kernels not built; run: pip install -e . --no-build-isolation")
        return 1
    py = kernels("python")
    rng = random.Random(args.seed)
    print(f"{'n':>5} {'gates':>9} {'kernel':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in (int(b) for b in args.bits.split(",")):
        c = build_toom25(n)
        table = _table(c.table)
        x, y = c.register("x"), c.register("y")
        xs = [rng.getrandbits(n) for _ in range(args.vectors)]
        ys = [rng.getrandbits(n) for _ in range(args.vectors)]
        base = pack({x.wires: xs, y.wires: ys}, c.width, args.vectors)
        states = {}

        def run(mod, key):
            s = base.copy()
            mod.simulate(table, s, 0, None)
            states[key] = s

        tp = _time(lambda: run(py, "py"), args.repeat)
        tc = _time(lambda: run(cy, "cy"), args.repeat)
        if not np.array_equal(states["py"], states["cy"]):
            print(f"n={n}: simulate outputs differ between backends")
            return 1
        print(f"{n:>5} {len(c):>9} {'simulate':>8} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.1f}")
        dp = _time(lambda: py.toffoli_depth(table, c.width), args.repeat)
        dc = _time(lambda: cy.toffoli_depth(table, c.width), args.repeat)
        if py.toffoli_depth(table, c.width) != cy.toffoli_depth(table, c.width):
            print(f"n={n}: depth differs between backends")
            return 1
        print(f"{n:>5} {len(c):>9} {'depth':>8} {dp:>10.4f} {dc:>10.4f} {dp / dc:>8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
