"""Time the dense ring transform with the numba kernel and the numpy fallback.

    python benchmarks/bench_dft.py [--columns 21] [--repeat 3] [--large] [--json out.json]

Both backends run on the same input; the script also reports their largest
disagreement, which should sit at rounding level.
"""
from __future__ import annotations

import argparse
import json
import platform
import statistics
import time

import numpy as np

from linkorders import _accel
from linkorders.fourier import dft_many
from linkorders.rings import HeisenbergRing, LevelZeroRing, RamifiedRing

CASES = [
    ("ramified q=9", lambda: RamifiedRing(3, 2)),
    ("heisenberg q=2", lambda: HeisenbergRing(2, 1)),
    ("heisenberg q=3", lambda: HeisenbergRing(3, 1)),
    ("level0 q=3", lambda: LevelZeroRing(3, 1)),
    ("heisenberg q=4", lambda: HeisenbergRing(2, 2)),
]
LARGE = [("heisenberg q=5", lambda: HeisenbergRing(5, 1))]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--columns", type=int, default=21, help="functions transformed together (f plus 20 translates)")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--large", action="store_true", help="include q=5 (order 15625, tens of seconds)")
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _accel.numba_available() else [])
    rng = np.random.default_rng(0)
    rows = []
    print(f"{'ring':18} {'order':>6} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + f" {'speedup':>8} {'max diff':>10}")
    for name, make in CASES + (LARGE if args.large else []):
        ring = make()
        F = rng.standard_normal((ring.order, args.columns)) + 1j * rng.standard_normal((ring.order, args.columns))
        if "numba" in backends:
            dft_many(ring, F[:, :1], "numba")  # compile outside the timing
        timing, outputs = {}, {}
        for b in backends:
            timing[b], outputs[b] = best_of(lambda: dft_many(ring, F, b), args.repeat)
        diff = float(np.abs(outputs["numpy"] - outputs[backends[-1]]).max())
        speedup = timing["numpy"] / timing[backends[-1]]
        rows.append({"ring": name, "order": ring.order, "seconds": timing, "speedup": speedup, "max_diff": diff})
        print(f"{name:18} {ring.order:>6} " + " ".join(f"{timing[b]:>12.4f}" for b in backends) + f" {speedup:>8.2f} {diff:>10.2e}")
    if args.json:
        meta = {"python": platform.python_version(), "numpy": np.__version__, "columns": args.columns,
                "numba": getattr(_accel.numba, "__version__", None)}
        with open(args.json, "w") as fh:
            json.dump({"meta": meta, "results": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
