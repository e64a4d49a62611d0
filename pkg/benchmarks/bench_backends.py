"""Timing comparison of the numba kernels against the numpy fallback.

Each backend runs in its own subprocess because the choice is fixed at
import time through TREEBESOV_BACKEND.  The child times a forward and
inverse transform pair and an automatic pruning pass, reporting the best
wall time over the requested repeats; the parent prints both columns and
the speedup.  The first numba call includes compilation, so one warmup
round runs before timing starts.

Usage:
    python3 benchmarks/bench_backends.py --size 16384 --repeats 20
"""

import argparse
import json
import os
import subprocess
import sys
import time

_CHILD_FLAG = "--child-report"


def run_child(size, repeats):
    import numpy as np

    from treebesov.prune import Hyperprior, auto_prune_gaussian
    from treebesov.wavelet import forward_dwt, get_basis, inverse_dwt
    from treebesov.backend import BACKEND

    rng = np.random.default_rng(7)
    signal = rng.normal(0.0, 1.0, size)
    basis = get_basis("db2")
    hyper = Hyperprior(10.0)

    # warmup also triggers jit compilation on the numba side
    pyr = forward_dwt(signal, basis)
    inverse_dwt(pyr)
    auto_prune_gaussian(pyr, hyper)

    transform = []
    prune = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        pyr = forward_dwt(signal, basis)
        rec = inverse_dwt(pyr)
        transform.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        result = auto_prune_gaussian(pyr, hyper)
        prune.append(time.perf_counter() - t0)

    checksum = float(np.abs(rec).sum() + result.total_cost)
    print(json.dumps({"backend": BACKEND,
                      "transform_ms": min(transform) * 1e3,
                      "prune_ms": min(prune) * 1e3,
                      "checksum": checksum}))


def time_backend(name, size, repeats):
    env = dict(os.environ, TREEBESOV_BACKEND=name)
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), _CHILD_FLAG,
         "--size", str(size), "--repeats", str(repeats)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="compare kernel backends on transform and pruning times")
    parser.add_argument("--size", type=int, default=16384,
                        help="signal length, power of two (default 16384)")
    parser.add_argument("--repeats", type=int, default=20,
                        help="timed rounds per backend (default 20)")
    parser.add_argument(_CHILD_FLAG, action="store_true",
                        help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.child_report:
        run_child(args.size, args.repeats)
        return

    rows = [time_backend(name, args.size, args.repeats)
            for name in ("numpy", "numba")]
    if rows[0]["checksum"] != rows[1]["checksum"]:
        raise SystemExit("backends disagree, checksums %r vs %r"
                         % (rows[0]["checksum"], rows[1]["checksum"]))

    print(f"size {args.size}, best of {args.repeats}")
    print(f"{'stage':<12}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for stage in ("transform_ms", "prune_ms"):
        np_ms = rows[0][stage]
        nb_ms = rows[1][stage]
        label = stage.replace("_ms", "")
        print(f"{label:<12}{np_ms:>12.3f}{nb_ms:>12.3f}{np_ms / nb_ms:>9.2f}x")


if __name__ == "__main__":
    main()
