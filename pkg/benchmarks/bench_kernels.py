"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each case runs the same call on both backends, checks the results agree,
and reports the best wall time of ``--repeat`` runs.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from orderlab import _pykernels
from orderlab.arith import sieve_primes

try:
    from orderlab import _kernels
except ImportError:
    _kernels = None


def _cases():
    primes = np.array(sieve_primes(10**6, 10**6 + 20000), dtype=np.uint64)
    bases = np.array([2, 3, 6, 12, 18], dtype=np.int64)
    semiprimes = [(2**31 - 1) * (2**31 + 11), (2**32 - 5) * (2**32 - 17), 10**18 + 9, 3215031751 * 1000003]
    p = 1_000_003
    residues = np.arange(2, 5002, dtype=np.uint64)
    qs = [2, 3, 166667]
    return {
        "batch_orders (1.5k primes x 5 bases)": lambda k: k.batch_orders(primes, bases),
        "factor_pairs (64-bit semiprimes)": lambda k: [k.factor_pairs(n) for n in semiprimes],
        "orders_mod_prime_many (5k residues)": lambda k: k.orders_mod_prime_many(residues, p, qs),
        "skalba (p ~ 10^6)": lambda k: k.skalba(2, p, 500001),
        "is_prime (10k odd n near 2^62)": lambda k: [k.is_prime((1 << 62) + 2 * i + 1) for i in range(10000)],
    }


def _same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, np.asarray(b))
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    print(f"{'case':42s} {'cython s':>10s} {'python s':>10s} {'speedup':>9s}")
    for name, fn in _cases().items():
        if not _same(fn(_kernels), fn(_pykernels)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        rows.append({"case": name, "cython_s": tc, "python_s": tp, "speedup": tp / tc})
        print(f"{name:42s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
