"""``orderlab`` command line.

Exit status: 0 success, 1 usage error, 2 computation error. Every error is
reported as one stderr line ``orderlab: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import __version__
from .arith import NAT64_MAX, Factorization, is_prime
from .errors import ComputationError, InvalidInputError, UsageError, format_relation
from .experiments import results
from .experiments.config import X_MAX, ScanConfig
from .experiments.runner import default_threads
from .experiments.scans import run_scan, skalba_search
from .experiments.thresholds import EPSILON_RULES
from .io import FORMATS, emit_report
from .order import carmichael_lambda, order_mod_n
from .structure import build_generator_set, check_independence, delta_exponents

log = logging.getLogger("orderlab")

_POWER = re.compile(r"^\s*(-?\d+)\s*\^\s*(\d+)\s*$")


def parse_int(text: str) -> int:
    """Decimal integer, ``1_000_000`` or ``b^e`` (e.g. ``10^6``)."""
    m = _POWER.match(text)
    try:
        if m:
            return int(m.group(1)) ** int(m.group(2))
        return int(text.replace("_", ""))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def parse_bound(text: str) -> int:
    x = parse_int(text)
    if not 100 <= x <= X_MAX:
        raise argparse.ArgumentTypeError(f"x must lie in [100, 2^63], got {text}")
    return x


def parse_positive(text: str) -> int:
    v = parse_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def parse_modulus(text: str) -> int:
    v = parse_int(text)
    if not 1 <= v <= NAT64_MAX:
        raise argparse.ArgumentTypeError(f"modulus must lie in [1, 2^64 - 1], got {text}")
    return v


def parse_int_list(text: str) -> tuple[int, ...]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(parse_int(t) for t in parts)


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def parse_factorization(text: str) -> Factorization:
    """``2^2*3*7`` -> Factorization(((2, 2), (3, 1), (7, 1)))."""
    entries = []
    for term in text.replace(" ", "").split("*"):
        base, _, exp = term.partition("^")
        try:
            entries.append((int(base), int(exp) if exp else 1))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad factorization term {term!r}") from None
    return Factorization(tuple(entries))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- subcommand handlers -------------------------------------------------------

def cmd_order(args, out):
    fact = args.fact.validate(args.mod) if args.fact is not None else None
    print(order_mod_n(args.a, args.mod, fact), file=out)


def cmd_lambda(args, out):
    fact = args.fact.validate(args.n) if args.fact is not None else None
    print(carmichael_lambda(args.n, fact), file=out)


def cmd_independence(args, out):
    verdict = check_independence(args.gens)
    if verdict.independent:
        print("independent", file=out)
    else:
        print(f"dependent: {format_relation(args.gens, verdict.relation)}", file=out)


def cmd_genset(args, out):
    gs = build_generator_set(args.gens, args.N)
    d, dp = delta_exponents(gs.k, gs.N)
    info = {"bases": list(gs.bases), "N": gs.N, "size": len(gs), "delta": str(d), "delta_prime": str(dp)}
    print(json.dumps(info), file=out)
    if args.list:
        for v in gs.values():
            print(v, file=out)


def cmd_skalba(args, out):
    if not is_prime(args.p):
        raise InvalidInputError(f"{args.p} is not prime")
    hit = skalba_search(args.a, args.p)
    print("none" if hit is None else f"{hit[0]} {hit[1]}", file=out)


_SCAN_OF = {
    "scan-thm1": "thm1",
    "scan-thm2": "thm2",
    "scan-corollary3": "corollary3",
    "scan-thm4": "thm4",
    "scan-conditions": "conditions",
    "scan-matthews": "matthews",
    "density-divisor": "density-divisor",
    "baseline": "baseline",
}


def _scan_config(args) -> ScanConfig:
    scan = _SCAN_OF[args.command]
    d: dict = {}
    if args.config:
        try:
            d = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise InvalidInputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(d, dict):
            raise InvalidInputError("config file must hold a JSON object")
        if d.setdefault("scan", scan) != scan:
            raise InvalidInputError(f"config is for scan {d['scan']!r}, not {scan!r}")
    d["scan"] = scan
    if args.x is not None:
        d["x"] = args.x
    if "x" not in d:
        raise InvalidInputError("--x is required")
    if getattr(args, "a", None) is not None:
        d["bases"] = (args.a, args.b) if getattr(args, "b", None) is not None else (args.a,)
    elif getattr(args, "b", None) is not None:
        raise InvalidInputError("--b needs --a")
    if getattr(args, "gens", None) is not None:
        d["bases"] = args.gens
    for flag, key in (("N", "N"), ("y_grid", "y_grid"), ("chunk", "chunk_size"), ("max_exceptions", "max_exceptions")):
        if getattr(args, flag, None) is not None:
            d[key] = getattr(args, flag)
    if args.epsilon_rule is not None:
        d["epsilon_rule"] = args.epsilon_rule
    if args.xi_mode is not None:
        d["xi_mode"] = args.xi_mode
    if args.verify:
        d["verify"] = True
    if getattr(args, "y", None) is not None or getattr(args, "z", None) is not None:
        if args.y is None or args.z is None:
            raise InvalidInputError("--y and --z go together")
        d["interval"] = (args.y, args.z)
    if args.buckets is not None:
        d["buckets"] = results.dyadic_edges(d["x"]) if args.buckets == "dyadic" else list(parse_int_list(args.buckets))
    try:
        return ScanConfig.from_dict(d)
    except TypeError as exc:
        raise InvalidInputError(f"bad config: {exc}") from None


def cmd_scan(args, out):
    cfg = _scan_config(args)
    threads = args.threads if args.threads is not None else default_threads()
    progress = None
    if args.progress:
        def progress(done, total):
            print(f"chunk {done}/{total}", file=sys.stderr, flush=True)
    report = run_scan(cfg, threads=threads, checkpoint=args.checkpoint, stop_after=args.stop_after_chunks, progress=progress)
    if report is None:
        print(f"stopped early; state saved to {args.checkpoint}", file=sys.stderr)
        return 0
    if args.out:
        emit_report(report, args.out, args.format)
    print(json.dumps(report.summary, sort_keys=True), file=out)
    violations = report.summary.get("verify_violations", 0)
    if violations:
        raise ComputationError(f"verification found {violations} violations")
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orderlab", description="Multiplicative orders and exception-density scans.")
    p.add_argument("--version", action="version", version=f"orderlab {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("order", help="eventual period of a modulo n")
    s.add_argument("--a", type=parse_int, required=True)
    s.add_argument("--mod", type=parse_modulus, required=True)
    s.add_argument("--fact", type=parse_factorization, help="factorization of the modulus, e.g. 2^2*3")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("lambda", help="Carmichael lambda(n)")
    s.add_argument("--n", type=parse_modulus, required=True)
    s.add_argument("--fact", type=parse_factorization)
    s.set_defaults(func=cmd_lambda)

    s = sub.add_parser("independence", help="test multiplicative independence")
    s.add_argument("--gens", type=parse_int_list, required=True)
    s.set_defaults(func=cmd_independence)

    s = sub.add_parser("genset", help="describe the box set of products a_i^e_i, 0 <= e_i < N")
    s.add_argument("--gens", type=parse_int_list, required=True)
    s.add_argument("--N", type=parse_positive, required=True)
    s.add_argument("--list", action="store_true", help="print every element")
    s.set_defaults(func=cmd_genset)

    s = sub.add_parser("skalba", help="find m, n with a^m + a^n + 1 = 0 mod p")
    s.add_argument("--a", type=parse_int, required=True)
    s.add_argument("--p", type=parse_modulus, required=True)
    s.set_defaults(func=cmd_skalba)

    def scan_parser(name, help_, *, ab=False, a_only=False, gens=False, N=False, y_grid=False, yz=False):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--x", type=parse_bound, help="scan bound, at most 2^63")
        if ab or a_only:
            s.add_argument("--a", type=parse_int)
        if ab:
            s.add_argument("--b", type=parse_int)
        if gens:
            s.add_argument("--gens", type=parse_int_list)
        if N:
            s.add_argument("--N", type=parse_positive)
        if y_grid:
            s.add_argument("--y-grid", dest="y_grid", type=parse_float_list)
        if yz:
            s.add_argument("--y", type=float)
            s.add_argument("--z", type=float)
        s.add_argument("--threads", type=parse_positive, help="worker processes (default: $ORDERLAB_THREADS or 1)")
        s.add_argument("--chunk", type=parse_positive, help="integers per chunk")
        s.add_argument("--out", metavar="DIR")
        s.add_argument("--format", choices=FORMATS, default="both")
        s.add_argument("--checkpoint", metavar="FILE")
        s.add_argument("--verify", action="store_true", help="assert the exact proof invariants")
        s.add_argument("--epsilon-rule", dest="epsilon_rule", choices=EPSILON_RULES)
        s.add_argument("--xi-mode", dest="xi_mode", choices=("scan", "per-prime"))
        s.add_argument("--buckets", help="'dyadic' or comma-separated edges ending at x")
        s.add_argument("--max-exceptions", dest="max_exceptions", type=parse_int)
        s.add_argument("--config", metavar="FILE", help="JSON scan config; flags override it")
        s.add_argument("--progress", action="store_true")
        s.add_argument("--stop-after-chunks", dest="stop_after_chunks", type=parse_positive, help=argparse.SUPPRESS)
        s.set_defaults(func=cmd_scan)

    scan_parser("scan-thm1", "primes where none of a, b, ab, a^2b, ab^2 has large order", ab=True)
    scan_parser("scan-thm2", "primes where no element of the box set has large order", gens=True, N=True)
    scan_parser("scan-corollary3", "primes without a^m + a^n + 1 = 0 witness")
    scan_parser("scan-thm4", "composite moduli where none of the five has large period", ab=True)
    scan_parser("scan-conditions", "how often the smooth-part conditions fail", ab=True)
    scan_parser("scan-matthews", "count primes with small subgroup order", gens=True, y_grid=True)
    scan_parser("density-divisor", "share of primes p whose p - 1 has a divisor in (y, z]", yz=True)
    scan_parser("baseline", "primes with order of a at most sqrt(p)", a_only=True)
    return p


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
        rc = args.func(args, out)
        return rc or 0
    except UsageError as exc:
        print(f"orderlab: usage-error: {exc}", file=sys.stderr)
        return 1
    except ComputationError as exc:
        print(f"orderlab: computation-error: {exc}", file=sys.stderr)
        return 2
    except (OverflowError, OSError) as exc:
        print(f"orderlab: computation-error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"orderlab: usage-error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
