"""Exception-density scans.

Each scan has a chunk evaluator ``_chunk_<name>(config, lo, hi)`` that
looks at the integers in [lo, hi] and returns a ``ChunkResult``, and a
``_finish_<name>`` that turns the merged state into an ``ExceptionReport``.
The public ``scan_*`` helpers wrap both through ``run_scan``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np

from .. import __version__
from .. import _pykernels
from .._backend import kernels
from ..arith import Factorization, is_prime, iter_prime_segments
from ..errors import BaseDivisibleError, InvalidInputError
from ..order import carmichael_lambda, order_mod_prime
from ..structure import GeneratorSet, build_generator_set, delta_exponents, divisor_in_interval, require_independent
from . import thresholds as th
from .config import ScanConfig
from .results import Accumulator, ChunkResult, DensityCurve, ExceptionReport, bincount, dyadic_edges, sig12
from .runner import run_chunks

FIVE_COLUMNS = ("modulus", "ord_a", "ord_b", "ord_ab", "ord_a2b", "ord_ab2", "threshold", "max_ord")
COROLLARY3_BASES = (2, 3, 5, 7, 11)
COROLLARY3_N = 10
SKALBA_TABLE_LIMIT = 1 << 26
ETA = 1 - (1 + math.log(math.log(2))) / math.log(2)

# Per-process caches; pure memoization, keyed by everything they depend on.
_GENSETS: dict[tuple, GeneratorSet] = {}
_FACT_CACHE: dict[int, list] = {}


def _genset(bases, N) -> GeneratorSet:
    key = (tuple(bases), N)
    gs = _GENSETS.get(key)
    if gs is None:
        gs = _GENSETS[key] = build_generator_set(bases, N)
    return gs


def _prime_factors_of(n: int) -> list[int]:
    f = _FACT_CACHE.get(n)
    if f is None:
        f = [q for q, _ in kernels.factor_pairs(n)]
        if len(_FACT_CACHE) < 1 << 16:
            _FACT_CACHE[n] = f
    return f


def _primes_in(lo: int, hi: int) -> np.ndarray:
    segs = list(iter_prime_segments(lo, hi, hi - lo + 1))
    return segs[0] if segs else np.zeros(0, dtype=np.uint64)


def _edges(cfg: ScanConfig) -> list[int]:
    return list(cfg.buckets) if cfg.buckets else dyadic_edges(cfg.x)


def five_bases(a: int, b: int) -> list[int]:
    """a, b, ab, a^2 b, a b^2."""
    return [a, b, a * b, a * a * b, a * b * b]


def _as_int64(bases) -> np.ndarray:
    if any(abs(b) >= 1 << 63 for b in bases):
        raise InvalidInputError("derived bases must fit in a signed 64-bit word")
    return np.array(bases, dtype=np.int64)


def _xi(cfg: ScanConfig, p: int) -> float:
    if cfg.xi_mode == "per-prime" and p > 2:
        return th.xi(p)
    return th.xi(cfg.x)


def proof_conditions(fact, la: int, lb: int, x: float, xi: float) -> tuple[bool, bool, bool]:
    """The three conditions kept in the five-element argument, for one prime.

    ``fact`` factors p - 1. Returns (smooth part small, rough part
    squarefree, orders large) with thresholds taken at the scan bound x.
    """
    lx = math.log(x)
    smooth = 1
    for q, e in fact:
        if q <= xi:
            smooth *= q**e
    ok_i = math.log(smooth) <= math.sqrt(lx)
    ok_ii = all(e == 1 for q, e in fact if q > xi)
    lab = math.lcm(la, lb)
    half = math.exp(0.5 * lx - math.log(lx))
    two_thirds = math.exp(2.0 / 3.0 * lx - math.log(lx))
    ok_iii = la > half and lb > half and lab > two_thirds
    return ok_i, ok_ii, ok_iii


def four_of_five_violations(orders, fact, xi: float) -> tuple[int, list[int]]:
    """Check that each prime q > max(xi, 3) dividing l_a * l_b divides >= 4 orders.

    Returns (pairs checked, offending primes q).
    """
    la, lb = orders[0], orders[1]
    checked, bad = 0, []
    for q, _ in fact:
        if q <= max(xi, 3) or (la % q and lb % q):
            continue
        checked += 1
        if sum(1 for o in orders if o % q == 0) < 4:
            bad.append(q)
    return checked, bad


def box_count_violations(element_orders, gen_orders, fact, xi: float, N: int, k: int) -> tuple[int, list[int]]:
    """Check #{a in A : q does not divide l_a(p)} <= N^(k-1) - 1.

    Applies to each prime q > max(xi, N) of p - 1 that divides some
    generator order, when the xi-rough part of p - 1 is squarefree.
    """
    if not all(e == 1 for q, e in fact if q > xi):
        return 0, []
    bound = N ** (k - 1) - 1
    checked, bad = 0, []
    for q, _ in fact:
        if q <= max(xi, N) or all(int(o) % q for o in gen_orders):
            continue
        checked += 1
        if int(np.count_nonzero(element_orders % np.uint64(q))) > bound:
            bad.append(q)
    return checked, bad


def distinct_first(residues: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct residues (ascending) and the index of each one's first appearance."""
    if p > 1 << 24:
        return np.unique(residues, return_index=True)
    none = np.iinfo(np.int64).max
    first = np.full(p, none, dtype=np.int64)
    np.minimum.at(first, residues.astype(np.intp), np.arange(len(residues), dtype=np.int64))
    uniq = np.flatnonzero(first != none)
    return uniq.astype(np.uint64), first[uniq]


def _exceeds(order: int, p: int, delta: Fraction) -> bool:
    """order > p^delta, exactly."""
    return order**delta.denominator > p**delta.numerator


# -- five elements a, b, ab, a^2 b, a b^2 ----------------------------------

THM1_RULE = th.Thm1Rule()
EXPONENT_ONLY = th.ExponentRule(Fraction(8, 15), "zero")


def _chunk_thm1(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    a, b = cfg.bases
    edges = _edges(cfg)
    out = ChunkResult()
    primes = _primes_in(lo, hi)
    orders = kernels.batch_orders(primes, _as_int64(five_bases(a, b)))
    keep = (orders > 0).all(axis=1)
    P, O = primes[keep], orders[keep]
    out.add_counts("population", bincount(edges, P))
    mx = O.max(axis=1) if len(O) else np.zeros(0, dtype=np.uint64)
    exc = th.at_or_below(mx, P, THM1_RULE)
    out.add_counts("exceptions", bincount(edges, P, exc))
    prime_rule = th.ExponentRule(Fraction(8, 15), cfg.epsilon_rule)
    out.add_counts("exceptions_thm1_prime", bincount(edges, P, th.at_or_below(mx, P, prime_rule)))
    out.add_counts("exceptions_exponent_only", bincount(edges, P, th.at_or_below(mx, P, EXPONENT_ONLY)))

    lx = math.log(cfg.x)
    geo = np.log(O.astype(np.float64)).mean(axis=1) if len(O) else np.zeros(0)
    out.tally("geomean_at_least_bound", int(np.count_nonzero(geo >= 8 / 15 * lx - 1.6 * math.sqrt(lx))))

    thr = np.exp(THM1_RULE.log_float(P.astype(np.float64)))
    for i in np.flatnonzero(exc):
        out.rows.append((int(P[i]), *(int(v) for v in O[i]), sig12(thr[i]), int(mx[i])))

    if cfg.verify:
        for p, o in zip(P.tolist(), O.tolist()):
            fact = kernels.factor_pairs(p - 1)
            xi = _xi(cfg, p)
            if not all(proof_conditions(fact, o[0], o[1], cfg.x, xi)):
                continue
            out.tally("verify_primes")
            checked, bad = four_of_five_violations(o, fact, xi)
            out.tally("verify_pairs", checked)
            if bad:
                out.tally("verify_violations", len(bad))
                out.notes.append(f"four-of-five fails at p={p} q={bad} orders={o}")
    return out


def _finish_thm1(cfg, acc, report_kw):
    t = acc.state.tallies
    pop = sum(acc.state.counts.get("population", []))
    report_kw["summary"].update(
        {
            "primes_scanned": pop,
            "exceptions_thm1_prime": sum(acc.state.counts["exceptions_thm1_prime"]),
            "exceptions_exponent_only": sum(acc.state.counts["exceptions_exponent_only"]),
            "geomean_bound": sig12(math.exp(8 / 15 * math.log(cfg.x) - 1.6 * math.sqrt(math.log(cfg.x)))),
            "geomean_at_least_bound": t.get("geomean_at_least_bound", 0),
        }
    )
    report_kw["rules"].update({"threshold": THM1_RULE.name, "thm1_prime": f"p^(8/15+eps:{cfg.epsilon_rule})"})
    report_kw["columns"] = FIVE_COLUMNS


# -- box generator sets ----------------------------------------------------

def _chunk_thm2(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    gs = _genset(cfg.bases, cfg.N)
    delta, _ = delta_exponents(gs.k, gs.N)
    edges = _edges(cfg)
    out = ChunkResult()
    primes = _primes_in(lo, hi)
    gen_orders_all = kernels.batch_orders(primes, _as_int64(gs.bases))
    keep = (gen_orders_all > 0).all(axis=1)
    P, G = primes[keep], gen_orders_all[keep]
    out.add_counts("population", bincount(edges, P))
    exc_mask = np.zeros(len(P), dtype=bool)
    for i, p in enumerate(P.tolist()):
        gen_orders = [int(v) for v in G[i]]
        qs = _prime_factors_of(p - 1)
        if not cfg.verify and any(_exceeds(o, p, delta) for o in gen_orders):
            continue
        res = gs.residues(p)
        uniq, first = distinct_first(res, p)
        if cfg.verify:
            uorders = kernels.orders_mod_prime_many(uniq, p, qs)
            best = int(uorders.max())
            fact = kernels.factor_pairs(p - 1)
            element_orders = uorders[np.searchsorted(uniq, res)]
            xi = _xi(cfg, p)
            if all(e == 1 for q, e in fact if q > xi):
                out.tally("verify_primes")
            checked, bad = box_count_violations(element_orders, gen_orders, fact, xi, gs.N, gs.k)
            out.tally("verify_pairs", checked)
            if bad:
                out.tally("verify_violations", len(bad))
                out.notes.append(f"box count fails at p={p} q={bad}")
        else:
            # distinct residues in first-appearance order, generators already tried
            seq = uniq[np.argsort(first, kind="stable")]
            best = max(gen_orders)
            for s in range(0, len(seq), 4096):
                block = kernels.orders_mod_prime_many(seq[s : s + 4096], p, qs)
                best = max(best, int(block.max()))
                if _exceeds(best, p, delta):
                    break
        if not _exceeds(best, p, delta):
            exc_mask[i] = True
            out.rows.append((p, sig12(p ** float(delta)), best))
    out.add_counts("exceptions", bincount(edges, P, exc_mask))
    return out


def _finish_thm2(cfg, acc, report_kw):
    delta, delta_prime = delta_exponents(len(cfg.bases), cfg.N)
    report_kw["columns"] = ("modulus", "threshold", "max_ord")
    report_kw["rules"].update({"threshold": f"p^delta, delta={delta}", "delta": str(delta), "delta_prime": str(delta_prime)})
    report_kw["summary"].update(
        {"delta": sig12(float(delta)), "delta_prime": sig12(float(delta_prime)), "set_size": cfg.N ** len(cfg.bases) - 1}
    )


# -- smooth-part, squarefree and order-size conditions ---------------------

CONDITION_SERIES = ("fail_i", "fail_ii", "fail_iii")


def _chunk_conditions(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    a, b = cfg.bases
    edges = _edges(cfg)
    out = ChunkResult()
    primes = _primes_in(lo, hi)
    orders = kernels.batch_orders(primes, _as_int64([a, b]))
    keep = (orders > 0).all(axis=1)
    P, O = primes[keep], orders[keep]
    out.add_counts("population", bincount(edges, P))
    fails = np.zeros((len(P), 3), dtype=bool)
    for i, (p, o) in enumerate(zip(P.tolist(), O.tolist())):
        ok = proof_conditions(kernels.factor_pairs(p - 1), o[0], o[1], cfg.x, _xi(cfg, p))
        fails[i] = [not v for v in ok]
    for j, name in enumerate(CONDITION_SERIES):
        out.add_counts(name, bincount(edges, P, fails[:, j]))
    out.add_counts("exceptions", bincount(edges, P, fails.any(axis=1)))
    return out


def _finish_conditions(cfg, acc, report_kw):
    report_kw["columns"] = ()
    report_kw["rules"].update(
        {
            "condition_i": "xi-smooth part of p-1 <= exp(sqrt(log x))",
            "condition_ii": "xi-rough part of p-1 squarefree",
            "condition_iii": "l_a, l_b > x^(1/2)/log x and l_ab > x^(2/3)/log x",
        }
    )
    report_kw["summary"].update({name: sum(acc.state.counts[name]) for name in CONDITION_SERIES})


# -- Matthews counts ---------------------------------------------------------

class _SubgroupRule(th.Rule):
    def __init__(self, k):
        self.k = k
        self.name = f"p^({k}/{k + 1})/log p"

    def log_float(self, t):
        return self.k / (self.k + 1) * np.log(t) - np.log(np.log(t))

    def log_mp(self, t):
        import mpmath

        return mpmath.mpf(self.k) / (self.k + 1) * mpmath.log(t) - mpmath.log(mpmath.log(t))


def _chunk_matthews(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    edges = _edges(cfg)
    out = ChunkResult()
    primes = _primes_in(lo, hi)
    orders = kernels.batch_orders(primes, _as_int64(cfg.bases))
    keep = (orders > 0).all(axis=1)
    P = primes[keep]
    L = np.lcm.reduce(orders[keep].astype(np.int64), axis=1) if keep.any() else np.zeros(0, dtype=np.int64)
    out.add_counts("population", bincount(edges, P))
    grid = np.asarray(cfg.y_grid, dtype=np.float64)
    out.counts["by_y"] = (L[:, None] <= grid[None, :]).sum(axis=0).astype(np.int64).tolist()
    small = th.at_or_below(L, P, _SubgroupRule(len(cfg.bases))) if len(P) else np.zeros(0, dtype=bool)
    out.add_counts("exceptions", bincount(edges, P, small))
    return out


def fit_loglog_slope(ys, counts) -> float | None:
    pts = [(math.log(y), math.log(c)) for y, c in zip(ys, counts) if c > 0 and y > 1]
    if len(pts) < 2:
        return None
    xs, vs = zip(*pts)
    return float(np.polyfit(xs, vs, 1)[0])


def _finish_matthews(cfg, acc, report_kw):
    by_y = acc.state.counts.get("by_y", [0] * len(cfg.y_grid))
    report_kw["aux_columns"] = ("y", "count")
    report_kw["aux_rows"] = tuple((sig12(y), int(c)) for y, c in zip(cfg.y_grid, by_y))
    slope = fit_loglog_slope(cfg.y_grid, by_y)
    k = len(cfg.bases)
    report_kw["columns"] = ()
    report_kw["rules"].update({"threshold": _SubgroupRule(k).name, "predicted_slope": f"1+1/{k}"})
    report_kw["summary"].update(
        {
            "slope": None if slope is None else sig12(slope),
            "predicted_slope": sig12(1 + 1 / k),
            "max_ratio": sig12(max((c / y ** (1 + 1 / k) for y, c in zip(cfg.y_grid, by_y)), default=0.0)),
        }
    )


# -- a^m + a^n + 1 witnesses -----------------------------------------------

def skalba_search(a: int, p: int, ell: int | None = None):
    """First (m, n) with p | a^m + a^n + 1, 1 <= m, n <= l_a(p), else None.

    Walks n = 1, 2, ... and looks up m in a table of a^1..a^l, so the pair
    returned is deterministic.
    """
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    r = a % p
    if r == 0:
        raise BaseDivisibleError(a, p)
    if ell is None:
        ell = order_mod_prime(r, p)
    if p < SKALBA_TABLE_LIMIT:
        return kernels.skalba(r, p, ell)
    return _pykernels.skalba(r, p, ell)


def _chunk_corollary3(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    gs = _genset(COROLLARY3_BASES, COROLLARY3_N)
    edges = _edges(cfg)
    out = ChunkResult()
    primes = _primes_in(lo, hi)
    P = primes[np.array([2310 % int(p) != 0 for p in primes], dtype=bool)] if len(primes) else primes
    out.add_counts("population", bincount(edges, P))
    exc_mask = np.zeros(len(P), dtype=bool)
    for i, p in enumerate(P.tolist()):
        qs = _prime_factors_of(p - 1)
        uniq, first = distinct_first(gs.residues(p), p)
        orders = kernels.orders_mod_prime_many(uniq, p, qs)
        for j in np.lexsort((first, -orders.astype(np.int64))):
            hit = skalba_search(int(uniq[j]), p, int(orders[j]))
            if hit is not None:
                out.aux_rows.append((p, gs.value(int(first[j])), hit[0], hit[1], int(orders[j])))
                break
        else:
            exc_mask[i] = True
            out.rows.append((p, int(orders.max())))
    out.add_counts("exceptions", bincount(edges, P, exc_mask))
    return out


def _finish_corollary3(cfg, acc, report_kw):
    report_kw["columns"] = ("modulus", "max_ord")
    report_kw["aux_columns"] = ("modulus", "a", "m", "n", "ord_a")
    report_kw["rules"].update({"A": "(2*3*5*7*11)^9", "search": "divisors of A by decreasing order, first hit"})
    report_kw["summary"]["witnesses"] = len(acc.state.aux_rows)


# -- composite moduli ------------------------------------------------------

def order_mod_n_from_fact(a: int, fact) -> int:
    d = 1
    for q, e in fact:
        if a % q == 0:
            continue
        qe = q**e
        d = math.lcm(d, int(kernels.order_mod_prime_power(a % qe, q, e, _prime_factors_of(q - 1))))
    return d


def kurlberg_rudnick_holds(a: int, n: int, fact, order_n: int | None = None, lam: int | None = None) -> bool:
    """l_a(n) >= (lambda(n)/n) * prod_{p | n, p not dividing a} l_a(p), exactly."""
    if order_n is None:
        order_n = order_mod_n_from_fact(a, fact)
    if lam is None:
        lam = carmichael_lambda(n, Factorization(tuple(fact)))
    local = prod(int(kernels.order_mod_prime(a % q, q, _prime_factors_of(q - 1))) for q, _ in fact if a % q)
    return order_n * n >= lam * local


THM4_EXPONENT_ONLY = EXPONENT_ONLY


def _chunk_thm4(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    a, b = cfg.bases
    bases = five_bases(a, b)
    edges = _edges(cfg)
    out = ChunkResult()
    ns = np.arange(lo, hi + 1, dtype=np.uint64)
    O = np.zeros((len(ns), 5), dtype=np.uint64)
    omega_cap = 2 * th.xi(cfg.x)
    for i, n in enumerate(ns.tolist()):
        fact = kernels.factor_pairs(n)
        lam = carmichael_lambda(n, Factorization(tuple(fact)))
        for j, base in enumerate(bases):
            o = order_mod_n_from_fact(base, fact)
            O[i, j] = o
            out.tally("prop5_checks")
            if not kurlberg_rudnick_holds(base, n, fact, o, lam):
                out.tally("prop5_failures")
                out.notes.append(f"Kurlberg-Rudnick bound fails at n={n} a={base}")
        if n >= 3:
            llog = math.log(math.log(n))
            if not math.log(lam) > math.log(n) - llog**3:
                out.tally("lambda_bound_failures")
        if len(fact) > omega_cap:
            out.tally("omega_failures")
    out.add_counts("population", bincount(edges, ns))
    mx = O.max(axis=1) if len(O) else np.zeros(0, dtype=np.uint64)
    rule = th.ExponentRule(Fraction(8, 15), cfg.epsilon_rule, floor=True)
    exc = th.at_or_below(mx, ns, rule)
    out.add_counts("exceptions", bincount(edges, ns, exc))
    out.add_counts("exceptions_exponent_only", bincount(edges, ns, th.at_or_below(mx, ns, THM4_EXPONENT_ONLY)))
    thr = np.exp(rule.log_float(ns.astype(np.float64)))
    for i in np.flatnonzero(exc):
        out.rows.append((int(ns[i]), *(int(v) for v in O[i]), sig12(thr[i]), int(mx[i])))
    return out


def _finish_thm4(cfg, acc, report_kw):
    t = acc.state.tallies
    report_kw["columns"] = FIVE_COLUMNS
    report_kw["rules"].update(
        {"threshold": th.ExponentRule(Fraction(8, 15), cfg.epsilon_rule, floor=True).name, "epsilon_floor": "1/log log log(100 t)"}
    )
    report_kw["summary"].update(
        {
            "integers_scanned": sum(acc.state.counts["population"]),
            "exceptions_exponent_only": sum(acc.state.counts["exceptions_exponent_only"]),
            "prop5_checks": t.get("prop5_checks", 0),
            "prop5_failures": t.get("prop5_failures", 0),
            "lambda_bound_failures": t.get("lambda_bound_failures", 0),
            "omega_failures": t.get("omega_failures", 0),
        }
    )


# -- order at most sqrt(p) ------------------------------------------------

def _chunk_baseline(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    (a,) = cfg.bases
    edges = _edges(cfg)
    out = ChunkResult()
    primes = _primes_in(lo, hi)
    orders = kernels.batch_orders(primes, _as_int64([a]))[:, 0]
    keep = orders > 0
    P, O = primes[keep], orders[keep]
    out.add_counts("population", bincount(edges, P))
    # l > sqrt(p) iff l > isqrt(p) since p is never a square
    fail = np.array([int(o) <= math.isqrt(int(p)) for p, o in zip(P, O)], dtype=bool)
    out.add_counts("exceptions", bincount(edges, P, fail))
    for i in np.flatnonzero(fail):
        out.rows.append((int(P[i]), int(O[i])))
    return out


def _finish_baseline(cfg, acc, report_kw):
    report_kw["columns"] = ("modulus", "ord_a")
    report_kw["rules"]["threshold"] = "p^(1/2)"


# -- divisors of p - 1 in (y, z] ----------------------------------------------

def ford_curve(u: float) -> float | None:
    """u^eta * (log(2/u))^(-3/2), the comparison shape; None outside 0 < u < 2."""
    if not 0 < u < 2:
        return None
    return u**ETA * math.log(2 / u) ** -1.5


def _chunk_density_divisor(cfg: ScanConfig, lo: int, hi: int) -> ChunkResult:
    y, z = cfg.interval
    edges = _edges(cfg)
    out = ChunkResult()
    P = _primes_in(lo, hi)
    hits = np.array([divisor_in_interval(Factorization(tuple(kernels.factor_pairs(p - 1))), y, z) for p in P.tolist()], dtype=bool)
    out.add_counts("population", bincount(edges, P))
    out.add_counts("exceptions", bincount(edges, P, hits))
    return out


def _finish_density_divisor(cfg, acc, report_kw):
    y, z = cfg.interval
    pop = sum(acc.state.counts["population"])
    hits = sum(acc.state.counts["exceptions"])
    u = math.log(z) / math.log(y) - 1
    ford = ford_curve(u)
    report_kw["columns"] = ()
    report_kw["rules"].update({"event": f"p-1 has a divisor in ({y}, {z}]", "eta": "1-(1+log log 2)/log 2"})
    report_kw["summary"].update(
        {
            "proportion": sig12(hits / pop) if pop else 0.0,
            "u": sig12(u),
            "eta": sig12(ETA),
            "ford_curve": None if ford is None else sig12(ford),
        }
    )


_CHUNKS = {
    "thm1": _chunk_thm1,
    "thm2": _chunk_thm2,
    "conditions": _chunk_conditions,
    "matthews": _chunk_matthews,
    "corollary3": _chunk_corollary3,
    "thm4": _chunk_thm4,
    "baseline": _chunk_baseline,
    "density-divisor": _chunk_density_divisor,
}
_FINISH = {
    "thm1": _finish_thm1,
    "thm2": _finish_thm2,
    "conditions": _finish_conditions,
    "matthews": _finish_matthews,
    "corollary3": _finish_corollary3,
    "thm4": _finish_thm4,
    "baseline": _finish_baseline,
    "density-divisor": _finish_density_divisor,
}


def evaluate_chunk(cfg: ScanConfig, index: int) -> ChunkResult:
    lo, hi = cfg.chunk_range(index)
    return _CHUNKS[cfg.scan](cfg, lo, hi)


def _check_config(cfg: ScanConfig) -> None:
    n = len(cfg.bases)
    if cfg.scan in ("thm1", "thm4", "conditions"):
        if n != 2:
            raise InvalidInputError(f"{cfg.scan} needs exactly two bases a, b")
        _as_int64(five_bases(*cfg.bases))
    if cfg.scan in ("thm1", "thm4", "conditions", "thm2", "matthews"):
        if n < 1:
            raise InvalidInputError(f"{cfg.scan} needs bases")
        require_independent(cfg.bases)
    if cfg.scan == "thm2" and (cfg.N is None or cfg.N < 2):
        raise InvalidInputError("thm2 needs N >= 2")
    if cfg.scan == "matthews" and not cfg.y_grid:
        raise InvalidInputError("matthews needs a y grid")
    if cfg.scan == "baseline":
        if n != 1 or cfg.bases[0] in (0, 1, -1):
            raise InvalidInputError("baseline needs one base a not in {0, 1, -1}")
    if cfg.scan == "density-divisor":
        if cfg.interval is None:
            raise InvalidInputError("density-divisor needs an interval (y, z]")
        y, z = cfg.interval
        if not 10 <= y < z <= cfg.x:
            raise InvalidInputError("density-divisor needs 10 <= y < z <= x")


def finish(cfg: ScanConfig, acc: Accumulator) -> ExceptionReport:
    counts = acc.state.counts
    edges = _edges(cfg)
    nb = len(edges) - 1
    pop = counts.get("population", [0] * nb)
    exc = counts.get("exceptions", [0] * nb)
    report_kw = {
        "rules": {"logarithms": "natural", "xi": f"log log x ({cfg.xi_mode})", "xi_value": sig12(th.xi(cfg.x)), "epsilon": cfg.epsilon_rule},
        "summary": {
            "population": sum(pop),
            "exceptions": sum(exc),
            "exception_fraction": sig12(sum(exc) / sum(pop)) if sum(pop) else 0.0,
        },
        "aux_columns": (),
        "aux_rows": tuple(tuple(r) for r in acc.state.aux_rows),
    }
    if cfg.verify:
        t = acc.state.tallies
        report_kw["summary"].update(
            {
                "verify_primes": t.get("verify_primes", 0),
                "verify_pairs": t.get("verify_pairs", 0),
                "verify_violations": t.get("verify_violations", 0),
            }
        )
    _FINISH[cfg.scan](cfg, acc, report_kw)
    if acc.state.notes:
        report_kw["summary"]["notes"] = list(acc.state.notes)
    if acc.aux_overflow:
        report_kw["summary"]["aux_overflow"] = acc.aux_overflow
    series = {k: v for k, v in counts.items() if k not in ("population", "exceptions", "by_y")}
    return ExceptionReport(
        scan=cfg.scan,
        version=__version__,
        config=cfg.to_dict(),
        config_hash=cfg.digest(),
        rules=report_kw["rules"],
        columns=tuple(report_kw["columns"]),
        exceptions=tuple(sorted((tuple(r) for r in acc.state.rows), key=lambda r: r[0])),
        exceptions_overflow=acc.overflow,
        density=DensityCurve.from_counts(edges, pop, exc),
        series=dict(sorted(series.items())),
        aux_columns=tuple(report_kw["aux_columns"]),
        aux_rows=tuple(sorted(report_kw["aux_rows"], key=lambda r: r[0])),
        summary=report_kw["summary"],
    )


def run_scan(cfg: ScanConfig, threads: int = 1, checkpoint=None, stop_after=None, progress=None) -> ExceptionReport | None:
    """Validate, scan in chunks, and build the report (None if stopped early)."""
    _check_config(cfg)
    acc = run_chunks(cfg, threads=threads, checkpoint=checkpoint, stop_after=stop_after, progress=progress)
    if acc is None:
        return None
    return finish(cfg, acc)


# -- convenience wrappers ------------------------------------------------------

def scan_theorem1(a: int, b: int, x: int, threads: int = 1, **kw) -> ExceptionReport:
    return run_scan(ScanConfig("thm1", x, (a, b), **kw), threads=threads)


def scan_theorem2(bases, N: int, x: int, threads: int = 1, **kw) -> ExceptionReport:
    return run_scan(ScanConfig("thm2", x, tuple(bases), N=N, **kw), threads=threads)


def scan_theorem4(a: int, b: int, x: int, threads: int = 1, **kw) -> ExceptionReport:
    return run_scan(ScanConfig("thm4", x, (a, b), **kw), threads=threads)


def scan_conditions(a: int, b: int, x: int, threads: int = 1, **kw) -> dict[str, DensityCurve]:
    report = run_scan(ScanConfig("conditions", x, (a, b), **kw), threads=threads)
    return {name: report.series_curve(name) for name in CONDITION_SERIES}


def scan_corollary3(x: int, threads: int = 1, **kw) -> ExceptionReport:
    return run_scan(ScanConfig("corollary3", x, **kw), threads=threads)


@dataclass(frozen=True)
class MatthewsFit:
    counts: tuple[tuple[float, int], ...]
    slope: float | None


def scan_matthews(bases, x: int, y_grid, threads: int = 1, **kw) -> MatthewsFit:
    report = run_scan(ScanConfig("matthews", x, tuple(bases), y_grid=tuple(y_grid), **kw), threads=threads)
    return MatthewsFit(tuple((y, c) for y, c in report.aux_rows), report.summary["slope"])


def erdos_baseline(a: int, x: int, threads: int = 1, **kw) -> DensityCurve:
    return run_scan(ScanConfig("baseline", x, (a,), **kw), threads=threads).density


def divisor_interval_density(x: int, y: float, z: float, threads: int = 1, **kw) -> float:
    report = run_scan(ScanConfig("density-divisor", x, interval=(y, z), **kw), threads=threads)
    return report.summary["proportion"]


def replay_exceptions(report: ExceptionReport) -> list:
    """Recompute every exception row's orders from scratch; return mismatches.

    Uses the pure-Python kernels and the textbook definitions directly, so
    it shares no cache or compiled code with the scan that produced the rows.
    """
    bad = []
    cfg = report.config
    if report.scan in ("thm1", "thm4"):
        bases = five_bases(*cfg["bases"])
        for row in report.exceptions:
            n = row[0]
            if report.scan == "thm1":
                qs = [f for f, _ in _pykernels.factor_pairs(n - 1)]
                got = [_pykernels.order_mod_prime(base % n, n, qs) for base in bases]
            else:
                got = []
                for base in bases:
                    d = 1
                    for q, e in _pykernels.factor_pairs(n):
                        if base % q:
                            qs = [f for f, _ in _pykernels.factor_pairs(q - 1)]
                            d = math.lcm(d, _pykernels.order_mod_prime_power(base % q**e, q, e, qs))
                    got.append(d)
            if tuple(got) != tuple(row[1:6]) or max(got) != row[7]:
                bad.append(row)
    elif report.scan == "baseline":
        (a,) = cfg["bases"]
        for p, o in report.exceptions:
            qs = [f for f, _ in _pykernels.factor_pairs(p - 1)]
            if _pykernels.order_mod_prime(a % p, p, qs) != o:
                bad.append((p, o))
    elif report.scan == "corollary3":
        for p, a, m, n, _ in report.aux_rows:
            if (pow(a, m, p) + pow(a, n, p) + 1) % p:
                bad.append((p, a, m, n))
    return bad
