"""Integer structure: smooth/rough splits, divisors in intervals,
multiplicative independence and generator sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod

import numpy as np

from ._backend import kernels
from .arith import Factorization, factorize
from .errors import IndependenceError, InvalidInputError


@dataclass(frozen=True)
class SmoothRoughSplit:
    smooth: int
    rough: int
    z: float


def smooth_rough_split(fact: Factorization, z: float) -> SmoothRoughSplit:
    """Split into the largest z-smooth divisor and its cofactor."""
    smooth = rough = 1
    for p, e in fact:
        if p <= z:
            smooth *= p**e
        else:
            rough *= p**e
    return SmoothRoughSplit(smooth, rough, z)


def rough_part_squarefree(fact: Factorization, z: float) -> bool:
    return all(e == 1 for p, e in fact if p > z)


def divisors(fact: Factorization) -> list[int]:
    """All divisors, ascending."""
    out = [1]
    for p, e in fact:
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def divisor_in_interval(fact: Factorization, y: float, z: float) -> bool:
    """True iff some divisor d of the factored number has y < d <= z."""
    if not y < z:
        return False
    entries = list(fact)

    # Depth-first over prime powers; products only grow, so a branch whose
    # partial product is above z is dead.
    def walk(i: int, d: int) -> bool:
        if y < d <= z:
            return True
        if i == len(entries):
            return False
        p, e = entries[i]
        for _ in range(e + 1):
            if d > z:
                return False
            if walk(i + 1, d):
                return True
            d *= p
        return False

    return walk(0, 1)


@dataclass(frozen=True)
class IndependenceVerdict:
    independent: bool
    relation: tuple[int, ...] | None = None


def _exponent_matrix(bases):
    facts = [factorize(abs(b)) for b in bases]
    primes = sorted({p for f in facts for p in f.primes})
    col = {p: j for j, p in enumerate(primes)}
    rows = []
    for f in facts:
        row = [0] * len(primes)
        for p, e in f:
            row[col[p]] = e
        rows.append(row)
    return rows, primes


def bareiss_rank(matrix) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in matrix]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, nrows):
            for j in range(c + 1, ncols):
                m[r][j] = (m[rank][c] * m[r][j] - m[r][c] * m[rank][j]) // prev
            m[r][c] = 0
        prev = m[rank][c]
        rank += 1
        if rank == nrows:
            break
    return rank


def _left_null_vector(rows) -> list[int]:
    """Nonzero integer e with sum e_i * rows[i] = 0 (rows must be dependent)."""
    k = len(rows)
    ncols = len(rows[0]) if rows else 0
    # Solve A e = 0 with A = rows^T over Q, reduced row echelon form.
    a = [[Fraction(rows[i][j]) for i in range(k)] for j in range(ncols)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, ncols) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(ncols):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = next(c for c in range(k) if c not in pivots)
    e = [Fraction(0)] * k
    e[free] = Fraction(1)
    for i, c in enumerate(pivots):
        e[c] = -a[i][free]
    den = lcm(*(v.denominator for v in e))
    ints = [int(v * den) for v in e]
    g = gcd(*ints)
    ints = [v // g for v in ints]
    if next(v for v in ints if v) < 0:
        ints = [-v for v in ints]
    return ints


def relation_holds(bases, relation) -> bool:
    """Evaluate prod a_i^e_i exactly over Q and compare with 1."""
    num, den = 1, 1
    for b, e in zip(bases, relation):
        if e >= 0:
            num *= b**e
        else:
            den *= b ** (-e)
    return num == den


def check_independence(bases) -> IndependenceVerdict:
    """Multiplicative independence over Q^x via prime-exponent vectors.

    A dependency whose signed product is -1 is doubled so it evaluates to +1.
    """
    bases = [int(b) for b in bases]
    if not bases:
        raise InvalidInputError("need at least one base")
    if any(b == 0 for b in bases):
        raise InvalidInputError("bases must be nonzero")
    rows, _ = _exponent_matrix(bases)
    k = len(bases)
    if rows and rows[0] and bareiss_rank(rows) == k:
        return IndependenceVerdict(True)
    if not rows or not rows[0]:
        relation = [1] + [0] * (k - 1)
    else:
        relation = _left_null_vector(rows)
    negative_power = sum(e for b, e in zip(bases, relation) if b < 0)
    if negative_power % 2:
        relation = [2 * e for e in relation]
    assert relation_holds(bases, relation)
    return IndependenceVerdict(False, tuple(relation))


def require_independent(bases) -> None:
    verdict = check_independence(bases)
    if not verdict.independent:
        raise IndependenceError(bases, verdict.relation)


@dataclass(frozen=True)
class GeneratorSet:
    """All a_1^e_1 ... a_k^e_k with 0 <= e_i < N, not all zero.

    Elements are exponent vectors in lexicographic order. They are reduced
    mod p on demand and never materialized as integers in scans.
    """

    bases: tuple[int, ...]
    N: int
    vectors: np.ndarray = field(repr=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.bases)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return (tuple(int(x) for x in v) for v in self.vectors)

    def value(self, i: int) -> int:
        return prod(b**int(e) for b, e in zip(self.bases, self.vectors[i]))

    def values(self) -> list[int]:
        return [self.value(i) for i in range(len(self))]

    def residues(self, p: int) -> np.ndarray:
        """Every element reduced mod p, as uint64, same order as ``vectors``."""
        if p < 1 << 31:
            acc = np.ones(len(self.vectors), dtype=np.int64)
            for i, b in enumerate(self.bases):
                table = np.empty(self.N, dtype=np.int64)
                x, r = 1 % p, b % p
                for e in range(self.N):
                    table[e] = x
                    x = x * r % p
                acc = acc * table[self.vectors[:, i]] % p
            return acc.astype(np.uint64)
        tables = [[pow(b % p, e, p) for e in range(self.N)] for b in self.bases]
        out = np.empty(len(self.vectors), dtype=np.uint64)
        for j, v in enumerate(self.vectors):
            x = 1
            for t, e in zip(tables, v):
                x = kernels.mul_mod(x, t[e], p)
            out[j] = x
        return out


def build_generator_set(bases, N: int) -> GeneratorSet:
    bases = tuple(int(b) for b in bases)
    if N < 2:
        raise InvalidInputError("box size N must be >= 2")
    require_independent(bases)
    k = len(bases)
    grid = np.array(list(itertools.product(range(N), repeat=k))[1:], dtype=np.int64)
    return GeneratorSet(bases, N, grid.reshape(-1, k))


def delta_exponents(k: int, N: int) -> tuple[Fraction, Fraction]:
    """Exact (delta, delta') for k bases and box size N; delta' > delta."""
    if k < 1 or N < 2:
        raise InvalidInputError("need k >= 1 and N >= 2")
    head = 1 - Fraction(1, k + 1)
    delta = head * (1 - Fraction(1, N))
    delta_prime = head * Fraction(N**k - N ** (k - 1), N**k - 1)
    return delta, delta_prime
