"""Exact 64-bit modular arithmetic, primality, factorization and sieving."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._backend import kernels
from .errors import ArithmeticOverflowError, InconsistentInputError, InvalidInputError, InvalidModulusError

NAT64_MAX = (1 << 64) - 1


def _check_nat64(name: str, v: int) -> None:
    if v < 0 or v > NAT64_MAX:
        raise InvalidInputError(f"{name}={v} is outside [0, 2^64)")


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition, primes strictly increasing."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((int(p), int(e)) for p, e in self.entries))

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def value(self) -> int:
        n = 1
        for p, e in self.entries:
            n *= p**e
        return n

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.entries]

    def validate(self, n: int | None = None) -> "Factorization":
        """Check the invariants (and that it factors ``n``, if given)."""
        last = 1
        for p, e in self.entries:
            if p <= last or e < 1 or not is_prime(p):
                raise InconsistentInputError(f"malformed factorization {list(self.entries)}")
            last = p
        if n is not None and self.value != n:
            raise InconsistentInputError(f"factorization {list(self.entries)} does not multiply to {n}")
        return self

    def __str__(self) -> str:
        if not self.entries:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.entries)


def mul_mod(a: int, b: int, m: int) -> int:
    if m == 0:
        raise InvalidModulusError("modulus must be >= 1")
    _check_nat64("m", m)
    _check_nat64("a", a)
    _check_nat64("b", b)
    return kernels.mul_mod(a % m, b % m, m)


def pow_mod(a: int, e: int, m: int) -> int:
    """``a**e mod m`` by square-and-multiply; ``pow_mod(a, 0, m) == 1 % m``."""
    if m == 0:
        raise InvalidModulusError("modulus must be >= 1")
    _check_nat64("m", m)
    if e < 0:
        raise InvalidInputError("exponent must be nonnegative")
    a %= m
    if e > NAT64_MAX:
        return pow(a, e, m)
    return kernels.pow_mod(a, e, m)


def is_prime(n: int) -> bool:
    """Deterministic for every n < 2^64 (strong probable-prime test, first 12 prime bases)."""
    if n < 2:
        return False
    _check_nat64("n", n)
    return bool(kernels.is_prime(n))


def factorize(n: int) -> Factorization:
    """Trial division by primes below 1000, then Brent's rho on the cofactor."""
    if n < 1:
        raise InvalidInputError("factorize needs n >= 1")
    _check_nat64("n", n)
    return Factorization(tuple(kernels.factor_pairs(n)))


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def lcm_checked(a: int, b: int) -> int:
    """lcm that raises instead of leaving 64 bits."""
    if a == 0 or b == 0:
        return 0
    r = abs(a) // math.gcd(a, b) * abs(b)
    if r > NAT64_MAX:
        raise ArithmeticOverflowError(f"lcm({a}, {b}) exceeds 64 bits")
    return r


_SEGMENT = 1 << 18


def _base_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mark[i]:
            mark[i * i :: i] = False
    return np.flatnonzero(mark)


def iter_prime_segments(lo: int, hi: int, segment_size: int = _SEGMENT) -> Iterator[np.ndarray]:
    """Yield ascending uint64 arrays of the primes in [lo, hi], one per segment."""
    lo = max(lo, 2)
    if lo > hi:
        return
    base = _base_primes(math.isqrt(hi))
    start = lo
    while start <= hi:
        stop = min(hi + 1, start + segment_size)
        mark = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            mark[first - start :: p] = False
        yield (np.flatnonzero(mark) + start).astype(np.uint64)
        start = stop


def sieve_primes(lo: int, hi: int, segment_size: int = _SEGMENT, max_segments: int = 1 << 16) -> list[int]:
    """Primes in [lo, hi] ascending; memory O(segment_size + sqrt(hi))."""
    if lo > hi:
        return []
    _check_nat64("hi", hi)
    if (hi - lo) > segment_size * max_segments:
        raise InvalidInputError(f"range [{lo}, {hi}] exceeds {max_segments} segments of {segment_size}")
    out: list[int] = []
    for seg in iter_prime_segments(lo, hi, segment_size):
        out.extend(seg.tolist())
    return out
