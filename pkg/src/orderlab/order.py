"""Multiplicative orders modulo primes, prime powers and general moduli."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

from ._backend import kernels
from .arith import Factorization, factorize, lcm_checked
from .errors import BaseDivisibleError, InconsistentInputError, InvalidInputError, InvalidModulusError


@dataclass(frozen=True)
class OrderRecord:
    modulus: int
    base: int
    order: int


@dataclass(frozen=True)
class MultiOrderRecord:
    modulus: int
    bases: tuple[int, ...]
    subgroup_order: int


def _check_fact(fact: Factorization, n: int) -> Factorization:
    if fact.value != n:
        raise InconsistentInputError(f"factorization {fact} does not multiply to {n}")
    return fact


def order_mod_prime(a: int, p: int, fact_p_minus_1: Factorization | None = None) -> int:
    """Least d >= 1 with a^d = 1 (mod p).

    Starts from d = p - 1 and strips each prime q of p - 1 while a^(d/q) = 1.
    """
    if p < 2:
        raise InvalidModulusError(f"{p} is not prime")
    r = a % p
    if r == 0:
        raise BaseDivisibleError(a, p)
    if fact_p_minus_1 is None:
        fact_p_minus_1 = factorize(p - 1)
    else:
        _check_fact(fact_p_minus_1, p - 1)
    return int(kernels.order_mod_prime(r, p, fact_p_minus_1.primes))


def order_mod_prime_power(a: int, q: int, e: int, fact_q_minus_1: Factorization | None = None) -> int:
    """Order of a modulo q**e: the order mod q, lifted by factors of q."""
    if e < 1:
        raise InvalidInputError("exponent must be >= 1")
    if a % q == 0:
        raise BaseDivisibleError(a, q)
    qe = q**e
    if qe >> 64:
        raise InvalidInputError(f"{q}^{e} exceeds 64 bits")
    if fact_q_minus_1 is None:
        fact_q_minus_1 = factorize(q - 1)
    else:
        _check_fact(fact_q_minus_1, q - 1)
    return int(kernels.order_mod_prime_power(a % qe, q, e, fact_q_minus_1.primes))


def coprime_part(n: int, a: int, fact_n: Factorization | None = None) -> Factorization:
    """Factorization of n', the largest divisor of n coprime to a."""
    if fact_n is None:
        fact_n = factorize(n)
    return Factorization(tuple((q, e) for q, e in fact_n if a % q != 0))


def order_mod_n(a: int, n: int, fact_n: Factorization | None = None) -> int:
    """Eventual period of a, a^2, a^3, ... modulo n.

    Equals the order of a modulo n', the largest divisor of n prime to a;
    1 when n' = 1.
    """
    if n < 1:
        raise InvalidModulusError("modulus must be >= 1")
    if a == 0:
        raise InvalidInputError("base must be nonzero")
    if fact_n is None:
        fact_n = factorize(n)
    else:
        _check_fact(fact_n, n)
    d = 1
    for q, e in coprime_part(n, a, fact_n):
        d = lcm_checked(d, order_mod_prime_power(a, q, e))
    return d


def subgroup_order(bases, p: int, fact_p_minus_1: Factorization | None = None) -> int:
    """Size of the subgroup of (Z/p)^x generated by ``bases``."""
    bases = list(bases)
    if not bases:
        raise InvalidInputError("subgroup_order needs at least one base")
    if fact_p_minus_1 is None:
        fact_p_minus_1 = factorize(p - 1)
    orders = [order_mod_prime(b, p, fact_p_minus_1) for b in bases]
    return reduce(lcm_checked, orders)


def carmichael_lambda(n: int, fact_n: Factorization | None = None) -> int:
    """Exponent of the unit group mod n."""
    if n < 1:
        raise InvalidModulusError("modulus must be >= 1")
    if fact_n is None:
        fact_n = factorize(n)
    else:
        _check_fact(fact_n, n)
    lam = 1
    for q, e in fact_n:
        if q == 2:
            local = 1 if e == 1 else 2 if e == 2 else 1 << (e - 2)
        else:
            local = q ** (e - 1) * (q - 1)
        lam = lam * local // gcd(lam, local)
    return lam


class OrderCache:
    """Per-worker memo of orders mod p keyed by (p, residue).

    Only an optimization: results are identical with or without it.
    """

    def __init__(self):
        self._orders: dict[tuple[int, int], int] = {}
        self._facts: dict[int, Factorization] = {}

    def fact(self, n: int) -> Factorization:
        f = self._facts.get(n)
        if f is None:
            f = self._facts[n] = factorize(n)
        return f

    def order_mod_prime(self, a: int, p: int) -> int:
        key = (p, a % p)
        d = self._orders.get(key)
        if d is None:
            d = self._orders[key] = order_mod_prime(a, p, self.fact(p - 1))
        return d

    def clear(self):
        self._orders.clear()
        self._facts.clear()
