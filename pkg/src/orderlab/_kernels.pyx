# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: 64-bit modular arithmetic, factorization, orders.

Every function here has a pure-Python twin in ``_pykernels`` with the same
name, signature and results. ``_backend`` picks one at import time.
"""

from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport uint64_t, int64_t, uint32_t

import numpy as np

cdef extern from *:
    """
    typedef unsigned __int128 ol_u128;
    """
    ctypedef unsigned long long ol_u128

# Cython sees ol_u128 as 64-bit; the C typedef above makes it 128-bit.

cdef uint64_t SMALL_PRIMES[168]
cdef int N_SMALL = 0
cdef uint64_t MR_BASES[12]
MR_BASES[:] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


cdef void _init_small_primes():
    global N_SMALL
    cdef int n, d, ok
    n = 2
    while N_SMALL < 168:
        ok = 1
        d = 2
        while d * d <= n:
            if n % d == 0:
                ok = 0
                break
            d += 1
        if ok:
            SMALL_PRIMES[N_SMALL] = n
            N_SMALL += 1
        n += 1


_init_small_primes()


cdef inline uint64_t _mulmod(uint64_t a, uint64_t b, uint64_t m) nogil:
    return <uint64_t>((<ol_u128>a * b) % m)


cdef inline uint64_t _powmod(uint64_t a, uint64_t e, uint64_t m) nogil:
    cdef uint64_t r = 1 % m
    a %= m
    while e:
        if e & 1:
            r = _mulmod(r, a, m)
        a = _mulmod(a, a, m)
        e >>= 1
    return r


cdef inline uint64_t _gcd(uint64_t a, uint64_t b) nogil:
    cdef uint64_t t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef bint _is_prime(uint64_t n) nogil:
    cdef int i, r, s
    cdef uint64_t d, x, a
    if n < 2:
        return False
    for i in range(12):
        if n == MR_BASES[i]:
            return True
        if n % MR_BASES[i] == 0:
            return False
    if n < 1369:  # 37**2
        return True
    d = n - 1
    s = 0
    while (d & 1) == 0:
        d >>= 1
        s += 1
    for i in range(12):
        a = MR_BASES[i]
        x = _powmod(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for r in range(s - 1):
            x = _mulmod(x, x, n)
            if x == n - 1:
                break
        else:
            return False
    return True


cdef uint64_t _rho(uint64_t n) nogil:
    # Brent's variant, seeds c = 1, 2, ... tried in order.
    cdef uint64_t c, y, x, ys, q, g, r, k, i, m, lim
    if n % 2 == 0:
        return 2
    m = 128
    c = 1
    while True:
        y = 2
        r = 1
        q = 1
        g = 1
        while g == 1:
            x = y
            for i in range(r):
                y = (_mulmod(y, y, n) + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                lim = m if m < r - k else r - k
                for i in range(lim):
                    y = (_mulmod(y, y, n) + c) % n
                    q = _mulmod(q, x - y if x > y else y - x, n)
                g = _gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (_mulmod(ys, ys, n) + c) % n
                g = _gcd(x - ys if x > ys else ys - x, n)
        if g != n:
            return g
        c += 1


cdef int _factor(uint64_t n, uint64_t *primes, int *exps) nogil:
    """Distinct primes of n into primes/exps (unsorted past trial division)."""
    cdef int count = 0, i, j, found
    cdef uint64_t p, stack[64], f, top
    cdef int sp = 0
    for i in range(N_SMALL):
        p = SMALL_PRIMES[i]
        if p * p > n:
            break
        if n % p == 0:
            primes[count] = p
            exps[count] = 0
            while n % p == 0:
                n //= p
                exps[count] += 1
            count += 1
    if n == 1:
        return count
    stack[0] = n
    sp = 1
    while sp > 0:
        sp -= 1
        top = stack[sp]
        if top == 1:
            continue
        if _is_prime(top):
            found = 0
            for j in range(count):
                if primes[j] == top:
                    exps[j] += 1
                    found = 1
                    break
            if not found:
                primes[count] = top
                exps[count] = 1
                count += 1
            continue
        f = _rho(top)
        stack[sp] = f
        stack[sp + 1] = top // f
        sp += 2
    return count


cdef uint64_t _order(uint64_t a, uint64_t p, uint64_t *qs, int nq) nogil:
    cdef uint64_t d = p - 1
    cdef int i
    for i in range(nq):
        while d % qs[i] == 0 and _powmod(a, d // qs[i], p) == 1:
            d //= qs[i]
    return d


cdef inline uint64_t _residue(int64_t b, uint64_t p) nogil:
    cdef uint64_t r
    if b >= 0:
        return (<uint64_t>b) % p
    r = (<uint64_t>(-(b + 1)) + 1) % p
    return 0 if r == 0 else p - r


def mul_mod(uint64_t a, uint64_t b, uint64_t m):
    return _mulmod(a, b, m)


def pow_mod(uint64_t a, uint64_t e, uint64_t m):
    return _powmod(a, e, m)


def is_prime(uint64_t n):
    return _is_prime(n)


def factor_pairs(uint64_t n):
    """Sorted ``[(prime, exponent), ...]`` for ``n >= 1``."""
    cdef uint64_t primes[64]
    cdef int exps[64]
    cdef int count, i
    if n <= 1:
        return []
    with nogil:
        count = _factor(n, primes, exps)
    return sorted([(primes[i], exps[i]) for i in range(count)])


def order_mod_prime(uint64_t a, uint64_t p, primes):
    """Order of residue ``a`` (1 <= a < p) given the distinct primes of p-1."""
    cdef uint64_t qs[64]
    cdef int nq = len(primes), i
    for i in range(nq):
        qs[i] = primes[i]
    return _order(a, p, qs, nq)


def order_mod_prime_power(uint64_t a, uint64_t q, int e, primes):
    """Order of ``a`` modulo q**e; ``a`` reduced mod q**e and prime to q."""
    cdef uint64_t qs[64]
    cdef int nq = len(primes), i
    cdef uint64_t qe = 1, d, cur
    for i in range(nq):
        qs[i] = primes[i]
    for i in range(e):
        qe *= q
    d = _order(a % q, q, qs, nq)
    cur = q
    for i in range(e - 1):
        cur *= q
        if _powmod(a, d, cur) != 1:
            d *= q
    return d


def orders_mod_prime_many(const uint64_t[:] residues, uint64_t p, primes):
    cdef uint64_t qs[64]
    cdef int nq = len(primes), i
    cdef Py_ssize_t j, n = residues.shape[0]
    for i in range(nq):
        qs[i] = primes[i]
    out = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[:] ov = out
    with nogil:
        for j in range(n):
            if residues[j] % p != 0:
                ov[j] = _order(residues[j] % p, p, qs, nq)
    return out


def batch_orders(const uint64_t[:] primes, const int64_t[:] bases):
    """Orders of each base modulo each prime, 0 where the prime divides it."""
    cdef Py_ssize_t i, j, np_ = primes.shape[0], nb = bases.shape[0]
    cdef uint64_t qs[64]
    cdef int ex[64]
    cdef int nq
    cdef uint64_t p, r
    out = np.zeros((np_, nb), dtype=np.uint64)
    cdef uint64_t[:, :] ov = out
    with nogil:
        for i in range(np_):
            p = primes[i]
            if p == 2:
                nq = 0
            else:
                nq = _factor(p - 1, qs, ex)
            for j in range(nb):
                r = _residue(bases[j], p)
                if r != 0:
                    ov[i, j] = _order(r, p, qs, nq)
    return out


def skalba(uint64_t a, uint64_t p, uint64_t ell):
    """First (m, n) with a^m + a^n + 1 = 0 mod p, or None.

    Scans the second exponent upward and reads the first from a table of
    the powers a^1..a^ell. Requires ell < 2**32.
    """
    cdef uint32_t *pos
    cdef uint64_t x, j, t, hit_m = 0, hit_n = 0
    if p == 2:
        return None
    pos = <uint32_t *>calloc(p, sizeof(uint32_t))
    if pos == NULL:
        raise MemoryError()
    try:
        with nogil:
            x = 1
            for j in range(1, ell + 1):
                x = _mulmod(x, a, p)
                pos[x] = <uint32_t>j
            x = 1
            for j in range(1, ell + 1):
                x = _mulmod(x, a, p)
                t = p - 1 - x
                if t != 0 and pos[t] != 0:
                    hit_m = pos[t]
                    hit_n = j
                    break
    finally:
        free(pos)
    if hit_n == 0:
        return None
    return (int(hit_m), int(hit_n))
