"""Pure-Python twin of the compiled ``_kernels`` module.

Same names, same arguments, same results. Used when the extension is not
built, or when ``ORDERLAB_PURE=1`` is set.
"""

from math import gcd

import numpy as np

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _small_primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(limit + 1) if sieve[i]]


_SMALL_PRIMES = _small_primes(997)  # the first 168 primes, as in the C kernel


def mul_mod(a, b, m):
    return a * b % m


def pow_mod(a, e, m):
    return pow(a, e, m)


def is_prime(n):
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < 1369:
        return True
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n):
    if n % 2 == 0:
        return 2
    m = 128
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def factor_pairs(n):
    if n <= 1:
        return []
    found = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    stack = [n] if n > 1 else []
    while stack:
        top = stack.pop()
        if top == 1:
            continue
        if is_prime(top):
            found[top] = found.get(top, 0) + 1
            continue
        f = _rho(top)
        stack.extend((f, top // f))
    return sorted(found.items())


def order_mod_prime(a, p, primes):
    d = p - 1
    for q in primes:
        while d % q == 0 and pow(a, d // q, p) == 1:
            d //= q
    return d


def order_mod_prime_power(a, q, e, primes):
    d = order_mod_prime(a % q, q, primes)
    cur = q
    for _ in range(e - 1):
        cur *= q
        if pow(a, d, cur) != 1:
            d *= q
    return d


def orders_mod_prime_many(residues, p, primes):
    out = np.zeros(len(residues), dtype=np.uint64)
    for j, r in enumerate(residues):
        r = int(r) % p
        if r:
            out[j] = order_mod_prime(r, p, primes)
    return out


def batch_orders(primes, bases):
    bases = [int(b) for b in bases]
    out = np.zeros((len(primes), len(bases)), dtype=np.uint64)
    for i, p in enumerate(primes):
        p = int(p)
        qs = [q for q, _ in factor_pairs(p - 1)]
        for j, b in enumerate(bases):
            r = b % p
            if r:
                out[i, j] = order_mod_prime(r, p, qs)
    return out


def skalba(a, p, ell):
    if p == 2:
        return None
    if p < 1 << 31:
        # powers a^1..a^ell in blocks, each block the previous times a^B
        block = max(1, int(ell**0.5))
        head = np.empty(block, dtype=np.int64)
        x = 1
        for j in range(block):
            x = x * a % p
            head[j] = x
        step = int(head[-1])
        nblocks = -(-ell // block)
        powers = np.empty(nblocks * block, dtype=np.int64)
        powers[:block] = head
        for b in range(1, nblocks):
            powers[b * block : (b + 1) * block] = powers[(b - 1) * block : b * block] * step % p
        powers = powers[:ell]
        pos = np.zeros(p, dtype=np.int64)
        pos[powers] = np.arange(1, ell + 1)
        targets = p - 1 - powers
        hits = np.flatnonzero(pos[targets] > 0)
        if hits.size == 0:
            return None
        j = int(hits[0])
        return (int(pos[targets[j]]), j + 1)
    pos = {}
    x = 1
    for j in range(1, ell + 1):
        x = x * a % p
        pos[x] = j
    x = 1
    for j in range(1, ell + 1):
        x = x * a % p
        m = pos.get(p - 1 - x)
        if m is not None:
            return (m, j)
    return None
