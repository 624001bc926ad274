import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import primes_upto
from orderlab import arith
from orderlab.errors import ArithmeticOverflowError, InvalidModulusError

pytestmark = pytest.mark.usefixtures("backend")

U64 = st.integers(0, arith.NAT64_MAX)
MOD = st.integers(1, arith.NAT64_MAX)


@given(U64, U64, MOD)
def test_mul_mod_matches_bigint(a, b, m):
    assert arith.mul_mod(a, b, m) == a * b % m


@given(U64, st.integers(0, 1 << 70), MOD)
@settings(max_examples=200)
def test_pow_mod_matches_builtin(a, e, m):
    assert arith.pow_mod(a, e, m) == pow(a, e, m)


def test_mul_mod_zero_modulus():
    with pytest.raises(InvalidModulusError):
        arith.mul_mod(3, 4, 0)


def test_is_prime_small_range():
    small = set(primes_upto(5000))
    assert [n for n in range(5001) if arith.is_prime(n)] == sorted(small)


@pytest.mark.parametrize(
    "n, expected",
    [
        ((1 << 61) - 1, True),
        ((1 << 64) - 59, True),
        (10**18 + 9, True),
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),  # strong pseudoprime to the first nine prime bases
        (318665857834031151167461, None),  # above 64 bits: out of domain
    ],
)
def test_is_prime_hard_cases(n, expected):
    if expected is None:
        with pytest.raises(ValueError):
            arith.is_prime(n)
    else:
        assert arith.is_prime(n) is expected


@pytest.mark.parametrize(
    "n",
    [1, 2, 12, 720, 3215031751, 10**18 + 9, (1 << 64) - 59, (2**32 - 5) * (2**32 - 17), 2**63, 3**40, 999999000001 * 1000003],
)
def test_factorize_known(n):
    f = arith.factorize(n)
    assert f.value == n
    assert all(arith.is_prime(p) for p in f.primes)
    assert f.primes == sorted(set(f.primes))


@given(st.integers(1, arith.NAT64_MAX))
@settings(max_examples=150, deadline=None)
def test_factorize_property(n):
    f = arith.factorize(n)
    f.validate(n)


def test_factorize_str():
    assert str(arith.factorize(720)) == "2^4 * 3^2 * 5"
    assert str(arith.factorize(1)) == "1"


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        arith.factorize(0)


def test_lcm_checked_overflow():
    assert arith.lcm_checked(6, 10) == 30
    with pytest.raises(ArithmeticOverflowError):
        arith.lcm_checked((1 << 63) + 1, (1 << 62) + 1)


@pytest.mark.parametrize("lo, hi", [(0, 100), (2, 2), (90, 97), (10**6, 10**6 + 5000), (50, 10)])
def test_sieve_matches_trial_division(lo, hi):
    want = [n for n in range(max(lo, 2), hi + 1) if all(n % q for q in range(2, math.isqrt(n) + 1))]
    assert arith.sieve_primes(lo, hi) == want


def test_sieve_segments_join_seamlessly():
    whole = arith.sieve_primes(2, 200_000)
    small = arith.sieve_primes(2, 200_000, segment_size=997)
    assert whole == small
    assert len(whole) == 17984


def test_sieve_high_window():
    lo = (1 << 40) - 1000
    got = arith.sieve_primes(lo, lo + 1000)
    assert got == [n for n in range(lo, lo + 1001) if arith.is_prime(n)]


def test_pure_backend_env_switch():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ORDERLAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import orderlab; print(orderlab.BACKEND)"], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
