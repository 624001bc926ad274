import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orderlab import arith, structure
from orderlab.errors import IndependenceError, InvalidInputError

pytestmark = pytest.mark.usefixtures("backend")

NONZERO = st.integers(-40, 40).filter(lambda b: b != 0)


def test_smooth_rough_split():
    s = structure.smooth_rough_split(arith.factorize(2**3 * 5 * 7**2 * 101), 7)
    assert (s.smooth, s.rough) == (2**3 * 5 * 49, 101)
    assert structure.rough_part_squarefree(arith.factorize(4 * 101), 3)
    assert not structure.rough_part_squarefree(arith.factorize(4 * 101**2), 3)


@given(st.integers(1, 10**7), st.floats(1, 10**4))
def test_smooth_times_rough(n, z):
    s = structure.smooth_rough_split(arith.factorize(n), z)
    assert s.smooth * s.rough == n
    assert all(p <= z for p in arith.factorize(s.smooth).primes)
    assert all(p > z for p in arith.factorize(s.rough).primes)


def test_divisors():
    assert structure.divisors(arith.factorize(12)) == [1, 2, 3, 4, 6, 12]
    assert structure.divisors(arith.factorize(1)) == [1]


@given(st.integers(1, 10**6), st.floats(0, 2000), st.floats(0, 2000))
@settings(max_examples=300)
def test_divisor_in_interval_matches_enumeration(n, y, z):
    f = arith.factorize(n)
    want = any(y < d <= z for d in structure.divisors(f))
    assert structure.divisor_in_interval(f, y, z) is want


def test_divisor_in_interval_edges():
    f = arith.factorize(12)
    assert structure.divisor_in_interval(f, 5, 6)
    assert not structure.divisor_in_interval(f, 6, 6)
    assert not structure.divisor_in_interval(f, 6.5, 11.9)


def test_bareiss_rank():
    assert structure.bareiss_rank([[1, 2], [2, 4]]) == 1
    assert structure.bareiss_rank([[2, 0, 1], [0, 3, 1], [2, 3, 2]]) == 2
    assert structure.bareiss_rank([[0, 0]]) == 0
    assert structure.bareiss_rank([]) == 0


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=5))
def test_bareiss_rank_matches_numpy(rows):
    assert structure.bareiss_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@pytest.mark.parametrize(
    "bases, independent",
    [((2, 3), True), ((2, 4), False), ((6, 10, 15), True), ((2, 3, 6), False), ((-2, 2), False), ((-1,), False), ((1, 2), False), ((-3, 5), True)],
)
def test_check_independence_examples(bases, independent):
    v = structure.check_independence(bases)
    assert v.independent is independent
    if not independent:
        assert structure.relation_holds(bases, v.relation)
        assert any(v.relation)


def test_relation_for_two_and_four():
    assert structure.check_independence([2, 4]).relation == (2, -1)


def test_require_independent_message():
    with pytest.raises(IndependenceError, match=r"2\^2 \* 4\^-1 = 1"):
        structure.require_independent([2, 4])


def test_zero_base_rejected():
    with pytest.raises(InvalidInputError):
        structure.check_independence([0, 2])


@given(NONZERO, NONZERO)
@settings(max_examples=300)
def test_pair_independence_against_exhaustive_search(a, b):
    # for |a|, |b| <= 40 any relation has exponents within 2 * 5
    found = any(
        structure.relation_holds((a, b), (i, j))
        for i, j in itertools.product(range(-10, 11), repeat=2)
        if (i, j) != (0, 0)
    )
    assert structure.check_independence((a, b)).independent is (not found)


@given(st.lists(NONZERO, min_size=1, max_size=4))
@settings(max_examples=200)
def test_relation_or_full_rank(bases):
    v = structure.check_independence(bases)
    if v.independent:
        rows, _ = structure._exponent_matrix(bases)
        assert np.linalg.matrix_rank(np.array(rows, dtype=float)) == len(bases)
    else:
        assert structure.relation_holds(bases, v.relation)


def test_generator_set_layout():
    gs = structure.build_generator_set([2, 3], 3)
    assert gs.k == 2 and len(gs) == 8
    assert list(gs)[:3] == [(0, 1), (0, 2), (1, 0)]
    assert gs.values() == [3, 9, 2, 6, 18, 4, 12, 36]


@pytest.mark.parametrize("p", [7, 101, 65537, (1 << 31) + 11, (1 << 61) - 1])
def test_generator_residues(p):
    gs = structure.build_generator_set([2, 3, 5], 4)
    assert gs.residues(p).tolist() == [v % p for v in gs.values()]


def test_generator_set_rejects():
    with pytest.raises(InvalidInputError):
        structure.build_generator_set([2, 3], 1)
    with pytest.raises(IndependenceError):
        structure.build_generator_set([2, 8], 3)


def test_delta_exponents_value():
    d, dp = structure.delta_exponents(5, 10)
    assert d == Fraction(3, 4)
    assert dp > d


def test_delta_prime_exceeds_delta_everywhere():
    for k in range(1, 9):
        for N in range(2, 13):
            d, dp = structure.delta_exponents(k, N)
            assert isinstance(d, Fraction) and dp > d


def test_delta_exponents_rejects():
    with pytest.raises(InvalidInputError):
        structure.delta_exponents(0, 3)
