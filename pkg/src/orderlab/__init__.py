"""Multiplicative orders modulo primes and composites, and scans that test
how often some element of a small explicit set has large order."""

__version__ = "0.1.0"

from ._backend import NAME as BACKEND
from .arith import Factorization, factorize, gcd, is_prime, lcm_checked, mul_mod, pow_mod, sieve_primes
from .errors import (
    BaseDivisibleError,
    IndependenceError,
    InconsistentInputError,
    InvalidInputError,
    InvalidModulusError,
    OrderLabError,
)
from .order import (
    MultiOrderRecord,
    OrderRecord,
    carmichael_lambda,
    order_mod_n,
    order_mod_prime,
    order_mod_prime_power,
    subgroup_order,
)
from .structure import (
    GeneratorSet,
    IndependenceVerdict,
    SmoothRoughSplit,
    build_generator_set,
    check_independence,
    delta_exponents,
    divisor_in_interval,
    rough_part_squarefree,
    smooth_rough_split,
)

__all__ = [
    "BACKEND",
    "BaseDivisibleError",
    "Factorization",
    "GeneratorSet",
    "IndependenceError",
    "IndependenceVerdict",
    "InconsistentInputError",
    "InvalidInputError",
    "InvalidModulusError",
    "MultiOrderRecord",
    "OrderLabError",
    "OrderRecord",
    "SmoothRoughSplit",
    "build_generator_set",
    "carmichael_lambda",
    "check_independence",
    "delta_exponents",
    "divisor_in_interval",
    "factorize",
    "gcd",
    "is_prime",
    "lcm_checked",
    "mul_mod",
    "order_mod_n",
    "order_mod_prime",
    "order_mod_prime_power",
    "pow_mod",
    "rough_part_squarefree",
    "sieve_primes",
    "smooth_rough_split",
    "subgroup_order",
]
