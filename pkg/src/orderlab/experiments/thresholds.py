"""Threshold rules for the scans. All logarithms are natural.

Each rule gives the log of its threshold twice: a vectorized float64 form
for the scan loop, and an mpmath form used to re-check any comparison that
lands within float noise of the boundary.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

EIGHT_FIFTEENTHS = 8 / 15
RECHECK_RTOL = 1e-9
_MP_DPS = 40


def xi(x: float) -> float:
    """log log x: the smooth/rough cut used throughout the proofs."""
    return math.log(math.log(x))


def epsilon_floor(t):
    """1 / log log log(100 t), the slowest-decaying epsilon admitted."""
    return 1.0 / np.log(np.log(np.log(100.0 * np.asarray(t, dtype=np.float64))))


def _epsilon_floor_mp(t):
    return 1 / mpmath.log(mpmath.log(mpmath.log(100 * mpmath.mpf(t))))


EPSILON_RULES = ("default", "zero")


def epsilon(t, rule: str):
    """User-side epsilon(t). ``default`` is the floor itself, ``zero`` is 0."""
    if rule == "default":
        return epsilon_floor(t)
    if rule == "zero":
        return np.zeros_like(np.asarray(t, dtype=np.float64))
    raise ValueError(f"unknown epsilon rule {rule!r}")


def _epsilon_mp(t, rule):
    return _epsilon_floor_mp(t) if rule == "default" else mpmath.mpf(0)


class Rule:
    """log-threshold as a function of the modulus t."""

    name = ""

    def log_float(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def log_mp(self, t: int):
        raise NotImplementedError

    def value(self, t) -> float:
        return float(np.exp(self.log_float(np.asarray([t], dtype=np.float64))[0]))


class Thm1Rule(Rule):
    """p^(8/15) / exp(2 sqrt(log p))."""

    name = "p^(8/15)/exp(2*sqrt(log p))"

    def log_float(self, t):
        lt = np.log(t)
        return EIGHT_FIFTEENTHS * lt - 2.0 * np.sqrt(lt)

    def log_mp(self, t):
        lt = mpmath.log(t)
        return mpmath.mpf(8) / 15 * lt - 2 * mpmath.sqrt(lt)


class ExponentRule(Rule):
    """t^(c + epsilon(t)); ``floor=True`` takes max(epsilon, floor)."""

    def __init__(self, c, epsilon_rule: str = "zero", floor: bool = False):
        self.c = c
        self.epsilon_rule = epsilon_rule
        self.floor = floor
        tag = f"eps:{epsilon_rule}" + ("+floor" if floor else "")
        self.name = f"t^({c}+{tag})"

    def _eps(self, t):
        e = epsilon(t, self.epsilon_rule)
        return np.maximum(e, epsilon_floor(t)) if self.floor else e

    def log_float(self, t):
        return (float(self.c) + self._eps(t)) * np.log(t)

    def log_mp(self, t):
        e = _epsilon_mp(t, self.epsilon_rule)
        if self.floor:
            e = max(e, _epsilon_floor_mp(t))
        return (mpmath.mpf(self.c.numerator) / self.c.denominator + e) * mpmath.log(t)


def at_or_below(orders: np.ndarray, moduli: np.ndarray, rule: Rule) -> np.ndarray:
    """Mask of moduli whose ``orders`` do not exceed the rule's threshold.

    Float comparisons within RECHECK_RTOL of the boundary are redone in
    mpmath, so rounding can only trigger a recheck, never a wrong verdict.
    """
    orders = np.asarray(orders)
    moduli = np.asarray(moduli)
    t = moduli.astype(np.float64)
    lo = np.log(orders.astype(np.float64))
    thr = rule.log_float(t)
    mask = lo <= thr
    near = np.flatnonzero(np.abs(lo - thr) <= RECHECK_RTOL * np.maximum(1.0, np.abs(thr)))
    if near.size:
        with mpmath.workdps(_MP_DPS):
            for i in near:
                mask[i] = mpmath.log(int(orders[i])) <= rule.log_mp(int(moduli[i]))
    return mask
