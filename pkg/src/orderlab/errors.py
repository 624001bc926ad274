"""Exception hierarchy.

Input problems subclass ``ValueError``; arithmetic overflow subclasses
``OverflowError``. The CLI maps ``UsageError`` subclasses to exit status 1
and ``ComputationError`` subclasses to exit status 2.
"""


class OrderLabError(Exception):
    """Root of all library errors."""


class UsageError(OrderLabError, ValueError):
    pass


class ComputationError(OrderLabError):
    pass


class InvalidModulusError(UsageError):
    pass


class InvalidInputError(UsageError):
    pass


class BaseDivisibleError(UsageError):
    """The modulus divides the base, so the order is undefined."""

    def __init__(self, base, modulus):
        super().__init__(f"modulus {modulus} divides base {base}")
        self.base = base
        self.modulus = modulus


class IndependenceError(UsageError):
    """Bases are multiplicatively dependent; ``relation`` witnesses it."""

    def __init__(self, bases, relation):
        self.bases = list(bases)
        self.relation = list(relation)
        super().__init__(f"dependent bases: {format_relation(self.bases, self.relation)}")


class InconsistentInputError(ComputationError, ValueError):
    """A supplied factorization does not match the number it claims to factor."""


class ArithmeticOverflowError(ComputationError, OverflowError):
    pass


class CheckpointMismatchError(ComputationError):
    pass


def format_relation(bases, relation):
    """``[2, 4], [2, -1]`` -> ``'2^2 * 4^-1 = 1'``."""
    terms = [f"{b}^{e}" for b, e in zip(bases, relation) if e != 0]
    return " * ".join(terms) + " = 1"
