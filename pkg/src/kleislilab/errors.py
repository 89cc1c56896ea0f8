"""Exception hierarchy shared by all kleislilab modules."""

from __future__ import annotations

import math


class KleisliLabError(Exception):
    """Base class for every error raised by the library."""


class NotALattice(KleisliLabError):
    """An order or sup-structure fails to be a (complete) lattice."""


class NoAdjoint(KleisliLabError):
    """A map does not preserve joins, so it has no right adjoint."""


class CapExceeded(KleisliLabError):
    """A materialization would exceed a configured size cap."""

    def __init__(self, what: str, size: float, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {_magnitude(size)} exceeds cap {cap}")


def _magnitude(size: float) -> str:
    try:
        return f"{float(size):g}"
    except OverflowError:
        return f"~1e{int(math.log10(size))}"


class MonadMismatch(KleisliLabError):
    """Two monoids that must share a monad do not."""


class MalformedSurface(KleisliLabError):
    """Surface data (instance, quantale or algebra file) is ill-formed."""


class UnknownName(KleisliLabError):
    """A built-in object was requested under an unknown name."""


class ModeUnsupported(KleisliLabError):
    """A checker was asked to run in a mode it does not support."""


class NoClosedForm(KleisliLabError):
    """No closed form of conv is known for this monad / kappa combination."""


class NotExponentiable(KleisliLabError):
    """An exponential was requested for a non-exponentiable monoid."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class HypothesisUnmet(KleisliLabError):
    """The hypotheses of a criterion do not hold, so no verdict is given."""
