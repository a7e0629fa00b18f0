"""Exceptions shared across the package."""

from __future__ import annotations


class GermcalcError(Exception):
    """Base class for all germcalc errors."""


class NotStabilizedError(GermcalcError):
    """A truncated-jet dimension did not stabilize before hitting d_max.

    This usually signals an infinite-dimensional quotient (non-isolated
    singularity, non-finite codimension) or a d_max that is too small for
    the germ at hand.
    """

    def __init__(self, message: str, d_max: int | None = None,
                 history: tuple[int, ...] = ()):
        super().__init__(message)
        self.d_max = d_max
        self.history = tuple(history)


class NotCorankOneError(GermcalcError):
    """A branch has corank 2 or more, outside the supported range."""


class NotStableTypeError(GermcalcError):
    """The requested label does not belong to a stable multigerm."""


class GermSyntaxError(GermcalcError):
    """A germ expression failed to parse."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position
