"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PosetError(Exception):
    """Base class for all errors raised by posetlab."""


class CycleDetected(PosetError):
    """The cover digraph handed to a constructor is not acyclic."""


class NotAPartialOrder(PosetError):
    """A relation matrix fails reflexivity, antisymmetry or transitivity."""


class NotComparable(PosetError):
    """An operation required ``x <= y`` (or ``x < y``) and it does not hold."""


class NotAnEmbedding(PosetError):
    """A map between posets is not an injective order-embedding."""


class LayerInvalid(PosetError):
    """A layer structure violates one of its axioms."""


class MConditionFailed(PosetError):
    """A minimum/maximum uniqueness condition fails at ``element``."""

    def __init__(self, message: str, element=None, candidates=()):
        super().__init__(message)
        self.element = element
        self.candidates = tuple(candidates)


class SizeMismatch(PosetError):
    """Two elements of different ambient sizes were combined."""


class CapExceeded(PosetError):
    """A materialisation would exceed a configured size cap."""


class NotElementary(PosetError):
    """A pair that must be elementary is not."""


class FaceLimitExceeded(PosetError):
    """Chain enumeration produced more faces than the configured cap."""


class MobiusOverflow(PosetError, OverflowError):
    """An integer computation left the signed 64-bit range.

    ``pair`` holds the offending ``(x, y)`` element indices when known.
    """

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair
