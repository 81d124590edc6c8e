"""Exception hierarchy.

Every domain error derives from :class:`DomainError`; the CLI maps those to
exit code 2 with a machine-readable JSON body.
"""

from __future__ import annotations


class DomainError(ValueError):
    """Base class for mathematically meaningful failures."""


class WordEndsInA(DomainError):
    pass


class ArityMismatch(DomainError):
    pass


class NonAdmissible(DomainError):
    pass


class UnevaluatableT(DomainError):
    pass


class OutOfRegion(DomainError):
    pass


class ZeroArgument(DomainError):
    pass


class NotInDisc(DomainError):
    pass


class TruncationMismatch(DomainError):
    pass


class BadConstantTerm(DomainError):
    pass


class UnsupportedDegree(DomainError):
    pass


class DegenerateQuadruple(DomainError):
    pass


class LabelMismatch(DomainError):
    pass


class UnstableTree(DomainError):
    pass


class SingularPoint(DomainError):
    pass
