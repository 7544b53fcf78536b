"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PartlocError(Exception):
    """Base class for all library errors."""


class InputError(PartlocError, ValueError):
    """Malformed or out-of-range input (bad ids, non-subgroups, wrong prime)."""


class ContractError(PartlocError):
    """A precondition of an operation does not hold."""


class UndefinedConjugationError(PartlocError):
    """``x^g`` requested for ``x`` outside ``D(g)``."""


class DomainError(PartlocError):
    """A product was requested for a word outside the domain."""


class UnsupportedInputError(PartlocError):
    """Input is mathematically meaningful but outside what the library handles."""


class ConstructionError(PartlocError):
    """A constructor produced an object that failed verification.

    The failing report is attached as ``report``.
    """

    def __init__(self, message: str, report: object = None):
        super().__init__(message)
        self.report = report


class ConfigError(PartlocError):
    """Unknown instance or lemma id in a suite configuration."""
