"""Exception types shared across the package."""

from __future__ import annotations


class EinstabError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(EinstabError, ValueError):
    pass


class NoSolutionError(EinstabError, ValueError):
    """An exact linear system has no solution."""


class NormalizationError(EinstabError, ValueError):
    pass


class StructureValidationError(EinstabError):
    """A constructed structure failed one of its defining identities."""


class IdentityFailure(EinstabError):
    def __init__(self, name: str, witness=None):
        self.name = name
        self.witness = witness
        msg = f"identity {name!r} failed"
        if witness is not None:
            msg += f" (witness {witness})"
        super().__init__(msg)


class PreconditionError(EinstabError, ValueError):
    pass


class NotACharacterError(EinstabError, ValueError):
    """A Laurent polynomial does not decompose with nonnegative multiplicities."""


class DomainError(EinstabError, ValueError):
    pass


class CertificateError(EinstabError):
    pass
