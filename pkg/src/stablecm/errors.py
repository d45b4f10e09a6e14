"""Exception hierarchy.

Every engine error derives from :class:`StableCMError`; the CLI maps these to
exit code 1.  :class:`CheckFailed` is different: it signals that a
mathematical assertion was falsified and maps to exit code 2.
"""


class StableCMError(Exception):
    """Base class for input and engine errors."""


class ParseError(StableCMError):
    pass


class NonPrime(ParseError):
    pass


class RingMismatch(StableCMError):
    pass


class ShapeMismatch(StableCMError):
    pass


class InhomogeneousInput(StableCMError):
    pass


class NonMinimalInput(StableCMError):
    pass


class NotMCM(StableCMError):
    pass


class NoStabilization(StableCMError):
    pass


class WrongCodimension(StableCMError):
    pass


class CodimMismatch(StableCMError):
    pass


class NonGorensteinRing(StableCMError):
    pass


class NotAFactorization(StableCMError):
    pass


class TruncationTooSmall(StableCMError):
    pass


class SuperficialSamplingExhausted(StableCMError):
    pass


class UncertifiedWitness(StableCMError):
    pass


class MiddleNotFree(StableCMError):
    pass


class QNotInsideI(StableCMError):
    pass


class QNotCI(StableCMError):
    pass


class ParameterPropertyFails(StableCMError):
    pass


class MalformedDescriptor(StableCMError):
    pass


class UnsupportedCatalogEntry(StableCMError):
    pass


class CheckFailed(Exception):
    """A claimed identity or inequality did not hold on a computed example."""

    def __init__(self, reference: str, message: str):
        super().__init__(f"{reference}: {message}")
        self.reference = reference
