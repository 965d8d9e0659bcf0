"""Exception types shared across the package."""


class MDSError(Exception):
    """Base class for all package errors."""


class ConfigError(MDSError):
    pass


class NotPrime(ConfigError):
    pass


class EvenCharacteristic(ConfigError):
    pass


class NotIrreducible(ConfigError):
    pass


class FieldCapExceeded(ConfigError):
    pass


class DimensionMismatch(MDSError):
    pass


class ZeroInverse(ZeroDivisionError, MDSError):
    pass


class ZeroArgument(MDSError):
    pass


class OrderDoesNotDivide(MDSError):
    pass


class NotIndependent(ConfigError):
    pass


class DomainError(ValueError, MDSError):
    pass


class CapExceeded(MDSError):
    """An enumeration would exceed the configured size cap."""


class ParityViolation(ArithmeticError, MDSError):
    """The character-sum identity produced a non-integral count."""


class LemmaHypothesisError(MDSError):
    pass


class ConjugatePair(LemmaHypothesisError):
    pass


class NotGenerator(LemmaHypothesisError):
    pass
