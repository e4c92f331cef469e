"""Exception hierarchy.

Every domain error raised by the library derives from :class:`CyclotraceError`;
the CLI maps these to exit code 1 and prints the class name verbatim.
"""


class CyclotraceError(Exception):
    """Base class for domain errors."""


class ParseError(CyclotraceError):
    pass


# groups
class OrderCapExceeded(CyclotraceError):
    pass


class NotAGroup(CyclotraceError):
    pass


class UnknownElement(CyclotraceError):
    pass


class NotInSL2(CyclotraceError):
    pass


# group ring
class GroupMismatch(CyclotraceError):
    pass


class DimensionMismatch(CyclotraceError):
    pass


class NotIdempotent(CyclotraceError):
    pass


# witt
class TruncationMismatch(CyclotraceError):
    pass


class NotASubset(CyclotraceError):
    pass


class IndexNotInTruncation(CyclotraceError):
    pass


class NotDivisorClosed(CyclotraceError):
    pass


class TruncationCapExceeded(CyclotraceError):
    pass


class IntegralityViolation(AssertionError):
    """Ghost inversion hit a non-exact division.

    Never triggered by valid input; signals a bug in the arithmetic.
    """


# trzero
class NotADivisor(CyclotraceError):
    pass


class NotPrime(CyclotraceError):
    pass


class LevelNotCovered(CyclotraceError):
    pass


class LevelCapExceeded(CyclotraceError):
    pass


# bass
class TruncationTooSmall(CyclotraceError):
    pass


class SupportNotDeclared(CyclotraceError):
    pass


class NotFrobeniusInvariant(CyclotraceError):
    pass


class ZeroArgument(CyclotraceError):
    pass
