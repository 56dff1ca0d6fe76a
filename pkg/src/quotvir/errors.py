"""Exception hierarchy.

Everything raised on bad mathematical input derives from :class:`DataError`,
which the command line maps to exit status 2.
"""


class QuotvirError(Exception):
    pass


class DataError(QuotvirError, ValueError):
    pass


class UnknownSymbolError(DataError):
    pass


class RingMismatchError(DataError):
    pass


class NonUnitError(DataError):
    pass


class PreconditionError(DataError):
    pass


class MissingExponentError(DataError):
    pass


class MissingPairingError(DataError):
    pass


class RankDeficientError(DataError):
    def __init__(self, message, symbols=()):
        super().__init__(message)
        self.symbols = tuple(symbols)


class InconsistentSamplesError(DataError):
    pass


class TwistInvarianceError(DataError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class RecurrenceViolation(DataError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class InconsistentChernData(DataError):
    pass


class DegreeError(DataError):
    pass


class NotComputableError(DataError):
    pass
