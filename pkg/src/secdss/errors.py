"""Exception hierarchy shared by every module."""


class DssError(Exception):
    """Base class for all library errors."""


class ModelError(DssError):
    """The scenario breaks the threat model; the CLI maps these to exit code 3."""


class DivideByZero(DssError, ZeroDivisionError):
    pass


class ShapeError(DssError, ValueError):
    pass


class NoSolution(DssError):
    pass


class FieldTooSmall(DssError, ValueError):
    pass


class NotMds(DssError):
    def __init__(self, message, columns=None):
        super().__init__(message)
        self.columns = columns


class TooFewSymbols(DssError):
    pass


class PunctureTooDeep(DssError, ValueError):
    pass


class BadParams(DssError, ValueError):
    pass


class BadThreat(DssError, ValueError):
    pass


class NotSupported(DssError):
    pass


class BadTrace(DssError, ValueError):
    pass


class BadCollector(DssError, ValueError):
    pass


class TooLarge(DssError):
    pass


class NoSidecar(DssError):
    pass


class AdversaryOmniscient(ModelError):
    pass


class AdversaryTooStrong(ModelError):
    pass


class CapacityZero(ModelError):
    pass


class BudgetExceeded(ModelError):
    pass


class ModelViolation(ModelError):
    pass
