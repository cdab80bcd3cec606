"""Exception hierarchy shared by all modules."""


class CesolveError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CesolveError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateError(CesolveError, ValueError):
    pass


class PoleError(CesolveError, ValueError):
    pass


class AccuracyError(CesolveError, ArithmeticError):
    """The internal error estimate exceeds the requested tolerance."""


class BracketError(CesolveError, ArithmeticError):
    pass


class RootError(CesolveError, ArithmeticError):
    def __init__(self, message, branch=None):
        super().__init__(message)
        self.branch = branch


class DivergenceError(CesolveError, ArithmeticError):
    pass


class SingularFitError(CesolveError, ArithmeticError):
    pass


class FormError(CesolveError, ValueError):
    pass


class AmbiguityError(CesolveError, RuntimeError):
    pass


class StiffnessError(CesolveError, ArithmeticError):
    pass


class IncompleteSpectrumError(CesolveError, ArithmeticError):
    def __init__(self, message, found=()):
        super().__init__(message)
        self.found = list(found)
