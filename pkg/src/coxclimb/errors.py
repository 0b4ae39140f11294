"""Exception hierarchy shared by every stage of the pipeline."""


class CoxeterError(Exception):
    """Base class for all errors raised by coxclimb."""


class BadSpec(CoxeterError, ValueError):
    """Malformed group symbol, Coxeter matrix, or unsupported configuration."""


class NonFiniteGroup(CoxeterError, ValueError):
    """The Gram matrix of the simple roots is not positive definite."""


class BudgetExceeded(CoxeterError, RuntimeError):
    pass


class NotReduced(CoxeterError, ValueError):
    pass


class NotSimple(CoxeterError, ValueError):
    pass


class IsSimple(CoxeterError, ValueError):
    pass


class OddCycle(CoxeterError, ValueError):
    pass


class SequenceMismatch(CoxeterError, RuntimeError):
    pass


class Singular(CoxeterError, RuntimeError):
    pass


class NoFacet(CoxeterError, RuntimeError):
    pass


class MultipleFacets(CoxeterError, RuntimeError):
    pass


class NotFound(CoxeterError, LookupError):
    pass


class IndexRange(CoxeterError, IndexError):
    pass


class PapiFailure(CoxeterError, RuntimeError):
    pass


class DualMismatch(CoxeterError, RuntimeError):
    pass


class IntervalViolation(CoxeterError, RuntimeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonInteger(CoxeterError, ArithmeticError):
    pass
