"""Exception hierarchy shared by the solver, evaluators and CLI."""

from __future__ import annotations


class SamplingError(Exception):
    """Base class for all package errors."""


class ParameterError(SamplingError, ValueError):
    """An argument lies outside its documented domain."""


class DomainError(ParameterError):
    """A distribution was evaluated outside its support."""


class SingularityError(SamplingError, ArithmeticError):
    """The recursion hit a zero density and cannot be continued."""


class RecursionOverflow(SamplingError, OverflowError):
    """The recursion's exponential overflowed; the sequence is already divergent."""


class ContractError(SamplingError):
    """An input violates a precondition of the operation (e.g. invalid schedule)."""


class ConvergenceError(SamplingError):
    """Bisection did not terminate within its iteration budget."""

    def __init__(self, message: str, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class NoValidWindowError(ConvergenceError):
    """No bracket with the required endpoint classifications could be found."""


class ResourceError(SamplingError):
    """A computation would exceed a hard size limit."""


class BeyondTail(SamplingError):
    """A time-to-event realisation fell past the schedule's tail sample."""
