"""Exception hierarchy shared by every module."""


class OrdsecError(Exception):
    """Base class for all package errors."""


class ParameterError(OrdsecError, ValueError):
    """An argument violates a documented precondition."""


class EmptyInstanceError(ParameterError):
    pass


class ExhaustedError(OrdsecError):
    """Raised when advancing an arrival sequence past its end."""


class EmptyPrefixError(OrdsecError):
    pass


class InformationLeakError(OrdsecError):
    """An algorithm asked for information the ordinal model does not grant.

    Raised when an element that has not arrived yet is queried, or when
    cardinal data is requested through an ordinal interface.
    """


class CapabilityError(OrdsecError):
    """An exact oracle was asked to solve an instance beyond its size limit."""


class SolverError(OrdsecError):
    def __init__(self, message, iterations=None, diagnostics=None):
        super().__init__(message)
        self.iterations = iterations
        self.diagnostics = diagnostics or {}


class FeasibilityError(OrdsecError):
    """An algorithm returned an infeasible solution (contract violation)."""


class ContractError(OrdsecError):
    pass
