"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class PlanningError(Exception):
    """Base class for all errors raised by tiplan."""


class BadParameter(PlanningError, ValueError):
    pass


# graph validation


class GraphError(PlanningError):
    pass


class CycleDetected(GraphError):
    pass


class NegativeCost(GraphError):
    pass


class MissingEndpoint(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class Unreachable(PlanningError):
    pass


class TargetUnreachable(Unreachable):
    pass


class GraphFormatError(PlanningError, ValueError):
    pass


# agent / analysis


class ZeroOptimalCost(PlanningError):
    pass


class PreconditionViolated(PlanningError):
    pass


class BudgetExceeded(PlanningError):
    """Raised when a search runs out of its oracle-call budget.

    ``best`` carries whatever partial result the search had, if any.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class VariantViolation(PlanningError):
    pass


# reductions


class DimacsSyntaxError(PlanningError, ValueError):
    pass


class NotThreeCnf(PlanningError, ValueError):
    pass


class AssignmentNotSatisfying(PlanningError):
    pass


class NotMinimalMotivating(PlanningError):
    pass


class InfeasibleRewards(PlanningError):
    pass


class NTooSmall(BadParameter):
    def __init__(self, message: str, suggested_n: int):
        super().__init__(message)
        self.suggested_n = suggested_n


class RelationViolated(PlanningError):
    pass
