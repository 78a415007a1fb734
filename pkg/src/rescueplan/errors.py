"""Exception types shared across the engine."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every error raised by this package."""


# ==== knowledge base ========================================================

class KbSyntaxError(EngineError):
    """Source text could not be parsed; carries a source location."""

    def __init__(self, message: str, source: str = "<string>",
                 line: int = 0, column: int = 0):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.reason = message
        self.source = source
        self.line = line
        self.column = column


class RuleSafetyError(KbSyntaxError):
    """Rule violates the safety condition (unbound head or negation variable)."""


# ==== inference =============================================================

class NotStratifiableError(EngineError):
    """Negation cycle in the rule dependency graph.

    `cycle` lists predicate indicators (name, arity) along one offending
    cycle, first element repeated at the end.
    """

    def __init__(self, cycle):
        names = " -> ".join(f"{n}/{a}" for n, a in cycle)
        super().__init__(f"rules are not stratifiable, negation cycle: {names}")
        self.cycle = tuple(cycle)


class UnsafeQueryError(EngineError):
    """Negative query literal reached with unbound variables."""


# ==== action model ==========================================================

class ActionModelError(EngineError):
    """Base class for action schema validation failures."""


class UnboundEffectVariableError(ActionModelError):
    """Effect mentions a variable not bound by the head or a positive literal."""


class EffectOnDerivedPredicateError(ActionModelError):
    """Effect targets a predicate that is not a declared fluent."""


class UnsafeSchemaError(ActionModelError):
    """Schema variables cannot be grounded left to right."""


# ==== world model ===========================================================

class IngestError(EngineError):
    """Base class for site table ingestion failures."""


class EmptyRegionsTableError(IngestError):
    """Regions table has a header but no data rows."""


class NonFiniteCoordinateError(IngestError):
    """Coordinate field is NaN or infinite."""


class UnknownObjectKindError(IngestError):
    """Object row kind is neither crane nor truck."""


class TableFormatError(IngestError):
    """Malformed table: bad header, wrong column count, duplicate key."""


# ==== session runtime =======================================================

class SessionError(EngineError):
    """Base class for scenario session faults."""


class ScenarioLoadError(SessionError):
    """Scenario bundle is incomplete or fails load-time validation."""


class TimestampRegressionError(SessionError):
    """Event timestamp is older than the session clock."""


class DirtyPlanError(SessionError):
    """Active plan was invalidated by events and must be replanned."""


class NoActivePlanError(SessionError):
    """Step execution requested while no plan is installed."""


class PlanCompleteError(SessionError):
    """Step execution requested after the final plan step."""
