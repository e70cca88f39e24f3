class ArrangementError(ValueError):
    """Invalid user input: arrangement data, pivots, flats, families or derivations."""


class HypothesisError(ArrangementError):
    """The hypothesis of a freeness criterion does not hold for the given arrangement."""


class DimensionGateError(ArrangementError):
    """The hyperplane-section criterion is only decided in ambient dimension at least 4."""


class InvariantViolation(RuntimeError):
    """An internal mathematical invariant failed. This is a bug, not a verdict."""
