"""Exception types shared across the package."""


class ObsOrderError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(ObsOrderError):
    """Operands have incompatible dimensions."""


class ValidationError(ObsOrderError):
    """Input rejected at a public boundary (non-square, non-finite, asymmetric...)."""


class NumericalFailureError(ObsOrderError):
    """An iterative numerical routine failed to converge."""


class InternalInconsistencyError(ObsOrderError):
    """A closed-form value disagreed with its definitional cross-check."""


class OracleNotAutomorphicError(ObsOrderError):
    """A black-box oracle response violated the structure required of an
    order-automorphism (non-PSD image of a PSD probe, wrong rank, or a
    validation residual above threshold)."""


class TransportFailureError(ObsOrderError):
    """Subprocess oracle I/O failed (process died, malformed or out-of-order
    response)."""


class SearchExhaustedError(ObsOrderError):
    """Counterexample search ran out of attempts although the analytic
    criterion says one must exist. Diagnostic; should not occur at default
    trial budgets."""
