"""Exception hierarchy.

Every failure raised by this package derives from :class:`ArimaMergeError`.
The ``category`` attribute ("input" or "numeric") drives the CLI exit code
and the service error payload: malformed or undersized inputs are "input",
singular linear systems and the like are "numeric".
"""


class ArimaMergeError(Exception):
    category = "input"


class InputError(ArimaMergeError):
    category = "input"


class NumericError(ArimaMergeError):
    category = "numeric"


class SeriesTooShortError(InputError):
    """Series has too few readings for the requested operation."""


class SeedMismatchError(InputError):
    """Differencing seed count does not match the differencing order."""


class UnsupportedSpecError(InputError):
    """Model order combination the fitter does not support."""


class InsufficientHistoryError(InputError):
    """Forecast requested with fewer history values than the model needs."""


class SpecMismatchError(InputError):
    """Two models with different (p, d, q) orders where equal orders are required."""


class WindowLengthMismatchError(InputError):
    """Lag or residual window length differs from the model order."""


class OddInputError(InputError):
    """Pairing count requested for an odd number of nodes."""


class TooLargeError(InputError):
    """Exhaustive enumeration requested beyond the supported size."""


class EmptyInputError(InputError):
    """No models supplied where at least one is required."""


class EmptySubtreeError(InputError):
    """Subtree with no leaf identifiers."""


class InconsistentColumnsError(InputError):
    """Malformed table: ragged rows or unparseable cells."""


class DegenerateDataError(NumericError):
    """Normal-equations matrix is singular (e.g. constant series)."""
