"""Exception types shared across the package.

Everything raised on purpose derives from :class:`TabrelError` so the CLI
can map failures to structured single-line errors and a nonzero exit code.
"""


class TabrelError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(TabrelError):
    """Shapes or sizes of two related objects do not line up."""


class SequenceTooLongError(TabrelError):
    """A linearized sequence exceeds the configured maximum length."""


class IdOutOfRangeError(TabrelError):
    """An id stream refers to a row outside its embedding table."""


class AblationError(TabrelError):
    """An ablation request is invalid (e.g. removing the fallback type)."""


class StructuralMismatchError(TabrelError):
    """Two sequences that should correspond token-by-token do not."""


class NumericalError(TabrelError):
    """A forward/backward pass produced a non-finite value."""


class NoCellsError(TabrelError):
    """Cell selection was requested on a sequence without cell tokens."""


class InfeasibleTaskError(TabrelError):
    """A synthetic-task spec cannot be satisfied (e.g. vocab too small)."""


class TrainingDivergedError(TabrelError):
    """Training aborted because the loss became non-finite."""


class FormatError(TabrelError):
    """A file or JSON payload does not match its documented schema."""
