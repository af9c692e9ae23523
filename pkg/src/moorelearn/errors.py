"""Exception types raised by the moorelearn package."""


class MooreLearnError(Exception):
    """Base class for all moorelearn-specific errors."""


class AlphabetMismatchError(MooreLearnError):
    """Two objects that must share an alphabet do not, or a symbol is unknown."""


class UndefinedTransitionError(MooreLearnError):
    """A run needed a transition that is not defined on an incomplete machine."""


class SkeletonMismatchError(MooreLearnError):
    """DFAs that must share one state-transition skeleton do not."""


class InvalidCodeError(MooreLearnError):
    """A state's mark bits decode to no output symbol where that is not allowed."""


class InconsistentTracesError(MooreLearnError):
    """Two traces assign different outputs to the same input word."""


class MarkConflictError(MooreLearnError):
    """A state would have to be both accepting and rejecting."""


class TraceParseError(MooreLearnError):
    """A trace or config file could not be parsed."""


class GenerationFailureError(MooreLearnError):
    """Random machine generation exhausted its retry budget."""


class EmptyTestSetError(MooreLearnError):
    """Accuracy was requested over an empty test set."""
