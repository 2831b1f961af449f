"""Exception hierarchy for the expsearch package."""


class ExpandingSearchError(Exception):
    """Base class for all expsearch errors."""


class GraphValidationError(ExpandingSearchError):
    """A graph failed construction-time validation."""


class SelfLoopError(GraphValidationError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class LengthBelowOneError(GraphValidationError):
    """Edge lengths must be >= 1 (the model's normalization)."""


class DisconnectedGraphError(GraphValidationError):
    pass


class NotARootedSubtreeError(ExpandingSearchError):
    """Edge set to contract is not a subtree containing the root."""


class SearchValidationError(ExpandingSearchError):
    """An edge sequence is not a valid expanding search."""


class PrefixNotTreeError(SearchValidationError):
    """Some prefix of the sequence is not a rooted subtree."""


class IncompleteCoverError(SearchValidationError):
    """The sequence ends before every vertex has been reached."""


class EmptySetError(ExpandingSearchError):
    pass


class UnsupportedGraphClassError(ExpandingSearchError):
    """Operation is only defined for trees or unweighted graphs."""


class NotATreeError(ExpandingSearchError):
    pass


class CapExceededError(ExpandingSearchError):
    """Enumeration would exceed the configured cap."""


class TooManyTerminalsForExactError(ExpandingSearchError):
    """Exact Steiner solving is capped at 14 terminals."""


class OutOfRegimeError(ExpandingSearchError):
    """Closed-form game value queried outside its validity regime."""


class NumericalFailureError(ExpandingSearchError):
    """A numerical certificate (duality gap) could not be achieved."""


class InvalidParamsError(ExpandingSearchError):
    """Bad parameters passed to an instance generator."""


class PreconditionViolatedError(ExpandingSearchError):
    """A documented operation precondition does not hold."""


class FormatError(ExpandingSearchError):
    """Malformed graph or CNF input text."""
