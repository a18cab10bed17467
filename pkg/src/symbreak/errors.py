"""Exception hierarchy shared by all modules."""


class SymbreakError(Exception):
    """Base class for every error raised by this package."""


class CapExceeded(SymbreakError):
    """A brute-force enumeration would exceed its configured cap."""


class NotSubgroup(SymbreakError):
    pass


class Intractable(SymbreakError):
    """No structural construction applies and the group is too large for the per-element fallback."""


class PropagationStuck(SymbreakError):
    """Unit propagation left auxiliary variables undetermined."""


class OracleIncomplete(SymbreakError):
    """An evaluator assumed to be complete accepted nothing in some orbit."""


class SpecError(SymbreakError, ValueError):
    """Malformed group specification, graph, tree or file."""
