"""Exception hierarchy shared by all envlab modules."""

from __future__ import annotations


class EnvlabError(Exception):
    """Base class for all envlab errors."""


class CycleError(EnvlabError):
    """The order relation is not antisymmetric (the space would not be T0)."""


class DuplicateNameError(EnvlabError):
    pass


class CapExceeded(EnvlabError):
    """An enumeration would exceed a configured size cap."""

    def __init__(self, cap: str, limit: int, value: int):
        self.cap = cap
        self.limit = limit
        self.value = value
        super().__init__(
            f"{cap} cap exceeded: need {value}, limit is {limit} "
            f"(raise --{cap.replace('_', '-')} to at least {value})"
        )


class BranchCapExceeded(CapExceeded):
    pass


class NotContinuous(EnvlabError):
    pass


class NotOpenMap(EnvlabError):
    pass


class NotALattice(EnvlabError):
    pass


class NotAnEnvelope(EnvlabError):
    pass


class NotASection(EnvlabError):
    pass


class NotJoinPreserving(EnvlabError):
    pass


class NotABundle(EnvlabError):
    pass


class ParseError(EnvlabError):
    """Input file does not match its schema; ``location`` names the offending field."""

    def __init__(self, message: str, location: str = "$"):
        self.location = location
        super().__init__(f"{location}: {message}")
