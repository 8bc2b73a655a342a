"""Exception hierarchy shared by all modules."""


class BuchiError(Exception):
    pass


class FormatError(BuchiError, ValueError):
    """Malformed automaton, Kripke or suite file."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class GuardSyntaxError(BuchiError, ValueError):
    def __init__(self, message, position, text):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position} in {text!r}")


class ContractError(BuchiError, ValueError):
    """An operation was applied outside its precondition (e.g. GV on a GBA)."""


class ConfigError(BuchiError, ValueError):
    pass


class CapacityError(BuchiError, MemoryError):
    """The intern store refused a new descriptor."""


class InvariantViolation(BuchiError, AssertionError):
    """Raised by debug mode when an algorithm invariant fails."""
