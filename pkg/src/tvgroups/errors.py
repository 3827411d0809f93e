"""Exception hierarchy shared by every module of the package."""


class TVError(Exception):
    """Base class for all errors raised by tvgroups."""


class HorizonExceeded(TVError):
    """A level beyond the finite description of an alphabet or automaton was queried."""

    def __init__(self, level, horizon):
        super().__init__(f"level {level} is beyond horizon {horizon}")
        self.level = level
        self.horizon = horizon


class LetterOutOfRange(TVError):
    pass


class NotInvertible(TVError):
    pass


class AlphabetMismatch(TVError):
    pass


class BadPermutation(TVError):
    pass


class LevelMismatch(TVError):
    pass


class UnknownPreset(TVError):
    pass


class BadParameters(TVError):
    pass


class BadExponent(TVError):
    pass


class SpecError(TVError):
    """Malformed automaton spec file or CLI text input."""

    def __init__(self, message, field=None):
        where = f" (at {field})" if field else ""
        super().__init__(f"{message}{where}")
        self.field = field
