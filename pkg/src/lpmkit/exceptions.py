"""Exception hierarchy shared by all lpmkit modules."""


class LpmkitError(Exception):
    """Base class for every error raised by lpmkit."""


class ParseError(LpmkitError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class StateError(LpmkitError):
    """A transition was fired while not enabled."""


class ResourceError(LpmkitError):
    """A state-space exploration ran past its node budget."""


class InfeasibleAlignmentError(LpmkitError):
    """No alignment reaches the final marking under the restricted move set."""
