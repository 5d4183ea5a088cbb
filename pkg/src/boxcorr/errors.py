"""Exception hierarchy shared by every module."""


class BoxCorrError(Exception):
    """Base class for all errors raised by boxcorr."""


class DomainError(BoxCorrError, ValueError):
    """An input violates an operation's precondition."""


class SizeError(BoxCorrError, ValueError):
    """The requested computation exceeds a configured size bound."""


class ParseError(DomainError):
    """A point file record could not be parsed."""

    def __init__(self, path, lineno, text):
        self.path = path
        self.lineno = lineno
        self.text = text
        super().__init__(f"{path}: line {lineno}: cannot parse {text!r} as a finite real")
