"""Exception hierarchy shared by every wfstkit module."""


class WfstError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class SemiringMismatchError(WfstError):
    pass


class SymbolTableError(WfstError):
    """Incompatible alphabets or an unknown symbol."""


class FormatError(WfstError):
    """Malformed text input. ``lineno`` is 1-based, or None for whole-file problems."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnknownSymbolError(FormatError, SymbolTableError):
    pass


class DivergenceError(WfstError):
    """A cycle whose weight makes the required infinite sum undefined."""


class EnumerationLimitError(WfstError):
    pass


class NonDeterminizableError(WfstError):
    pass


class PreconditionError(WfstError):
    """Input machine does not have a property the operation requires."""


class NoPathError(WfstError):
    pass
