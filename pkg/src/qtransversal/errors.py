"""Exception types shared across the package."""


class QTransversalError(Exception):
    """Base class for all errors raised by qtransversal."""


class ValidationError(QTransversalError, ValueError):
    """Input rejected; ``witness`` carries the offending object(s) when known."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceError(QTransversalError):
    """A configured size bound would be exceeded."""


class CodeFileError(QTransversalError, ValueError):
    """Syntax error in a code or gate file."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
