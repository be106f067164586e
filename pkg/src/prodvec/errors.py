"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input file or literal; carries position info when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class UnsupportedSizeError(ValueError):
    """Requested operation exceeds its documented exact-mode bounds."""
