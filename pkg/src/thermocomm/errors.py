"""Exception hierarchy shared by the models, the netlist parser and the CLI."""


class ValidationError(ValueError):
    """Raised when an input violates a model's preconditions."""


class InfiniteRelativeEntropyError(ValidationError):
    """p puts mass on a state where the reference distribution q has none."""

    def __init__(self, label):
        self.label = label
        super().__init__(
            f"infinite relative entropy: state {label!r} has positive probability "
            "but zero reference probability"
        )


class NetlistError(ValidationError):
    """Syntax or structural error in a netlist, with optional source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class EnumerationLimitError(ValidationError):
    """The circuit's joint wire alphabet is too large for exact enumeration."""
