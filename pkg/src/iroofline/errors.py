"""Exception types shared across the toolkit.

Every error raised on a bad input derives from :class:`RooflineError`, so
callers (including the CLI) can catch one type and report the message.
"""


class RooflineError(Exception):
    """Base class for all errors raised by this package."""


class UnknownGpu(RooflineError):
    """Requested GPU name is not in the registry."""

    def __init__(self, name: str, known: "list[str]"):
        self.name = name
        self.known = sorted(known)
        super().__init__(
            f"unknown GPU {name!r}; known GPUs: {', '.join(self.known)}"
        )


class InvalidSpec(RooflineError):
    """A user-supplied GPU spec file entry is malformed."""


class MissingColumn(RooflineError):
    """A required CSV column is absent from the header."""

    def __init__(self, column: str, detail: str = ""):
        self.column = column
        msg = f"missing required column {column!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class MalformedRow(RooflineError):
    """A CSV data row cannot be interpreted."""

    def __init__(self, line: int, detail: str):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class EmptyInput(RooflineError):
    """Input text contains no data at all."""


class NoFunctionsFound(RooflineError):
    """A bandwidth benchmark log contains no recognizable result rows."""


class MissingDuration(RooflineError):
    """A kernel record has no resolvable duration."""


class NoInstructionMetric(RooflineError):
    """A kernel record carries none of the known instruction counters."""


class NonPositiveRuntime(RooflineError):
    """Kernel runtime must be strictly positive."""


class ZeroTraffic(RooflineError):
    """Memory traffic is zero, so a per-byte intensity is undefined."""


class ZeroTransactions(RooflineError):
    """Transaction count is zero or unavailable."""


class ModeUnsupported(RooflineError):
    """The requested intensity mode cannot be computed for this profile."""


class InconsistentMode(RooflineError):
    """Model inputs (ceilings, vendor) do not match the intensity mode."""


class NonPositiveValue(RooflineError):
    """A value that must be plotted on a logarithmic axis is <= 0."""


class InvalidProfile(RooflineError):
    """A profile entry (canonical JSON or counter cell) is malformed."""
