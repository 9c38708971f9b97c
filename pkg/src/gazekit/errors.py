"""Exception hierarchy.

``InputError`` subclasses signal bad input or violated preconditions (the CLI
maps them to exit status 2); everything else derived from ``GazeKitError`` is a
runtime failure (exit status 1).
"""


class GazeKitError(Exception):
    pass


class InputError(GazeKitError, ValueError):
    pass


class SeriesTooShort(InputError):
    def __init__(self, length: int, minimum: int = 2):
        super().__init__(f"series has {length} samples, need at least {minimum}")
        self.length = length
        self.minimum = minimum


class NonPositiveThreshold(InputError):
    pass


class NonPositiveConversion(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class LengthMismatch(InputError):
    def __init__(self, a: int, b: int):
        super().__init__(f"length mismatch: {a} != {b}")


class ZeroVariance(InputError):
    pass


class EmptySeries(InputError):
    pass


class MalformedRow(InputError):
    def __init__(self, line: int, reason: str = ""):
        msg = f"malformed row at line {line}"
        super().__init__(f"{msg}: {reason}" if reason else msg)
        self.line = line


class NonMonotonicTimestamp(InputError):
    def __init__(self, line: int):
        super().__init__(f"timestamp not strictly increasing at line {line}")
        self.line = line


class UnknownLabelToken(InputError):
    def __init__(self, line: int, token: str):
        super().__init__(f"unknown label token {token!r} at line {line}")
        self.line = line
        self.token = token


class MissingLabelColumn(InputError):
    pass


class InfeasibleAmplitude(InputError):
    pass


class AllUndefined(GazeKitError):
    """Every point of a threshold sweep produced a single-class labeling."""
