"""Exception types raised by the parsing and analysis pipeline."""


class BellrandError(Exception):
    """Base class for all package-specific errors."""


class MalformedLineError(BellrandError):
    """A line of a station file could not be parsed as a single value."""

    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        msg = f"line {line_no}: unparsable content"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NonMonotonicTimeError(BellrandError):
    """Detection times must be strictly increasing."""

    def __init__(self, line_no: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: time not strictly greater than the previous one")


class EmptyFileError(BellrandError):
    """A station file contained no events."""


class CodeOutOfRangeError(BellrandError):
    """A setting/detector code was outside the two-bit range {0..3}."""

    def __init__(self, line_no: int, value: int):
        self.line_no = line_no
        self.value = value
        super().__init__(f"line {line_no}: code {value} outside 0..3")


class LengthMismatchError(BellrandError):
    """The time file and code file of one station differ in length."""

    def __init__(self, n_times: int, n_codes: int):
        self.n_times = n_times
        self.n_codes = n_codes
        super().__init__(f"time file has {n_times} entries, code file has {n_codes}")


class EmptyScanGridError(BellrandError):
    """The delay scan range/step combination yields no grid points."""


class EmptySequenceError(BellrandError):
    """An operation that needs at least one event got an empty sequence."""


class NoDataForPairError(BellrandError):
    """A correlation was requested for a setting pair with zero counts."""

    def __init__(self, a: int, b: int):
        self.a = a
        self.b = b
        super().__init__(f"no coincidences for setting pair (a={a}, b={b})")


class TooShortError(BellrandError):
    """Input too short for the requested encoding."""


class LengthTooShortError(BellrandError):
    """Normalized complexity needs a sequence of length >= 2."""


class BadCheckpointError(BellrandError):
    """Profile checkpoints must be increasing and within the sequence."""


class SequenceTooShortError(BellrandError):
    """A statistical test got fewer bits than its minimum."""

    def __init__(self, n: int, minimum: int, test: str = ""):
        self.n = n
        self.minimum = minimum
        self.test = test
        prefix = f"{test}: " if test else ""
        super().__init__(f"{prefix}need at least {minimum} bits, got {n}")


class BlockTooSmallError(BellrandError):
    """Block-frequency block size below the supported minimum."""


class InvalidConfigError(BellrandError):
    """A synthesis configuration violates its invariants."""


class BadParametersError(BellrandError):
    """Reference-sequence parameters outside their valid ranges."""


class NoApplicableRunsError(BellrandError):
    """No report row carries an applicable CHSH value."""
