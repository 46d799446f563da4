"""Exception hierarchy shared by every module."""


class BanalgError(Exception):
    """Base class for all library errors."""


class DescriptorMismatch(BanalgError):
    """Operands live over different ground rings (or different series shapes)."""


class PrecisionError(BanalgError):
    """A p-adic computation ran out of precision and refused to guess."""


class ParseError(BanalgError):
    """A literal could not be parsed."""

    def __init__(self, message, token="", position=0):
        super().__init__(f"{message}: {token!r} at position {position}")
        self.token = token
        self.position = position


class DiagonalError(BanalgError):
    """A series that should vanish on the diagonal does not."""


class TruncationError(BanalgError):
    """A degree exceeds the truncation order."""


class UnsupportedCase(BanalgError):
    """Input is outside the supported set of flavors/elements."""


class SizeGuardError(BanalgError):
    """A brute-force computation would be too large."""


class WitnessError(BanalgError):
    """Bezout witnesses do not satisfy a*f + b*g = 1."""
