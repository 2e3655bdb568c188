"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the CLI exit status
it maps to (2 = usage/input problem, 3 = retries exhausted or unsolved regime).
"""


class SgcastError(Exception):
    code = "error"
    exit_status = 2


class NotPrime(SgcastError, ValueError):
    code = "not_prime"


class ZeroInverse(SgcastError, ZeroDivisionError):
    code = "zero_inverse"


class DimensionMismatch(SgcastError, ValueError):
    code = "dimension_mismatch"


class Singular(SgcastError, ValueError):
    code = "singular"


class BadDimensions(SgcastError, ValueError):
    code = "bad_dimensions"


class FieldTooSmall(SgcastError, ValueError):
    code = "field_too_small"


class TooManyReceivers(SgcastError, ValueError):
    code = "too_many_receivers"


class BadGamma(SgcastError, ValueError):
    code = "bad_gamma"


class BadDelta(SgcastError, ValueError):
    code = "bad_delta"


class RegimeMismatch(SgcastError, ValueError):
    code = "regime_mismatch"


class Unsolved(RegimeMismatch):
    """The requested gamma lies in a regime with no known optimal scheme."""

    code = "unsolved"
    exit_status = 3


class RetriesExhausted(SgcastError, RuntimeError):
    code = "retries_exhausted"
    exit_status = 3


class IndependenceViolated(SgcastError, ValueError):
    code = "independence_violated"


class TooLarge(SgcastError, ValueError):
    code = "too_large"


class ParseError(SgcastError, ValueError):
    code = "parse_error"


class SchemaError(SgcastError, ValueError):
    code = "schema_error"
