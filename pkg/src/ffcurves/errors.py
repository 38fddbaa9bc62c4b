"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FFCurvesError(Exception):
    exit_code = 1


class UsageError(FFCurvesError, ValueError):
    """Malformed input: bad parameters, schema violations, non-prime p."""

    exit_code = 1


class InconsistencyError(FFCurvesError, ArithmeticError):
    """A mathematical consistency check failed (e.g. non-integral zeta data)."""

    exit_code = 2


class BudgetExceeded(FFCurvesError, RuntimeError):
    """An enumeration or sampling budget was exhausted."""

    exit_code = 3


class PrecisionExhausted(FFCurvesError, RuntimeError):
    """Series precision ran out; callers re-expand deeper."""

    exit_code = 3
