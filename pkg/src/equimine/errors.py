"""Exception types shared across the toolkit."""


class EquimineError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(EquimineError, ValueError):
    """Input violates a documented precondition or invariant."""


class ParseError(EquimineError, ValueError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConvergenceError(EquimineError, RuntimeError):
    """Iterative method failed to converge within its iteration cap."""

    def __init__(self, message, iterations):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class DegenerateColumnError(ValidationError):
    """A matrix column is unusable (e.g. all zeros). Names the indicator."""

    def __init__(self, indicator, message="column is all zeros"):
        super().__init__(f"indicator {indicator!r}: {message}")
        self.indicator = indicator


class SingularityError(EquimineError, ZeroDivisionError):
    """A leave-one-out mean hit zero for the named country and year."""

    def __init__(self, country, year):
        super().__init__(
            f"leave-one-out mean score is zero for country {country!r} in year {year}"
        )
        self.country = country
        self.year = year


class QuadratureError(EquimineError, RuntimeError):
    """Numerical integration missed its tolerance target."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved abs error {achieved:.3e})")
        self.achieved = achieved


class TrainingError(EquimineError, RuntimeError):
    """Training diverged. Carries the epoch at which it happened."""

    def __init__(self, message, epoch):
        super().__init__(f"{message} (epoch {epoch})")
        self.epoch = epoch


class PipelineError(EquimineError):
    """A pipeline stage failed. Carries the stage name and detail fields."""

    def __init__(self, stage, message, detail=None):
        super().__init__(f"stage {stage!r}: {message}")
        self.stage = stage
        self.message = message
        self.detail = dict(detail or {})
