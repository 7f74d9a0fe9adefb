"""Exception types shared by the index builders and the CLI."""


class FrechetGridError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(FrechetGridError, ValueError):
    pass


class DimensionMismatch(FrechetGridError, ValueError):
    pass


class EmptyInput(FrechetGridError, ValueError):
    pass


class QuerySizeMismatch(FrechetGridError, ValueError):
    pass


class InvalidQuery(FrechetGridError, ValueError):
    pass


class OutOfBounds(FrechetGridError, IndexError):
    pass


class FormatError(FrechetGridError, ValueError):
    """Malformed input or index file."""


class BudgetExceeded(FrechetGridError, RuntimeError):
    """Enumeration would exceed the configured sequence budget.

    ``required`` is the number of sequences the build would have to visit,
    ``budget`` the configured cap.  ``curve_id`` names the offending curve
    when the budget is checked per curve.
    """

    def __init__(self, required, budget, curve_id=None):
        self.required = required
        self.budget = budget
        self.curve_id = curve_id
        where = f" for curve {curve_id!r}" if curve_id is not None else ""
        super().__init__(
            f"enumeration needs {required} sequences{where}, budget is {budget}"
        )
