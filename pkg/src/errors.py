class BCHDesignError(Exception):
    """Base class for failures raised by the verifier."""


class BudgetExceededError(BCHDesignError):
    """An enumeration would touch more items than the configured budget allows."""

    def __init__(self, what: str, requested: int, budget: int, processed: int = 0):
        self.what = what
        self.requested = requested
        self.budget = budget
        self.processed = processed
        super().__init__(
            f"{what}: {requested} items requested, budget is {budget} "
            f"({processed} processed before stopping)"
        )


class InternalConsistencyError(BCHDesignError):
    """A quantity that can never vanish (or never fail) did."""
