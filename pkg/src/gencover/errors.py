class BudgetExceeded(RuntimeError):
    """Raised before starting an enumeration whose estimated cost is over budget."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (estimated {estimate:.3g} units)")
        self.estimate = estimate
