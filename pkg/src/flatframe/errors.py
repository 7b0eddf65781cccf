"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violated a documented precondition or format."""


class NumericalGuaranteeError(RuntimeError):
    """A quantity that is guaranteed exactly failed its numerical tolerance."""


class NoFeasibleCandidate(NumericalGuaranteeError):
    """No remaining index satisfied the barrier feasibility condition.

    The selection argument guarantees a feasible index exists at every step,
    so this signals accumulated floating-point error, not a modelling issue.
    """

    def __init__(self, step: int, min_condition: float, shift_margin: float):
        self.step = step
        self.min_condition = min_condition
        self.shift_margin = shift_margin
        super().__init__(
            f"no feasible candidate at step {step}: "
            f"min condition value {min_condition:.17g} exceeds 1 + tolerance "
            f"(shift margin {shift_margin:.3e})"
        )
