class KnapreformError(Exception):
    """Base class for all library errors."""


class DimensionError(KnapreformError, ValueError):
    pass


class SingularMatrixError(KnapreformError, ValueError):
    pass


class DependentRowsError(KnapreformError, ValueError):
    pass


class DependentColumnsError(KnapreformError, ValueError):
    def __init__(self, index: int):
        super().__init__(f"column {index} depends on the preceding columns")
        self.index = index


class RadicalSeparationError(KnapreformError, ArithmeticError):
    pass


class InstanceError(KnapreformError, ValueError):
    """Malformed or assumption-violating knapsack instance."""


class OrthogonalDirectionError(KnapreformError, ValueError):
    """a.p == 0, so no decomposition with a positive multiplier exists."""


class BudgetExceeded(KnapreformError, RuntimeError):
    pass
