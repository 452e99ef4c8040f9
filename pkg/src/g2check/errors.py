"""Exception hierarchy.

Every error raised on a violated precondition derives from
:class:`ContractError`, so callers can catch the whole family at once.
"""


class ContractError(ValueError):
    """An operation was called outside its precondition."""


class DimensionError(ContractError):
    """Operands have incompatible dimension or degree."""


class RankDeficiencyError(ContractError):
    """A vector family is linearly dependent.

    ``index`` is the position of the first vector that lies in the span of
    its predecessors.
    """

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class NotRationalError(ArithmeticError):
    """An exact computation needs a square (or higher) root that is irrational."""


class SingularMetricError(ContractError):
    pass


class StructureInvalidError(ContractError):
    pass


class InvalidProductError(ContractError):
    pass


class NotAG2FormError(ContractError):
    pass


class ImmersionError(ContractError):
    """The Jacobian of an immersion lost rank at a sampled point."""


class StepTooLargeError(ContractError):
    """Finite-difference jets are inconsistent at the requested step."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class FrameError(ContractError):
    """The adapted frame could not be built or is not J-adapted."""


class FrameSmoothnessError(FrameError):
    """The reference vector selected for the adapted frame changes across a stencil."""


class ConfigError(ContractError):
    pass
