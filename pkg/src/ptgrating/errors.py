"""Exception types raised by the numerical backends."""


class SimulationError(Exception):
    """Base class for numerical failures (as opposed to bad configuration)."""


class SingularSystem(SimulationError):
    """The steady-state linear system has a nullspace of dimension > 1 after
    the trace constraint; the stationary state is not unique."""


class NonConvergent(SimulationError):
    """The steady-state residual tolerance was not met."""


class StepUnstable(SimulationError):
    """A population left [-0.01, 1.01] during time integration."""


class DegenerateDenominator(SimulationError):
    """The closed-form coherence denominator is numerically zero."""


class Overflow(SimulationError):
    """The transmission exponent exceeds the floating-point range."""


class DegenerateProfile(SimulationError):
    """A susceptibility profile has no usable gain/loss modulation."""
