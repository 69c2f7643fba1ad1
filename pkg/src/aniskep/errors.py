"""Exception types shared across the package.

Two families matter for the CLI exit-code contract: ``DomainError`` and
``ConfigError`` are bad-input errors (exit 2), ``SimulationError`` and its
subclasses are runtime failures of an otherwise valid run (exit 3).
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """An experiment configuration is malformed (unknown key, bad value)."""


class SimulationError(RuntimeError):
    """Base class for failures occurring while a simulation is running."""


class MinRadiusViolation(SimulationError):
    """The trajectory came closer to the Coulomb center than the guard radius.

    Usually means the step size is too large for the orbit's perihelion, or
    the initial condition is pathological.
    """

    def __init__(self, t: float, radius: float, guard: float):
        self.t = t
        self.radius = radius
        self.guard = guard
        super().__init__(
            f"minimum-radius guard breached at t={t:.6g}: |r|={radius:.6g} <= {guard:.6g}"
        )


class StepBudgetExceeded(SimulationError):
    """The requested time span needs more steps than the configured budget."""


class UnboundOrbit(SimulationError):
    """Orbital elements were requested for a state with non-negative energy."""


class DegenerateApsis(SimulationError):
    """Apsis direction is undefined because the orbit is (near) circular."""


class ZeroRadius(SimulationError):
    """A Coulomb-center quantity was requested at zero radius."""


class ZeroVector(DomainError):
    """A direction was requested from a (near) zero vector."""


class ZeroAngularMomentum(SimulationError):
    """The orbit-plane normal is undefined for a radial (L = 0) state."""


class OpenLoop(DomainError):
    """A closed-loop quantity was requested for a loop that is not closed."""


class EmptyResult(DomainError):
    """An output writer was handed an empty record list."""
