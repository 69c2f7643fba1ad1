"""Kepler orbits under a slowly steered uniaxial anisotropy.

The package integrates a charge bound to a Coulomb center while the easy
plane of an added quadratic confinement is steered slowly in space, and
compares the resulting rotation of the orbit's apsis line with the
closed-form solid-angle prediction.  It ships symplectic integrators, the
frame/anisotropy geometry, closed-form predictions, orbit diagnostics,
preset experiments, and a CLI.
"""

from .errors import (
    ConfigError,
    DegenerateApsis,
    DomainError,
    EmptyResult,
    MinRadiusViolation,
    OpenLoop,
    SimulationError,
    StepBudgetExceeded,
    UnboundOrbit,
    ZeroAngularMomentum,
    ZeroRadius,
    ZeroVector,
)
from .geometry import (
    FrameAngles,
    angle_between,
    anisotropy_axis,
    coriolis_correction,
    coriolis_correction_trig,
    rotation_matrix,
    rotation_matrix_dphi,
    unit,
    vec3,
)
from .theory import (
    LoopOnSphere,
    hannay_shift,
    ponderomotive_omega0,
    ponderomotive_potential,
    predicted_cos_phi,
    predicted_rotation,
    solid_angle_const_theta,
)
from .protocols import AnisotropyProtocol, NucleusPath, PathKind, ProtocolKind
from .hamiltonians import (
    HamiltonianSpec,
    KeplerParams,
    PhaseState,
    Variant,
    fixed_anisotropy,
    force,
    moving_nucleus,
    potential_energy,
    pure_kepler,
    rotating_anisotropy,
    total_energy,
)
from .integrator import (
    IntegratorConfig,
    OrderMeasurement,
    Scheme,
    Stroboscopic,
    Trajectory,
    default_dt,
    integrate,
    kepler_period,
    measure_order,
    plan_steps,
)
from .diagnostics import (
    DipoleRotation,
    OrbitElements,
    dipole_rotation,
    orbit_elements,
    plane_normal,
    runge_lenz,
    stroboscopic,
)
from .harness import (
    ExperimentConfig,
    RunRecord,
    emit_svg,
    make_inplane_state,
    read_csv,
    run_fig1,
    run_fig2,
    run_fig3_point,
    sweep_theta,
    write_csv,
    write_trajectory_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateApsis",
    "DomainError",
    "EmptyResult",
    "MinRadiusViolation",
    "OpenLoop",
    "SimulationError",
    "StepBudgetExceeded",
    "UnboundOrbit",
    "ZeroAngularMomentum",
    "ZeroRadius",
    "ZeroVector",
    "FrameAngles",
    "angle_between",
    "anisotropy_axis",
    "coriolis_correction",
    "coriolis_correction_trig",
    "rotation_matrix",
    "rotation_matrix_dphi",
    "unit",
    "vec3",
    "LoopOnSphere",
    "hannay_shift",
    "ponderomotive_omega0",
    "ponderomotive_potential",
    "predicted_cos_phi",
    "predicted_rotation",
    "solid_angle_const_theta",
    "AnisotropyProtocol",
    "NucleusPath",
    "PathKind",
    "ProtocolKind",
    "HamiltonianSpec",
    "KeplerParams",
    "PhaseState",
    "Variant",
    "fixed_anisotropy",
    "force",
    "moving_nucleus",
    "potential_energy",
    "pure_kepler",
    "rotating_anisotropy",
    "total_energy",
    "IntegratorConfig",
    "OrderMeasurement",
    "Scheme",
    "Stroboscopic",
    "Trajectory",
    "default_dt",
    "integrate",
    "kepler_period",
    "measure_order",
    "plan_steps",
    "DipoleRotation",
    "OrbitElements",
    "dipole_rotation",
    "orbit_elements",
    "plane_normal",
    "runge_lenz",
    "stroboscopic",
    "ExperimentConfig",
    "RunRecord",
    "emit_svg",
    "make_inplane_state",
    "read_csv",
    "run_fig1",
    "run_fig2",
    "run_fig3_point",
    "sweep_theta",
    "write_csv",
    "write_trajectory_csv",
    "__version__",
]
