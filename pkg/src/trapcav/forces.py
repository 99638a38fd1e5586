"""Total forces on a wing and sampled pressure profiles.

The force per cavity width L follows from integrating the local pressures
along the wing arc:

    F_z = L * integral_0^R p_z(r) dr      (compression, < 0)
    F_x = L * integral_0^R p_x(r) dr      (expulsion; < 0 for phi > 0)

The z integrand is single-signed, so a relative tolerance is meaningful.
The x integrand changes sign along the wing and at phi = 0 integrates to
exactly zero by symmetry, where no relative target can ever be met; the x
integration therefore also gets an absolute tolerance anchored to the
cavity's own force scale, rel_tol * |integral of p_z|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotConverged
from .geometry import CavitySpec, validate
from .kernels import CODATA, PhysicalConstants, PressureSample, specific_pressures
from .quadrature import integrate_adaptive


@dataclass(frozen=True)
class ForceResult:
    """Integrated forces with error estimates, per ``wing_count`` wings.

    ``err_x`` and ``err_z`` are quadrature error estimates scaled like the
    forces themselves.  ``converged`` is False when either integral stopped
    at its depth limit; the values then carry the best estimate found.
    """

    spec: CavitySpec
    f_x: float
    f_z: float
    err_x: float
    err_z: float
    wing_count: int = 1
    converged: bool = True


@dataclass(frozen=True)
class PressureProfile:
    """Pressure samples along the wing, strictly increasing in ``r``."""

    spec: CavitySpec
    samples: tuple[PressureSample, ...]


def total_forces(
    spec: CavitySpec,
    rel_tol: float = 1e-9,
    *,
    wing_count: int = 1,
    constants: PhysicalConstants = CODATA,
) -> ForceResult:
    """Adaptive integration of both force components over the wing.

    With ``wing_count=2`` the x force doubles and the z force cancels
    exactly between the mirror-image wings; nothing is recomputed.  A
    :class:`NotConverged` from either integral is absorbed into
    ``converged=False`` instead of propagating, so sweeps can flag rows
    and continue; the values then carry the best estimates found.
    """
    validate(spec)
    if wing_count not in (1, 2):
        raise ValueError(f"wing_count must be 1 or 2, got {wing_count!r}")
    if not (rel_tol > 0.0):
        raise ValueError(f"rel_tol must be positive, got {rel_tol!r}")

    def p_z(r: float) -> float:
        return specific_pressures(spec, r, constants).p_z

    def p_x(r: float) -> float:
        return specific_pressures(spec, r, constants).p_x

    converged = True
    try:
        qz = integrate_adaptive(p_z, 0.0, spec.R, rel_tol=rel_tol)
        vz, ez = qz.value, qz.error_estimate
    except NotConverged as stop:
        vz, ez = stop.value, stop.error_estimate
        converged = False

    # the z integral never vanishes for a valid cavity, so it anchors x
    abs_x = max(rel_tol * abs(vz), 1e-300)
    try:
        qx = integrate_adaptive(p_x, 0.0, spec.R, rel_tol=rel_tol, abs_tol=abs_x)
        vx, ex = qx.value, qx.error_estimate
    except NotConverged as stop:
        vx, ex = stop.value, stop.error_estimate
        converged = False

    f_x = spec.L * vx
    f_z = spec.L * vz
    err_x = spec.L * ex
    err_z = spec.L * ez
    if wing_count == 2:
        f_x *= 2.0
        err_x *= 2.0
        f_z = 0.0
        err_z = 0.0
    return ForceResult(
        spec=spec,
        f_x=f_x,
        f_z=f_z,
        err_x=err_x,
        err_z=err_z,
        wing_count=wing_count,
        converged=converged,
    )


def pressure_profile(
    spec: CavitySpec, n: int, constants: PhysicalConstants = CODATA
) -> PressureProfile:
    """Sample both pressure components at ``n`` evenly spaced points on [0, R].

    Endpoints are included exactly: r_i = R * i / (n - 1).
    """
    validate(spec)
    if n < 2:
        raise ValueError(f"profile needs at least 2 samples, got {n!r}")
    samples = tuple(
        specific_pressures(spec, spec.R * i / (n - 1), constants) for i in range(n)
    )
    return PressureProfile(spec=spec, samples=samples)
