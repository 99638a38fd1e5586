"""Per-ray Casimir pressure and the closed-form fan integrals.

Two ideal parallel plates at distance ``a`` carry (per unit area)

    energy    E(a) = -hbar c pi^2 / (720 a^3) = -K / (3 a^3)
    pressure  P(a) = -hbar c pi^2 / (240 a^4) = -K / a^4

with K = hbar c pi^2 / 240.  In the ray picture each direction ``theta`` in
the visible fan contributes the parallel-plate pressure of its own ray
length b(r, theta) = s / sin(theta - 2 phi), projected onto the wing frame.
Substituting b and integrating over theta turns the fourth power of the
sine back into plain trig:

    p_z(r) = -(K / s^4) * integral_theta1^theta2 sin^4(theta - 2 phi)
                                  sin(theta - phi) d theta
    p_x(r) = +(K / s^4) * integral_theta1^theta2 sin^4(theta - 2 phi)
                                  cos(theta - phi) d theta

With u = theta - 2 phi both integrands split over sin^5 u and sin^4 u cos u,
whose antiderivatives are

    F5(u) = -cos u + (2/3) cos^3 u - (1/5) cos^5 u      (for sin^5)
    G5(u) = (1/5) sin^5 u                               (for sin^4 cos)

so the z integrand integrates to cos(phi) dF5 + sin(phi) dG5 and the x
integrand to cos(phi) dG5 - sin(phi) dF5.  Over the full half-space fan
(0, pi) at phi = 0 the z integral is 16/15 — the factor by which an ideal
half-space of rays beats the single perpendicular ray — and the x integral
over (0, pi/2) is +1/5, flipping sign on (pi/2, pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveGap, NonPositiveRay
from .geometry import AngleWindow, CavitySpec, Units, limit_angles, s_factor, validate


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values feeding the pressure prefactor K = hbar c pi^2 / 240."""

    hbar: float = 1.054571817e-34  # J s
    c: float = 2.99792458e8  # m / s

    @property
    def K(self) -> float:
        """Prefactor of the parallel-plate pressure, in N m^2."""
        return self.hbar * self.c * math.pi**2 / 240.0


#: Default constants; every public entry point takes an override for auditing.
CODATA = PhysicalConstants()


@dataclass(frozen=True)
class PressureSample:
    """Local pressures at arc coordinate ``r`` on the upper wing.

    ``p_z`` is the compression component (normal to the mid-plane, always
    negative: the wings attract); ``p_x`` is the expulsion component along
    the cavity axis (negative pushes the wing towards the apex).
    """

    r: float
    p_x: float
    p_z: float


def pressure_prefactor(spec: CavitySpec, constants: PhysicalConstants = CODATA) -> float:
    """K in SI mode, exactly 1.0 in reduced mode.

    Reduced mode exists because s^4 at nanometer scales times 1e-27 makes
    intermediate magnitudes miserable to compare; dropping the prefactor
    changes nothing about the geometry content.
    """
    return 1.0 if spec.units is Units.REDUCED else constants.K


def casimir_energy_per_area(a: float, k: float | None = None) -> float:
    """Parallel-plate Casimir energy per unit area, -K / (3 a^3)."""
    if not (a > 0.0):
        raise NonPositiveGap(f"plate separation must be positive, got {a!r}")
    if k is None:
        k = CODATA.K
    return -k / (3.0 * a**3)


def classical_casimir_pressure(a: float, k: float | None = None) -> float:
    """Parallel-plate Casimir pressure, -K / a^4 (attractive, so negative)."""
    if not (a > 0.0):
        raise NonPositiveGap(f"plate separation must be positive, got {a!r}")
    if k is None:
        k = CODATA.K
    return -k / a**4


def local_ray_pressure(b: float, k: float | None = None) -> float:
    """Pressure carried by a single ray of length ``b``: -K / b^4."""
    if not (b > 0.0):
        raise NonPositiveRay(f"ray length must be positive, got {b!r}")
    if k is None:
        k = CODATA.K
    return -k / b**4


def _sin5_primitive(u: float) -> float:
    # antiderivative of sin^5
    cu = math.cos(u)
    return -cu + (2.0 / 3.0) * cu**3 - (1.0 / 5.0) * cu**5


def _sin4cos_primitive(u: float) -> float:
    # antiderivative of sin^4 cos
    return math.sin(u) ** 5 / 5.0


def inner_integral_z(window: AngleWindow, phi: float) -> float:
    """Closed form of the compression fan integral.

    integral of sin^4(theta - 2 phi) sin(theta - phi) d theta over the
    window, evaluated as cos(phi) dF5 + sin(phi) dG5 with u = theta - 2 phi.
    Positive for any non-empty window inside the fan.
    """
    u1 = window.theta1 - 2.0 * phi
    u2 = window.theta2 - 2.0 * phi
    d_f5 = _sin5_primitive(u2) - _sin5_primitive(u1)
    d_g5 = _sin4cos_primitive(u2) - _sin4cos_primitive(u1)
    return math.cos(phi) * d_f5 + math.sin(phi) * d_g5


def inner_integral_x(window: AngleWindow, phi: float) -> float:
    """Closed form of the expulsion fan integral.

    integral of sin^4(theta - 2 phi) cos(theta - phi) d theta over the
    window, evaluated as cos(phi) dG5 - sin(phi) dF5.  Changes sign where
    the fan crosses theta = pi/2 + 2 phi; the full half-space fan at
    phi = 0 integrates to exactly zero.
    """
    u1 = window.theta1 - 2.0 * phi
    u2 = window.theta2 - 2.0 * phi
    d_f5 = _sin5_primitive(u2) - _sin5_primitive(u1)
    d_g5 = _sin4cos_primitive(u2) - _sin4cos_primitive(u1)
    return math.cos(phi) * d_g5 - math.sin(phi) * d_f5


def specific_pressures(
    spec: CavitySpec, r: float, constants: PhysicalConstants = CODATA
) -> PressureSample:
    """Local pressure components at ``r``: p = (K / s^4) times the fan integrals.

    p_z carries an explicit minus sign (compression pulls the wings
    together); p_x keeps the sign of its integral, negative wherever the
    fan is dominated by forward-leaning rays.
    """
    validate(spec)
    window = limit_angles(spec, r)
    s = s_factor(spec, r)
    scale = pressure_prefactor(spec, constants) / s**4
    return PressureSample(
        r=r,
        p_x=scale * inner_integral_x(window, spec.phi),
        p_z=-scale * inner_integral_z(window, spec.phi),
    )
