"""Trapezoid cavity geometry: wing coordinates, visibility windows, ray lengths.

The cavity is an open mirror shell built from two straight wings of length
``R`` that are tilted by ``+phi`` and ``-phi`` away from the x axis and
separated by a gap ``a`` at the narrow end.  In the (x, z) cross section the
upper wing runs from M0 = (0, 0) towards M1 = (R cos phi, R sin phi) and the
lower wing from M3 = (0, -a) towards M2 = (R cos phi, -R sin phi - a).

A point on the upper wing at arc coordinate ``r`` exchanges vacuum rays with
the lower wing through a fan of directions.  Directions are measured by the
angle ``theta`` taken from the upper-wing direction, so a ray leaving ``r``
under ``theta`` travels along (cos(phi - theta), sin(phi - theta)).  The fan
is bounded by the rays aimed at the two ends of the lower wing:

    cos theta1 = -(r + a sin phi - R cos 2 phi)
                 / hypot(a + (R + r) sin phi, (r - R) cos phi)
    cos theta2 = -(r + a sin phi) / sqrt(a^2 + r^2 + 2 a r sin phi)

Inside the fan the ray length back to the lower wing is

    b(r, theta) = s(r) / sin(theta - 2 phi),
    s(r) = sin(2 phi - theta2) (a + r sin phi) / sin(phi - theta2)
         = cos phi (a + 2 r sin phi),

so ``s`` is the single length scale of the fan at ``r``.  With ``phi``
restricted below pi/4 the window satisfies 2 phi < theta1 < theta2 <= pi and
every denominator above stays strictly positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    DegenerateFan,
    InvalidCavity,
    NumericDegeneracy,
    NumericDomain,
    OutOfRange,
)

#: Exclusive upper bound for the half-opening angle.
PHI_MAX = math.pi / 4

# arccos arguments may leave [-1, 1] by at most this much before it is a bug
_CLAMP_TOL = 1e-12
# sine denominators below this are treated as degenerate
_SIN_FLOOR = 1e-14


class Units(str, Enum):
    """Unit system a cavity is expressed in.

    SI: lengths in meters, pressures in pascal, forces in newton.
    REDUCED: lengths in units of the gap (so ``a`` must equal 1) and the
    pressure prefactor set to exactly 1; useful for testing because SI
    magnitudes at sub-micron gaps underflow eyeballs, not doubles.
    """

    SI = "si"
    REDUCED = "reduced"


@dataclass(frozen=True)
class CavitySpec:
    """Trapezoid cavity: gap ``a``, wing length ``R``, width ``L``, half-angle ``phi``.

    ``phi`` is in radians.  ``L`` is the extent along the translation axis;
    forces scale linearly with it.
    """

    a: float
    R: float
    L: float
    phi: float
    units: Units = Units.SI


@dataclass(frozen=True)
class AngleWindow:
    """Limit angles of a visible fan, ``0 <= theta1 < theta2 <= pi``."""

    theta1: float
    theta2: float

    @property
    def width(self) -> float:
        return self.theta2 - self.theta1


@dataclass(frozen=True)
class WingPoint:
    """Point on the upper wing: arc coordinate ``r`` and Cartesian (x, z)."""

    r: float
    x: float
    z: float


def validate(spec: CavitySpec) -> None:
    """Raise :class:`InvalidCavity` unless every cavity invariant holds.

    The closed triangle (a = 0) is rejected because the ray pressure
    diverges at the apex; ``phi`` is capped below pi/4 so the visible fan
    cannot fold onto the wing itself.
    """
    if not isinstance(spec.units, Units):
        raise InvalidCavity("units", f"expected a Units member, got {spec.units!r}")
    if not (math.isfinite(spec.a) and spec.a > 0.0):
        raise InvalidCavity("a", "gap must be positive and finite (a = 0 closes the cavity)")
    if not (math.isfinite(spec.R) and spec.R > 0.0):
        raise InvalidCavity("R", "wing length must be positive and finite")
    if not (math.isfinite(spec.L) and spec.L > 0.0):
        raise InvalidCavity("L", "cavity width must be positive and finite")
    if not (math.isfinite(spec.phi) and 0.0 <= spec.phi < PHI_MAX):
        raise InvalidCavity("phi", f"half-angle must lie in [0, pi/4), got {spec.phi!r}")
    if spec.units is Units.REDUCED and spec.a != 1.0:
        raise InvalidCavity("a", "reduced units fix the gap at a = 1")


def _check_r(spec: CavitySpec, r: float) -> None:
    if not (0.0 <= r <= spec.R):
        raise OutOfRange("r", r, 0.0, spec.R)


def wing_point(spec: CavitySpec, r: float) -> WingPoint:
    """Cartesian coordinates (r cos phi, r sin phi) of the upper-wing point."""
    _check_r(spec, r)
    return WingPoint(r=r, x=r * math.cos(spec.phi), z=r * math.sin(spec.phi))


def limit_angle_cosines(spec: CavitySpec, r: float) -> tuple[float, float]:
    """Raw cosines of the two limit angles, before clamping.

    cos theta1 aims the ray at the far end of the lower wing, cos theta2 at
    the near end.  Exposed separately so the arccos domain can be audited.
    """
    _check_r(spec, r)
    a, R, phi = spec.a, spec.R, spec.phi
    sphi = math.sin(phi)
    c1 = -(r + a * sphi - R * math.cos(2.0 * phi)) / math.hypot(
        a + (R + r) * sphi, (r - R) * math.cos(phi)
    )
    c2 = -(r + a * sphi) / math.sqrt(a * a + r * r + 2.0 * a * r * sphi)
    return c1, c2


def _acos_clamped(c: float) -> float:
    # roundoff can push |c| a hair past 1; anything further is a real bug
    if c > 1.0 or c < -1.0:
        if abs(c) - 1.0 > _CLAMP_TOL:
            raise NumericDomain(f"arccos argument {c!r} exceeds [-1, 1] beyond roundoff")
        c = 1.0 if c > 0.0 else -1.0
    return math.acos(c)


def limit_angles(spec: CavitySpec, r: float) -> AngleWindow:
    """Visibility window (theta1, theta2) for the upper-wing point at ``r``.

    theta1 aims at the far corner M2: it stays above 2 phi (where the ray
    would run parallel to the lower wing) and climbs to pi/2 + phi at
    r = R.  theta2 aims at the near corner M3: it starts at exactly
    pi/2 + phi at r = 0 and climbs towards pi as r/a grows.
    """
    c1, c2 = limit_angle_cosines(spec, r)
    theta1 = _acos_clamped(c1)
    theta2 = _acos_clamped(c2)
    if theta1 >= theta2:
        raise DegenerateFan(
            f"visible fan collapsed at r={r!r}: theta1={theta1!r} >= theta2={theta2!r}"
        )
    return AngleWindow(theta1=theta1, theta2=theta2)


def s_factor(spec: CavitySpec, r: float) -> float:
    """Length scale s(r) of the fan, the numerator of every ray length.

    s = sin(2 phi - theta2) (a + r sin phi) / sin(phi - theta2).  At phi = 0
    the two sines cancel and s reduces to the gap ``a`` exactly, so that
    case is short-circuited instead of evaluated as fragile trig.
    """
    _check_r(spec, r)
    if spec.phi == 0.0:
        return spec.a
    _, c2 = limit_angle_cosines(spec, r)
    theta2 = _acos_clamped(c2)
    denom = math.sin(spec.phi - theta2)
    if abs(denom) <= _SIN_FLOOR:
        raise NumericDegeneracy(
            f"sin(phi - theta2) vanished at r={r!r} (phi={spec.phi!r}, theta2={theta2!r})"
        )
    return math.sin(2.0 * spec.phi - theta2) * (spec.a + r * math.sin(spec.phi)) / denom


def ray_length(spec: CavitySpec, r: float, theta: float) -> float:
    """Distance b from the wing point at ``r`` to the lower wing along ``theta``.

    b = s(r) / sin(theta - 2 phi).  Only directions inside the visible fan
    are meaningful; there theta - 2 phi lies in (0, pi) and the sine is
    positive.  Directions outside the fan drive the sine to zero or below
    and raise :class:`NumericDegeneracy`.
    """
    s = s_factor(spec, r)
    denom = math.sin(theta - 2.0 * spec.phi)
    if denom <= _SIN_FLOOR:
        raise NumericDegeneracy(
            f"sin(theta - 2 phi) not positive at theta={theta!r} (phi={spec.phi!r})"
        )
    return s / denom
