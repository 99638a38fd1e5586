"""Adaptive Gauss-Kronrod integration, fixed midpoint sums, pairwise reduction.

Panels use the 7-point Gauss / 15-point Kronrod pair; the difference between
the two rules gives the per-panel error estimate (sharpened by the usual
scaled-residual inflation so the estimate stays honest on rough panels).
Subdivision is global: the panel with the largest estimate splits until the
summed estimate meets max(rel_tol * |value|, abs_tol), a panel reaches
``max_depth`` halvings, or the panel list hits a safety cap.

Every accumulation that feeds a reported value runs through
:func:`pairwise_sum`, a fixed stride-pair tree, so identical inputs produce
bit-identical outputs regardless of chunking or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteSample, NotConverged

# 15-point Kronrod abscissae on [-1, 1] (positive half; x[7] = 0 is implicit)
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
)
# Kronrod weights, same order, last entry is the center weight
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
# embedded 7-point Gauss weights: nodes are _XGK[1], _XGK[3], _XGK[5] and 0
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value with its error estimate and cost accounting."""

    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    method: str = "gauss-kronrod-7-15"


def pairwise_sum(values, axis: int = -1):
    """Sum along ``axis`` with a fixed adjacent-pair tree.

    The tree pairs elements (0,1), (2,3), ... and carries an odd trailing
    element to the next round unchanged, so the reduction order depends only
    on the length, never on chunking.  Returns a float for 1-D input.
    """
    a = np.asarray(values, dtype=float)
    if a.shape[axis] == 0:
        out = np.zeros(a.sum(axis=axis).shape)
        return float(out) if out.ndim == 0 else out
    a = np.moveaxis(a, axis, -1)
    while a.shape[-1] > 1:
        n = a.shape[-1]
        m = 2 * (n // 2)
        paired = a[..., 0:m:2] + a[..., 1:m:2]
        if n % 2:
            paired = np.concatenate([paired, a[..., -1:]], axis=-1)
        a = paired
    out = a[..., 0]
    return float(out) if out.ndim == 0 else out


def _gk15(
    f: Callable[[float], float], lo: float, hi: float, count: list[int]
) -> tuple[float, float]:
    """One Gauss-Kronrod panel: returns (value, error estimate)."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)

    def sample(x: float) -> float:
        count[0] += 1
        v = float(f(x))
        if not math.isfinite(v):
            raise NonFiniteSample(x, v)
        return v

    fc = sample(center)
    resg = _WG[3] * fc
    resk = _WGK[7] * fc
    resabs = _WGK[7] * abs(fc)
    pairs = []
    for j in range(7):
        dx = half * _XGK[j]
        f1 = sample(center - dx)
        f2 = sample(center + dx)
        pairs.append((f1, f2))
        both = f1 + f2
        resk += _WGK[j] * both
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            resg += _WG[j // 2] * both
    mean = 0.5 * resk
    resasc = _WGK[7] * abs(fc - mean)
    for j in range(7):
        f1, f2 = pairs[j]
        resasc += _WGK[j] * (abs(f1 - mean) + abs(f2 - mean))
    value = resk * half
    resabs *= abs(half)
    resasc *= abs(half)
    err = abs((resk - resg) * half)
    if resasc != 0.0 and err != 0.0:
        # inflate towards resasc unless the rules genuinely agree
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * _EPS * resabs)
    return value, err


def integrate_adaptive(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-300,
    max_depth: int = 50,
    max_panels: int = 10_000,
) -> QuadratureResult:
    """Globally adaptive integral of ``f`` over [lo, hi].

    Convergence means the summed panel error estimate is at most
    max(rel_tol * |value|, abs_tol).  On failure raises
    :class:`NotConverged` carrying the best value, its estimate, and the
    evaluation count.  ``max_panels`` is a safety valve against integrands
    whose error estimates never shrink anywhere.
    """
    if not (hi >= lo):
        raise ValueError(f"integration bounds out of order: [{lo!r}, {hi!r}]")
    if not (rel_tol > 0.0):
        raise ValueError(f"rel_tol must be positive, got {rel_tol!r}")
    if not (abs_tol >= 0.0):
        raise ValueError(f"abs_tol must be non-negative, got {abs_tol!r}")
    if hi == lo:
        return QuadratureResult(0.0, 0.0, 0, True)

    count = [0]
    # panels stay sorted by left edge: (lo, hi, value, err, depth)
    panels = [(lo, hi, *_gk15(f, lo, hi, count), 0)]
    while True:
        total = pairwise_sum([p[2] for p in panels])
        total_err = pairwise_sum([p[3] for p in panels])
        if total_err <= max(rel_tol * abs(total), abs_tol):
            return QuadratureResult(total, total_err, count[0], True)
        worst = max(range(len(panels)), key=lambda i: (panels[i][3], -panels[i][0]))
        p_lo, p_hi, _, _, depth = panels[worst]
        if depth >= max_depth or len(panels) >= max_panels:
            raise NotConverged(total, total_err, count[0])
        mid = 0.5 * (p_lo + p_hi)
        left = (p_lo, mid, *_gk15(f, p_lo, mid, count), depth + 1)
        right = (mid, p_hi, *_gk15(f, mid, p_hi, count), depth + 1)
        panels[worst : worst + 1] = [left, right]


def integrate_fixed(f: Callable[[float], float], lo: float, hi: float, n: int) -> float:
    """Composite midpoint rule with ``n`` panels and pairwise accumulation.

    Second-order accurate for smooth integrands.  No error estimate; use
    :func:`integrate_adaptive` when one is needed.
    """
    if n < 1:
        raise ValueError(f"panel count must be at least 1, got {n!r}")
    if not (hi >= lo):
        raise ValueError(f"integration bounds out of order: [{lo!r}, {hi!r}]")
    h = (hi - lo) / n
    values = []
    for i in range(n):
        x = lo + (i + 0.5) * h
        v = float(f(x))
        if not math.isfinite(v):
            raise NonFiniteSample(x, v)
        values.append(v)
    return pairwise_sum(values) * h
