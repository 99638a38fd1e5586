import math
from dataclasses import replace

import pytest

from trapcav import (
    CavitySpec,
    ForceResult,
    InvalidCavity,
    NoInteriorMaximum,
    NumericDegeneracy,
    SweepAxis,
    Units,
    optimize_phi,
    rescale_report,
    sweep,
    total_forces,
)
import trapcav.analysis

REDUCED = CavitySpec(a=1.0, R=10.0, L=1.0, phi=0.0, units=Units.REDUCED)
SI_THIN = CavitySpec(a=4e-7, R=4e-6, L=1.0, phi=math.radians(1.0))

PHI_GRID_DEG = [0.5, 1.0, 2.0, 4.0, 8.0, 12.0, 20.0, 30.0, 40.0]

# |f_x| for a = 400 nm, phi = 1 deg, L = 1 m at R = 1, 2, 4, 8 um
FX_BY_R = [1.196e-10, 2.701e-10, 4.694e-10, 6.626e-10]


def test_sweep_over_angle_rises_then_falls():
    values = [math.radians(d) for d in PHI_GRID_DEG]
    table = sweep(REDUCED, SweepAxis.PHI, values)
    assert table.axis is SweepAxis.PHI
    assert [p for p, _ in table.points] == values
    mags = [abs(fr.f_x) for _, fr in table.points]
    peak = mags.index(max(mags))
    assert 0 < peak < len(mags) - 1
    assert all(b > a for a, b in zip(mags[: peak + 1], mags[1 : peak + 1]))
    assert all(b < a for a, b in zip(mags[peak:], mags[peak + 1 :]))
    assert all(fr.converged for _, fr in table.points)


def test_sweep_single_parallel_plate_row():
    table = sweep(REDUCED, SweepAxis.PHI, [0.0])
    ((param, fr),) = table.points
    assert param == 0.0
    assert abs(fr.f_x) <= 1e-10 * abs(fr.f_z)


def test_sweep_over_radius_grows_expulsion():
    values = [1e-6, 2e-6, 4e-6, 8e-6]
    table = sweep(SI_THIN, SweepAxis.R, values)
    mags = [abs(fr.f_x) for _, fr in table.points]
    assert all(b > a for a, b in zip(mags, mags[1:]))
    for got, expect in zip(mags, FX_BY_R):
        assert math.isclose(got, expect, rel_tol=1e-3)
    assert all(fr.f_x < 0.0 for _, fr in table.points)


def test_sweep_worker_count_cannot_change_results():
    values = [math.radians(d) for d in (0.5, 1.0, 2.0, 4.0, 8.0, 12.0)]
    serial = sweep(REDUCED, SweepAxis.PHI, values, workers=1)
    threaded = sweep(REDUCED, SweepAxis.PHI, values, workers=8)
    for (_, a), (_, b) in zip(serial.points, threaded.points):
        assert (a.f_x, a.f_z, a.err_x, a.err_z) == (b.f_x, b.f_z, b.err_x, b.err_z)


def test_sweep_rows_are_independent():
    values = [math.radians(d) for d in (0.5, 1.0, 2.0, 4.0)]
    full = sweep(REDUCED, SweepAxis.PHI, values)
    part = sweep(REDUCED, SweepAxis.PHI, [values[1], values[3]])
    assert part.points[0][1].f_x == full.points[1][1].f_x
    assert part.points[1][1].f_z == full.points[3][1].f_z


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        sweep(REDUCED, SweepAxis.PHI, [0.2, 0.1])
    with pytest.raises(ValueError):
        sweep(REDUCED, SweepAxis.PHI, [0.1, 0.1])
    with pytest.raises(ValueError):
        sweep(REDUCED, SweepAxis.PHI, [0.1], workers=0)
    with pytest.raises(InvalidCavity):
        sweep(REDUCED, SweepAxis.R, [-1.0, 1.0])
    with pytest.raises(InvalidCavity):
        # reduced units pin a = 1, so an R sweep keeps working but a
        # phi value outside [0, pi/4) must be rejected up front
        sweep(REDUCED, SweepAxis.PHI, [0.1, 1.0])


def test_sweep_flags_failed_rows(monkeypatch):
    real = total_forces
    bad_phi = math.radians(2.0)

    def flaky(spec, rel_tol=1e-9, **kwargs):
        if spec.phi == bad_phi:
            raise NumericDegeneracy("synthetic row failure")
        return real(spec, rel_tol, **kwargs)

    monkeypatch.setattr(trapcav.analysis, "total_forces", flaky)
    values = [math.radians(d) for d in (1.0, 2.0, 3.0)]
    table = sweep(REDUCED, SweepAxis.PHI, values)
    good1, bad, good2 = (fr for _, fr in table.points)
    assert good1.converged and good2.converged
    assert not bad.converged
    assert math.isnan(bad.f_x) and math.isnan(bad.f_z)
    assert math.isinf(bad.err_x) and math.isinf(bad.err_z)


def test_optimize_locates_interior_maximum():
    report = optimize_phi(REDUCED, 0.01, math.pi / 4 - 0.02)
    star = report.phi_star
    assert 0.01 < star < math.pi / 4 - 0.02
    assert math.isclose(star, 0.0633, abs_tol=2e-3)
    assert report.f_x_star < 0.0
    assert report.iterations > 0
    assert len(report.grid_prescan) == 32
    assert report.bracket[0] < star < report.bracket[1]

    def mag(phi):
        return abs(total_forces(replace(REDUCED, phi=phi)).f_x)

    assert abs(report.f_x_star) > mag(star / 2)
    assert abs(report.f_x_star) > mag(1.5 * star)


def test_optimize_agrees_with_dense_grid():
    report = optimize_phi(REDUCED, 0.01, math.pi / 4 - 0.02, tol=1e-5)
    lo, hi, n = 0.01, math.pi / 4 - 0.02, 1024
    step = (hi - lo) / (n - 1)
    best, best_mag = lo, -1.0
    for k in range(n):
        phi = lo + k * step
        mag = abs(total_forces(replace(REDUCED, phi=phi), rel_tol=1e-7).f_x)
        if mag > best_mag:
            best, best_mag = phi, mag
    assert abs(report.phi_star - best) <= 2 * step


def test_optimize_halving_tol_is_stable():
    coarse = optimize_phi(REDUCED, 0.02, 0.5, tol=2e-5)
    fine = optimize_phi(REDUCED, 0.02, 0.5, tol=1e-5)
    assert abs(coarse.phi_star - fine.phi_star) <= 3e-5
    assert fine.iterations > coarse.iterations


def test_optimize_rejects_edge_maximum():
    # both windows sit entirely on the falling flank of |f_x|
    with pytest.raises(NoInteriorMaximum):
        optimize_phi(REDUCED, 0.3, 0.7)
    with pytest.raises(NoInteriorMaximum):
        optimize_phi(REDUCED, 0.7, 0.75)


def test_optimize_rejects_flat_and_multimodal_objectives(monkeypatch):
    def fake_forces(kind):
        def inner(spec, rel_tol=1e-9, **kwargs):
            phi = spec.phi
            f_x = 1.0 if kind == "flat" else math.sin(40.0 * phi)
            return ForceResult(
                spec=spec, f_x=f_x, f_z=-1.0, err_x=0.0, err_z=0.0
            )

        return inner

    monkeypatch.setattr(trapcav.analysis, "total_forces", fake_forces("flat"))
    with pytest.raises(NoInteriorMaximum):
        optimize_phi(REDUCED, 0.05, 0.7)
    monkeypatch.setattr(trapcav.analysis, "total_forces", fake_forces("wavy"))
    with pytest.raises(NoInteriorMaximum):
        optimize_phi(REDUCED, 0.05, 0.7)


@pytest.mark.parametrize(
    "lo,hi,tol",
    [
        (0.0, 0.5, 1e-5),
        (-0.1, 0.5, 1e-5),
        (0.5, 0.1, 1e-5),
        (0.1, math.pi / 4, 1e-5),
        (0.1, 0.5, 1e-7),
    ],
)
def test_optimize_rejects_bad_windows(lo, hi, tol):
    with pytest.raises(ValueError):
        optimize_phi(REDUCED, lo, hi, tol=tol)


def test_optimize_validates_base_spec():
    with pytest.raises(InvalidCavity):
        optimize_phi(CavitySpec(a=-1.0, R=1.0, L=1.0, phi=0.0), 0.05, 0.5)


def test_rescale_identity():
    report = rescale_report(SI_THIN, 1.0)
    assert report.force_ratio_z == 1.0
    assert report.pressure_ratio_z == 1.0
    assert report.max_rel_deviation == 0.0


@pytest.mark.parametrize("lam", [2.0, 10.0])
def test_rescale_follows_dimensional_analysis(lam):
    report = rescale_report(SI_THIN, lam)
    assert math.isclose(report.force_ratio_z, lam**-3, rel_tol=1e-12)
    assert math.isclose(report.force_ratio_x, lam**-3, rel_tol=1e-9)
    assert math.isclose(report.pressure_ratio_z, lam**-4, rel_tol=1e-12)
    assert math.isclose(report.pressure_ratio_x, lam**-4, rel_tol=1e-9)
    assert report.max_rel_deviation < 1e-9
    assert report.expected_force_ratio == lam**-3
    assert report.expected_pressure_ratio == lam**-4


def test_rescale_parallel_plates_excludes_vanishing_force():
    # the x force is cancellation noise at phi = 0 and must be excluded;
    # the x pressure at r = R/3 is a genuine value and must not be
    for lam in (2.0, 10.0):
        report = rescale_report(replace(SI_THIN, phi=0.0), lam)
        assert math.isnan(report.force_ratio_x)
        assert math.isclose(report.pressure_ratio_x, lam**-4, rel_tol=1e-9)
        assert math.isclose(report.force_ratio_z, lam**-3, rel_tol=1e-10)
        assert report.max_rel_deviation < 1e-9


def test_rescale_accepts_reduced_input():
    reduced = replace(REDUCED, phi=math.radians(2.0))
    report = rescale_report(reduced, 2.0)
    assert math.isclose(report.force_ratio_x, 0.125, rel_tol=1e-9)


@pytest.mark.parametrize("lam", [0.0, -2.0, math.inf, math.nan])
def test_rescale_rejects_bad_scale(lam):
    with pytest.raises(ValueError):
        rescale_report(SI_THIN, lam)
