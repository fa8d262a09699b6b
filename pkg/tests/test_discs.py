import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bishop_discs.discs import (
    build_disc,
    cauchy_riemann_defect,
    default_tolerance,
    derivative_interior,
    evaluate_interior,
    flat_disc,
    flat_trace,
    grid_deviation,
    stability_sweep,
)
from bishop_discs.errors import HolomorphyFailure, InvalidInput, NotLocalized, OutOfDomain
from bishop_discs.manifolds import CutoffGraph, DilationFamily, c1profile, choose_tau_delta, flat, quadratic
from bishop_discs.solver import DiscParameters, ParameterGrid, solve
from bishop_discs.spectral import CircleFunction, negative_frequency_residual


def test_default_tolerance():
    assert default_tolerance() == 1e-8
    assert default_tolerance(1e-6, 1.0) == pytest.approx(2e-4)


# -- build_disc -------------------------------------------------------------


def test_constant_disc_is_point_of_edge(collar256, quad_cut256):
    c = 0.01
    disc = build_disc(solve(quad_cut256, collar256, DiscParameters([c], [0.0])), quad_cut256, collar256)
    assert disc.is_constant()
    z = np.array([0.0, 0.5j, -0.3 + 0.2j])
    assert np.allclose(disc(z)[:, 0], c + 1j * c ** 2, atol=1e-16)
    assert disc.attach_residual == 0.0


def test_flat_bishop_disc_residuals(collar512):
    g = CutoffGraph(flat(1), 1.0, 0.1)
    for c, t in [(0.0, 0.001), (0.01, 0.002), (-0.01, 0.0015)]:
        disc = build_disc(solve(g, collar512, DiscParameters([c], [t])), g, collar512)
        assert disc.attach_residual <= 1e-10
        assert disc.holo_residual <= 1e-10
        ref = flat_trace(DiscParameters([c], [t]), collar512).values
        assert np.max(np.abs(disc.trace.values - ref)) < 1e-15


def test_quadratic_disc_residuals_at_512(collar512, quad_cut512):
    for c, t in [(0.01, 0.02), (-0.01, 0.01), (0.0, 0.005)]:
        disc = build_disc(solve(quad_cut512, collar512, DiscParameters([c], [t])), quad_cut512, collar512)
        assert disc.attach_residual <= 1e-8
        assert disc.holo_residual <= 1e-8


def test_build_disc_not_localized(collar256, quad_cut256):
    sol = solve(quad_cut256, collar256, DiscParameters([2 * quad_cut256.delta], [0.0]))
    with pytest.raises(NotLocalized):
        build_disc(sol, quad_cut256, collar256)


def test_build_disc_holomorphy_failure(collar256, quad_cut256):
    sol = solve(quad_cut256, collar256, DiscParameters([0.01], [0.02]))
    with pytest.raises(HolomorphyFailure):
        build_disc(sol, quad_cut256, collar256, tol_holo=1e-14)


def test_build_disc_holder_norms_and_export(collar256, quad_cut256):
    sol = solve(quad_cut256, collar256, DiscParameters([0.01], [0.005]))
    disc = build_disc(sol, quad_cut256, collar256, alphas=(0.5, 0.9))
    assert set(disc.holder_norms) == {0.5, 0.9}
    d = disc.as_dict()
    assert d["N"] == 256 and d["kind"] == "bishop"
    assert len(d["trace"]["re"]) == 1 and len(d["trace"]["re"][0]) == 256
    assert "trace" not in disc.as_dict(include_trace=False)


def test_c1profile_disc_residuals(grid512, collar512):
    g = choose_tau_delta(c1profile(0.5, [1.0], 1), 0.5, grid512.hilbert_sup_norm)
    sol = solve(g, collar512, DiscParameters([0.3 * g.delta], [0.3 * g.delta]))
    disc = build_disc(sol, g, collar512)
    assert disc.attach_residual <= 1e-8 and disc.holo_residual <= 1e-8


# -- flat discs -------------------------------------------------------------


def test_flat_disc_t0_constant(collar256):
    disc = flat_disc(DiscParameters([0.4, -0.2], [0.0, 0.0]), build_collar2(collar256))
    assert disc.is_constant()
    assert np.allclose(disc(0.3j), [0.4, -0.2])


def build_collar2(collar):
    from bishop_discs.manifolds import build_collar

    return build_collar(collar.grid, 2)


def test_flat_disc_conformal_collar_map(collar512):
    # at t = 1 the collar aliasing residual (~3.3e-8 at N = 512) sets the tolerance
    disc = flat_disc(DiscParameters([0.0], [1.0]), collar512, tol_holo=1e-7)
    expected = -collar512.scalar_conjugate + 1j * collar512.psi.values[:, 0]
    assert np.max(np.abs(disc.trace.values[:, 0] - expected)) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.floats(-1, 1), st.floats(0, 1))
def test_flat_disc_linear_in_t(c, t):
    from bishop_discs.manifolds import build_collar
    from bishop_discs.spectral import CircleGrid

    collar = build_collar(CircleGrid(64))
    a = flat_trace(DiscParameters([c], [t]), collar).values - c
    b = flat_trace(DiscParameters([c], [2 * t]), collar).values - c
    assert np.max(np.abs(b - 2 * a)) <= 1e-14 * (1 + abs(c))


def test_flat_sign_structure(grid256, collar256):
    disc = flat_disc(DiscParameters([0.1], [0.002]), collar256)
    im = disc.trace.values[:, 0].imag
    assert np.all(im[grid256.upper] == 0.0)
    # interior lower-semicircle nodes (exclude the two endpoints theta = 0, pi)
    lower = grid256.lower & ~np.isin(np.arange(256), [0, 128])
    assert np.all(im[lower] < 0.0)
    assert np.all(im <= 0.0)


def test_flat_holo_residual_default_tolerance(collar512):
    disc = flat_disc(DiscParameters([0.05], [0.05]), collar512)
    assert disc.holo_residual <= default_tolerance()
    assert disc.attach_residual == 0.0


# -- interior evaluation ----------------------------------------------------


def test_evaluate_interior_flat_at_origin(collar256):
    c, t = 0.2, 0.003
    disc = flat_disc(DiscParameters([c], [t]), collar256)
    mean_psi = collar256.psi.values[:, 0].mean()
    assert abs(disc(0.0)[0] - (c + 1j * t * mean_psi)) < 1e-15


def test_evaluate_interior_out_of_domain(collar256):
    disc = flat_disc(DiscParameters([0.0], [0.001]), collar256)
    with pytest.raises(OutOfDomain):
        evaluate_interior(disc, 1.0)
    with pytest.raises(OutOfDomain):
        evaluate_interior(disc, np.array([0.0, 1.5j]))


def test_evaluate_interior_shape(collar256):
    from bishop_discs.manifolds import build_collar

    disc = flat_disc(DiscParameters([0.0, 0.1], [0.001, 0.002]), build_collar(collar256.grid, 2))
    assert evaluate_interior(disc, np.zeros((3, 4))).shape == (3, 4, 2)


def test_radial_limit(collar512):
    disc = flat_disc(DiscParameters([0.0], [0.1]), collar512)
    k = 64
    theta0 = collar512.grid.theta[k]
    errs = []
    for s in (1e-1, 1e-2, 1e-3):
        val = evaluate_interior(disc, (1 - s) * np.exp(1j * theta0))[0]
        errs.append(abs(val - disc.trace.values[k, 0]))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_cauchy_riemann_defect(collar256, quad_cut256):
    disc = build_disc(solve(quad_cut256, collar256, DiscParameters([0.01], [0.005])), quad_cut256, collar256)
    assert cauchy_riemann_defect(disc) < 1e-8


def test_derivative_interior_matches_difference(collar256):
    disc = flat_disc(DiscParameters([0.0], [0.002]), collar256)
    z, h = 0.3 + 0.2j, 1e-6
    fd = (evaluate_interior(disc, z + h) - evaluate_interior(disc, z - h)) / (2 * h)
    assert np.allclose(derivative_interior(disc, z), fd, atol=1e-8)


def test_non_holomorphic_trace_is_detected(grid256):
    # conj(zeta) has only a negative frequency
    v = CircleFunction(grid256, np.exp(-1j * grid256.theta))
    assert negative_frequency_residual(v) == pytest.approx(1.0)


# -- stability sweep --------------------------------------------------------


def test_stability_d0_is_zero(collar256):
    sw = stability_sweep(DilationFamily(quadratic()), DiscParameters([0.005], [0.004]), [0.0], 2.0, collar256)
    assert sw.deviations == [0.0]


def test_stability_quadratic_linear_decay(collar512):
    ds = [0.5, 0.25, 0.125, 0.0625]
    sw = stability_sweep(DilationFamily(quadratic()), DiscParameters([0.01], [0.01]), ds, 2.0, collar512)
    assert sw.is_decreasing()
    assert sw.deviations[-1] <= 1e-3
    assert sw.decay_slope() >= 0.9
    lc = sw.linear_constant()
    assert max(lc) / min(lc) < 1.1
    cprime = sw.c1_constant()
    for dev, c1 in zip(sw.deviations, sw.c1_norms):
        assert dev <= cprime * c1 * (1 + 1e-12)
    assert sw.as_dict()["decreasing"] is True


def test_stability_rejects_p_le_1(collar256):
    with pytest.raises(InvalidInput):
        stability_sweep(DilationFamily(quadratic()), DiscParameters([0.0], [0.01]), [0.5], 1.0, collar256)


def test_grid_deviation_decreases(collar256):
    pts = ParameterGrid([-0.005], [0.005], [0.0], [0.005], (2, 2)).points()
    fam = DilationFamily(quadratic())
    vals = [grid_deviation(fam, pts, d, 2.0, collar256) for d in (0.5, 0.25, 0.125)]
    assert vals[0] > vals[1] > vals[2] > 0
    assert grid_deviation(fam, pts, 0.0, 2.0, collar256) == 0.0


def test_continuity_in_parameters(collar256, quad_cut256):
    base = build_disc(solve(quad_cut256, collar256, DiscParameters([0.01], [0.004])), quad_cut256, collar256)
    diffs = []
    for eps in (1e-3, 1e-4, 1e-5):
        d = build_disc(solve(quad_cut256, collar256, DiscParameters([0.01 + eps], [0.004 + eps])),
                       quad_cut256, collar256)
        diffs.append((d.trace - base.trace).sup())
    assert diffs[0] > diffs[1] > diffs[2]
    assert diffs[2] < 1e-4
