import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bishop_discs.errors import InvalidInput, OutOfDomain
from bishop_discs.spectral import (
    CircleFunction,
    CircleGrid,
    FourierCoeffs,
    fourier_analyze,
    fourier_synthesize,
    hilbert_transform,
    hilbert_values,
    holder_norm,
    holder_seminorm,
    lp_norm,
    negative_frequency_residual,
    poisson_extend,
    sobolev_norm,
    spectral_derivative,
)

from conftest import cot_kernel_matrix


def _trig_poly(grid, coeffs_pos, mean=0.0):
    """Real trigonometric polynomial with given complex coefficients for k = 1..m."""
    th = grid.theta
    out = np.full(grid.N, mean, dtype=float)
    for k, a in enumerate(coeffs_pos, start=1):
        out += 2 * (a * np.exp(1j * k * th)).real
    return out


# -- grid -----------------------------------------------------------------


@pytest.mark.parametrize("N", [0, 6, 7, 9, 101])
def test_grid_rejects_bad_sizes(N):
    with pytest.raises(InvalidInput):
        CircleGrid(N)


def test_grid_semicircle_masks(grid256):
    th = grid256.theta
    assert th[grid256.upper].max() == pytest.approx(np.pi)
    assert np.all(th[grid256.lower] > np.pi)
    assert grid256.upper.sum() == 129


def test_circle_function_rejects_non_finite(grid256):
    v = np.zeros(256)
    v[3] = np.nan
    with pytest.raises(InvalidInput):
        CircleFunction(grid256, v)
    with pytest.raises(InvalidInput):
        CircleFunction(grid256, np.zeros(255))


# -- Fourier --------------------------------------------------------------


def test_fourier_of_constant(grid256):
    c = fourier_analyze(CircleFunction(grid256, np.ones(256)))
    assert c[0][0] == pytest.approx(1.0)
    rest = np.delete(c.coeffs[:, 0], 0)
    assert np.max(np.abs(rest)) < 1e-15


def test_fourier_of_cosine(grid256):
    c = fourier_analyze(CircleFunction.from_callable(grid256, np.cos))
    assert c[1][0] == pytest.approx(0.5, abs=1e-15)
    assert c[-1][0] == pytest.approx(0.5, abs=1e-15)
    mask = np.ones(256, bool)
    mask[[1, 255]] = False
    assert np.max(np.abs(c.coeffs[mask])) < 1e-15


def test_fourier_random_trig_poly_matches_direct_dft(grid256):
    rng = np.random.default_rng(1)
    m = 64
    a = rng.normal(size=m) + 1j * rng.normal(size=m)
    f = CircleFunction(grid256, _trig_poly(grid256, a))
    c = fourier_analyze(f)
    # direct summation DFT oracle
    th = grid256.theta
    direct = np.array([np.mean(f.values[:, 0] * np.exp(-1j * k * th)) for k in range(1, m + 1)])
    assert np.max(np.abs(c.coeffs[1:m + 1, 0] - a)) < 1e-12
    assert np.max(np.abs(direct - a)) < 1e-12


def test_fourier_index_out_of_range(grid256):
    c = fourier_analyze(CircleFunction(grid256, np.ones(256)))
    with pytest.raises(InvalidInput):
        c[128]
    assert c[-128].shape == (1,)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=3))
def test_fourier_round_trip(seed, n):
    grid = CircleGrid(64)
    v = np.random.default_rng(seed).normal(size=(64, n))
    f = CircleFunction(grid, v)
    back = fourier_synthesize(fourier_analyze(f))
    assert back.is_real
    assert np.max(np.abs(back.values - v)) <= 1e-12 * max(1.0, np.max(np.abs(v)))


def test_real_input_has_conjugate_symmetric_coefficients(grid256):
    v = np.random.default_rng(3).normal(size=256)
    c = fourier_analyze(CircleFunction(grid256, v))
    for k in range(1, 128):
        assert abs(c[k][0] - np.conj(c[-k][0])) < 1e-14


# -- Hilbert transform ----------------------------------------------------


def test_hilbert_of_constant_is_zero(grid256):
    assert hilbert_transform(CircleFunction(grid256, 3 * np.ones(256))).sup() < 1e-15


@pytest.mark.parametrize("k", [1, 2, 17, 64, 127])
def test_hilbert_conjugate_pairs(grid256, k):
    th = grid256.theta
    tc = hilbert_transform(CircleFunction(grid256, np.cos(k * th))).values[:, 0]
    ts = hilbert_transform(CircleFunction(grid256, np.sin(k * th))).values[:, 0]
    assert np.max(np.abs(tc - np.sin(k * th))) < 1e-12
    assert np.max(np.abs(ts + np.cos(k * th))) < 1e-12


def test_hilbert_squared_on_cosine(grid256):
    f = CircleFunction.from_callable(grid256, np.cos)
    assert np.max(np.abs(hilbert_transform(hilbert_transform(f)).values + f.values)) < 1e-14


def test_hilbert_rejects_complex(grid256):
    with pytest.raises(InvalidInput):
        hilbert_transform(CircleFunction(grid256, np.exp(1j * grid256.theta)))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_hilbert_linear_zero_mean_and_involutive(seed):
    grid = CircleGrid(128)
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(128, 2))
    b = rng.normal(size=(128, 2))
    s, t = rng.normal(size=2)
    Ta, Tb = hilbert_values(a, grid), hilbert_values(b, grid)
    assert np.allclose(hilbert_values(s * a + t * b, grid), s * Ta + t * Tb, atol=1e-12)
    assert np.max(np.abs(Ta.mean(axis=0))) < 1e-13
    # T^2 = -Id on zero-mean data without a Nyquist component
    coeffs = np.fft.fft(a, axis=0)
    coeffs[0] = 0
    coeffs[64] = 0
    z = np.fft.ifft(coeffs, axis=0).real
    assert np.max(np.abs(hilbert_values(hilbert_values(z, grid), grid) + z)) < 1e-12


def test_hilbert_matches_cot_kernel_on_small_grid():
    grid = CircleGrid(32)
    K = cot_kernel_matrix(32)
    v = np.random.default_rng(5).normal(size=32)
    assert np.max(np.abs(K @ v - hilbert_values(v[:, None], grid)[:, 0])) < 1e-13


def test_hilbert_sup_norm_is_kernel_l1_norm(grid256):
    # frozen value; also equal to the max absolute row sum of the cot matrix
    assert grid256.hilbert_sup_norm == pytest.approx(3.6101606807, abs=1e-9)
    K = cot_kernel_matrix(256)
    assert np.abs(K).sum(axis=1).max() == pytest.approx(grid256.hilbert_sup_norm, rel=1e-12)
    # attained by the sign pattern of the kernel
    v = np.sign(K[0])
    assert abs(hilbert_values(v[:, None], grid256)[0, 0]) == pytest.approx(grid256.hilbert_sup_norm)


# -- Poisson extension ----------------------------------------------------


def test_poisson_of_constant(grid256):
    f = CircleFunction(grid256, np.full((256, 2), [1.5, -2.0]))
    z = np.array([0.0, 0.3 + 0.4j, -0.9j])
    assert np.allclose(poisson_extend(f, z), [1.5, -2.0], atol=1e-14)


@pytest.mark.parametrize("k", [0, 1, 5, 100])
def test_poisson_of_positive_exponential(grid256, k):
    f = CircleFunction(grid256, np.exp(1j * k * grid256.theta))
    z = np.array([0.2, 0.5j, -0.7 + 0.1j])
    assert np.max(np.abs(poisson_extend(f, z)[:, 0] - z ** k)) < 1e-13


def test_poisson_of_cosine_at_origin(grid256):
    f = CircleFunction.from_callable(grid256, np.cos)
    assert abs(poisson_extend(f, 0.0)[0]) < 1e-15


def test_poisson_scalar_shape(grid256):
    f = CircleFunction(grid256, np.ones((256, 3)))
    assert poisson_extend(f, 0.1).shape == (3,)
    assert poisson_extend(f, np.zeros((4, 5))).shape == (4, 5, 3)


@pytest.mark.parametrize("z", [1.0, 1j, 0.6 + 0.8j, 2.0])
def test_poisson_out_of_domain(grid256, z):
    with pytest.raises(OutOfDomain):
        poisson_extend(CircleFunction(grid256, np.ones(256)), z)


def test_poisson_of_harmonic_pair_is_real_at_origin(grid256):
    v = _trig_poly(grid256, np.random.default_rng(2).normal(size=20))
    f = CircleFunction(grid256, v + 1j * hilbert_values(v[:, None], grid256)[:, 0])
    assert abs(poisson_extend(f, 0.0)[0].imag) < 1e-15


def test_poisson_real_part_harmonic_extension(grid256):
    # Re z^k is the harmonic extension of cos k theta
    th = grid256.theta
    f = CircleFunction(grid256, np.cos(3 * th))
    z = 0.5 * np.exp(1j * np.linspace(0, 2 * np.pi, 9))
    assert np.max(np.abs(poisson_extend(f, z)[:, 0] - (z ** 3).real)) < 1e-14


# -- holomorphy residual --------------------------------------------------


def test_negative_frequency_residual_examples(grid256):
    th = grid256.theta
    assert negative_frequency_residual(CircleFunction(grid256, np.exp(1j * th))) < 1e-15
    assert negative_frequency_residual(CircleFunction(grid256, np.exp(-1j * th))) == pytest.approx(1.0)
    v = _trig_poly(grid256, np.random.default_rng(4).normal(size=40))
    u = v - v.mean()
    f = CircleFunction(grid256, u + 1j * hilbert_values(u[:, None], grid256)[:, 0])
    assert negative_frequency_residual(f) <= 1e-12


# -- norms ----------------------------------------------------------------


def test_holder_of_constant(grid256):
    assert holder_norm(CircleFunction(grid256, 5 * np.ones(256)), 0.5) == pytest.approx(5.0)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5, 1.5])
def test_holder_rejects_bad_alpha(grid256, alpha):
    with pytest.raises(InvalidInput):
        holder_norm(CircleFunction(grid256, np.ones(256)), alpha)


def test_holder_cosine_near_lipschitz_limit():
    grid = CircleGrid(4096)
    f = CircleFunction.from_callable(grid, np.cos)
    s = holder_seminorm(f, 0.999)
    assert 0.99 < s <= 1.0 + 1e-2


def test_holder_single_spike(grid256):
    v = np.zeros(256)
    v[10] = 1.0
    s = holder_seminorm(CircleFunction(grid256, v), 0.5)
    assert s == pytest.approx((2 * np.sin(np.pi / 256)) ** -0.5, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.9), st.floats(min_value=0.01, max_value=0.09),
       st.integers(min_value=4, max_value=20))
def test_holder_seminorm_monotone_in_alpha_for_short_extremal_chords(a, da, k):
    # the extremal pair of cos(k theta), k >= 4, has chord 2 sin(pi / 2k) < 1,
    # where chord^-alpha grows with alpha
    grid = CircleGrid(128)
    g = CircleFunction(grid, np.cos(k * grid.theta))
    assert holder_seminorm(g, a) <= holder_seminorm(g, a + da) + 1e-12


def test_holder_seminorm_can_decrease_in_alpha_for_long_chords(grid256):
    # cos theta: the antipodal pair (chord 2) dominates, giving 2 / 2^alpha
    g = CircleFunction.from_callable(grid256, np.cos)
    assert holder_seminorm(g, 0.5) == pytest.approx(2 ** 0.5, rel=1e-12)
    assert holder_seminorm(g, 0.6) < holder_seminorm(g, 0.5)


def test_lp_norm_of_constant(grid256):
    assert lp_norm(CircleFunction(grid256, 2 * np.ones(256)), 3.0) == pytest.approx(2.0)


def test_sobolev_constant_and_sine(grid256):
    assert sobolev_norm(CircleFunction(grid256, np.ones(256)), 3.0) == pytest.approx(1.0)
    assert sobolev_norm(CircleFunction.from_callable(grid256, np.sin), 2.0) == pytest.approx(1.0, abs=1e-14)


def test_sobolev_sin3_against_fine_quadrature(grid256):
    fine = 2 * np.pi * np.arange(4096) / 4096
    oracle = (np.mean(np.abs(np.sin(3 * fine)) ** 4) + np.mean(np.abs(3 * np.cos(3 * fine)) ** 4)) ** 0.25
    got = sobolev_norm(CircleFunction(grid256, np.sin(3 * grid256.theta)), 4.0)
    assert got == pytest.approx(oracle, rel=1e-12)


def test_sobolev_rejects_small_p(grid256):
    with pytest.raises(InvalidInput):
        sobolev_norm(CircleFunction(grid256, np.ones(256)), 1.0)


def test_spectral_derivative(grid256):
    th = grid256.theta
    d = spectral_derivative(CircleFunction(grid256, np.sin(5 * th)))
    assert np.max(np.abs(d.values[:, 0] - 5 * np.cos(5 * th))) < 1e-11


def test_synthesize_complex(grid256):
    c = np.zeros((256, 1), complex)
    c[1] = 1.0
    f = fourier_synthesize(FourierCoeffs(grid256, c))
    assert np.allclose(f.values[:, 0], np.exp(1j * grid256.theta))
