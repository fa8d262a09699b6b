"""Sampled functions on the unit circle and their spectral operators.

Functions live on the equispaced grid theta_j = 2*pi*j/N and are stored as
``(N, n)`` arrays (one column per component).  The Hilbert transform, the
harmonic/holomorphic extension and the spectral derivative all act through
the discrete Fourier coefficients, which makes them exact on trigonometric
polynomials below the Nyquist frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidInput, OutOfDomain

#: Largest modulus accepted by interior evaluators.
INTERIOR_CUTOFF = 1.0 - 1e-12


@dataclass(frozen=True)
class CircleGrid:
    """Equispaced nodes on the unit circle; ``N`` even so that 0 and pi are nodes."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 8 or self.N % 2:
            raise InvalidInput(f"grid size must be an even integer >= 8, got {self.N!r}")

    @cached_property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @cached_property
    def zeta(self) -> np.ndarray:
        return np.exp(1j * self.theta)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Integer frequencies in FFT order, covering ``[-N/2, N/2)``."""
        return np.fft.fftfreq(self.N, 1.0 / self.N).round().astype(int)

    @cached_property
    def upper(self) -> np.ndarray:
        """Mask of nodes on the closed upper semicircle ``theta in [0, pi]``."""
        j = np.arange(self.N)
        return j <= self.N // 2

    @cached_property
    def lower(self) -> np.ndarray:
        """Mask of nodes on the open lower semicircle ``theta in (pi, 2*pi)``."""
        return ~self.upper

    @cached_property
    def hilbert_multiplier(self) -> np.ndarray:
        m = -1j * np.sign(self.frequencies).astype(complex)
        # the Nyquist mode has no real conjugate on the grid
        m[self.N // 2] = 0.0
        return m

    @cached_property
    def hilbert_sup_norm(self) -> float:
        """Exact norm of the discrete Hilbert transform in the grid sup-norm.

        T is a circulant convolution, so its l-infinity operator norm is the
        l1 norm of its convolution kernel.
        """
        kernel = np.fft.ifft(self.hilbert_multiplier).real
        return float(np.abs(kernel).sum())

    def refine(self, factor: int) -> CircleGrid:
        return CircleGrid(self.N * int(factor))


@dataclass(frozen=True)
class CircleFunction:
    """Samples of an n-vector valued function at the nodes of ``grid``."""

    grid: CircleGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] != self.grid.N:
            raise InvalidInput(
                f"values must have shape (N, n) with N={self.grid.N}, got {np.shape(self.values)}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInput("circle function samples must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: CircleGrid, func) -> CircleFunction:
        """Sample ``func(theta)`` on the grid."""
        return cls(grid, np.asarray(func(grid.theta)))

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def real(self) -> CircleFunction:
        return CircleFunction(self.grid, self.values.real.copy())

    @property
    def imag(self) -> CircleFunction:
        return CircleFunction(self.grid, np.imag(self.values).copy())

    def sup(self) -> float:
        """Largest pointwise Euclidean norm."""
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def mean(self) -> np.ndarray:
        return self.values.mean(axis=0)

    def _other(self, other):
        if isinstance(other, CircleFunction):
            if other.grid != self.grid:
                raise InvalidInput("circle functions live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return CircleFunction(self.grid, self.values + self._other(other))

    def __sub__(self, other):
        return CircleFunction(self.grid, self.values - self._other(other))

    def __mul__(self, other):
        return CircleFunction(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return CircleFunction(self.grid, -self.values)


@dataclass(frozen=True)
class FourierCoeffs:
    """Discrete Fourier coefficients, stored in FFT order with shape ``(N, n)``."""

    grid: CircleGrid
    coeffs: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies

    def __getitem__(self, k: int) -> np.ndarray:
        N = self.grid.N
        if not -N // 2 <= k < N // 2:
            raise InvalidInput(f"frequency {k} outside [-{N // 2}, {N // 2})")
        return self.coeffs[k % N]


def fourier_analyze(f: CircleFunction) -> FourierCoeffs:
    """Coefficients ``u_k = (1/N) sum_j f(theta_j) exp(-i k theta_j)``."""
    return FourierCoeffs(f.grid, np.fft.fft(f.values, axis=0) / f.grid.N)


def fourier_synthesize(c: FourierCoeffs, real: bool | None = None) -> CircleFunction:
    """Inverse of :func:`fourier_analyze`.

    With ``real=None`` the imaginary part is dropped when it is at roundoff
    level relative to the data.
    """
    values = np.fft.ifft(c.coeffs, axis=0) * c.grid.N
    if real is None:
        scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
        real = float(np.max(np.abs(values.imag), initial=0.0)) <= 1e-13 * scale
    if real:
        values = values.real
    return CircleFunction(c.grid, values)


def hilbert_values(values: np.ndarray, grid: CircleGrid) -> np.ndarray:
    """Array-level Hilbert transform used on hot paths (no validation)."""
    spec = np.fft.fft(values, axis=0) * grid.hilbert_multiplier[:, None]
    return np.fft.ifft(spec, axis=0).real


def hilbert_transform(f: CircleFunction) -> CircleFunction:
    """Harmonic conjugate with zero mean, via the multiplier ``-i sgn(k)``."""
    if not f.is_real:
        raise InvalidInput("the Hilbert transform acts on real-valued functions")
    return CircleFunction(f.grid, hilbert_values(f.values, f.grid))


def spectral_derivative(f: CircleFunction) -> CircleFunction:
    """d/dtheta by the multiplier ``i k`` (Nyquist mode dropped)."""
    grid = f.grid
    k = grid.frequencies.astype(float)
    k[grid.N // 2] = 0.0
    spec = np.fft.fft(f.values, axis=0) * (1j * k)[:, None]
    out = np.fft.ifft(spec, axis=0)
    return CircleFunction(grid, out.real if f.is_real else out)


def _check_interior(zeta) -> np.ndarray:
    z = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(z) > INTERIOR_CUTOFF):
        raise OutOfDomain("evaluation point must satisfy |zeta| < 1")
    return z


def poisson_extend(f: CircleFunction, zeta) -> np.ndarray:
    """Harmonic extension of the trigonometric interpolant of ``f`` into the disc.

    ``zeta`` may be a scalar or an array; the result has shape
    ``zeta.shape + (n,)``.  The Nyquist mode ``cos(N theta / 2)`` is extended
    as ``Re zeta^(N/2)``.
    """
    z = _check_interior(zeta)
    grid = f.grid
    c = fourier_analyze(f).coeffs
    k = grid.frequencies
    half = grid.N // 2
    pos = (k >= 0)
    neg = (k < 0) & (k > -half)
    zf = z.reshape(-1)
    out = (zf[:, None] ** k[pos][None, :]) @ c[pos]
    out = out + (np.conj(zf)[:, None] ** (-k[neg])[None, :]) @ c[neg]
    nyq = c[half]
    out = out + 0.5 * (zf ** half + np.conj(zf) ** half)[:, None] * nyq[None, :]
    if f.is_real:
        out = out.real
    return out.reshape(z.shape + (f.n,))


def negative_frequency_residual(f: CircleFunction) -> float:
    """Largest modulus of a Fourier coefficient with ``k < 0`` (Nyquist included)."""
    c = fourier_analyze(f).coeffs
    neg = f.grid.frequencies < 0
    return float(np.max(np.abs(c[neg]), initial=0.0))


def holder_seminorm(f: CircleFunction, alpha: float) -> float:
    """Max over node pairs of ``|f_j - f_l| / |e^{i theta_j} - e^{i theta_l}|^alpha``.

    This is a lower bound for the true C^alpha seminorm; it converges to it
    from below as the grid is refined.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidInput(f"Hoelder exponent must lie in (0, 1), got {alpha}")
    v = f.values
    N = f.grid.N
    best = 0.0
    for m in range(1, N // 2 + 1):
        chord = 2.0 * np.sin(np.pi * m / N)
        diff = np.linalg.norm(v - np.roll(v, m, axis=0), axis=1)
        best = max(best, float(diff.max()) / chord ** alpha)
    return best


def holder_norm(f: CircleFunction, alpha: float) -> float:
    """Grid C^alpha norm: sup norm plus :func:`holder_seminorm` (a lower bound)."""
    return f.sup() + holder_seminorm(f, alpha)


def lp_norm(f: CircleFunction, p: float) -> float:
    """Normalized L^p norm, summed over components; trapezoid rule on the grid."""
    a = np.abs(f.values)
    return float(np.sum(np.mean(a ** p, axis=0) ** (1.0 / p)))


def sobolev_norm(f: CircleFunction, p: float) -> float:
    """W^{1,p} norm ``(||f||_p^p + ||f'||_p^p)^(1/p)`` summed over components.

    Integrals use the normalized measure ``d theta / 2 pi``; the derivative is
    spectral.
    """
    if not p > 1.0:
        raise InvalidInput(f"Sobolev exponent must exceed 1, got {p}")
    df = spectral_derivative(f)
    a = np.mean(np.abs(f.values) ** p, axis=0)
    b = np.mean(np.abs(df.values) ** p, axis=0)
    return float(np.sum((a + b) ** (1.0 / p)))
