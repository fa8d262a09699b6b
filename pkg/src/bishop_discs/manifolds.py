"""Totally real graphs ``y = h(x)`` in C^n and the data needed to glue discs to them.

All evaluators are vectorized over leading axes: ``h(x)`` takes ``(..., n)``
and returns ``(..., n)``; ``jacobian(x)`` returns ``(..., n, n)`` with
``J[..., j, k] = dh_j / dx_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import DegenerateManifold, InvalidInput
from .spectral import CircleFunction, CircleGrid, hilbert_values

KINDS = ("flat", "quadratic", "c1profile", "polynomial", "sphere")

DELTA_MIN = 1e-8
DELTA_MAX = 1.0


def _as_points(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (n,):
        raise InvalidInput(f"expected points with trailing dimension {n}, got shape {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class ManifoldGraph:
    """The graph ``E = {x + i h(x)}`` of a C^1 map ``h: R^n -> R^n``."""

    n: int
    h_func: Callable[[np.ndarray], np.ndarray]
    jac_func: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def h(self, x) -> np.ndarray:
        return self.h_func(_as_points(x, self.n))

    def jacobian(self, x) -> np.ndarray:
        return self.jac_func(_as_points(x, self.n))

    def point(self, x) -> np.ndarray:
        """Complex point ``x + i h(x)`` of the graph."""
        x = _as_points(x, self.n)
        return x + 1j * self.h(x)

    @property
    def is_flat(self) -> bool:
        return self.kind == "flat"

    def c1_norm(self, radius: float, points_per_axis: int | None = None) -> float:
        """Probed ``sup |h| + sup ||Dh||`` over the cube ``[-radius, radius]^n``."""
        x = probe_cube(self.n, radius, points_per_axis)
        return float(np.max(np.abs(self.h(x))) + np.max(jacobian_inf_norm(self.jacobian(x))))

    def totally_real_margin(self, x) -> np.ndarray:
        """Smallest singular value of the matrix with columns ``e_j + i Dh(x) e_j``.

        A positive value means the tangent space at ``x + i h(x)`` contains no
        complex line, i.e. the graph is totally real (and generic) there.
        """
        J = self.jacobian(x)
        M = np.eye(self.n) + 1j * J
        return np.linalg.svd(M, compute_uv=False)[..., -1]


def jacobian_inf_norm(J: np.ndarray) -> np.ndarray:
    """Operator norm induced by the max-norm: largest absolute row sum."""
    return np.max(np.sum(np.abs(J), axis=-1), axis=-1)


def probe_cube(n: int, radius: float, points_per_axis: int | None = None) -> np.ndarray:
    if points_per_axis is None:
        points_per_axis = {1: 4001, 2: 201, 3: 41}.get(n, 11)
    axis = np.linspace(-radius, radius, points_per_axis)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


# -- built-in manifolds -----------------------------------------------------


def flat(n: int = 1) -> ManifoldGraph:
    return ManifoldGraph(
        n,
        lambda x: np.zeros_like(x),
        lambda x: np.zeros(x.shape + (n,)),
        kind="flat",
    )


def quadratic(coefficients=None, n: int | None = None) -> ManifoldGraph:
    """``h_j(x) = sum_{k,l} A[j,k,l] x_k x_l``; defaults to ``h(x) = x^2`` in C^1."""
    if coefficients is None:
        coefficients = np.ones((1, 1, 1)) if n is None else np.eye(n)[:, :, None] * np.eye(n)[None, :, :]
    A = np.asarray(coefficients, dtype=float)
    if A.ndim != 3 or len(set(A.shape)) != 1:
        raise InvalidInput("quadratic coefficients must have shape (n, n, n)")
    sym = A + A.transpose(0, 2, 1)
    dim = A.shape[0]

    def h(x):
        return np.einsum("jkl,...k,...l->...j", A, x, x)

    def jac(x):
        return np.einsum("jkl,...l->...jk", sym, x)

    return ManifoldGraph(dim, h, jac, kind="quadratic", params={"coefficients": A.tolist()})


def c1profile(beta: float = 0.5, amplitudes=None, n: int = 1) -> ManifoldGraph:
    """``h_j(x) = a_j |x|^(1+beta)``: C^1 with beta-Hoelder gradient, not C^2 at 0."""
    if not 0.0 < beta < 1.0:
        raise InvalidInput(f"profile exponent beta must lie in (0, 1), got {beta}")
    a = np.ones(n) if amplitudes is None else np.asarray(amplitudes, dtype=float)
    if a.shape != (n,):
        raise InvalidInput("need one amplitude per component")

    def h(x):
        r = np.linalg.norm(x, axis=-1, keepdims=True)
        return a * r ** (1.0 + beta)

    def jac(x):
        r = np.linalg.norm(x, axis=-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(r > 0, (1.0 + beta) * r ** (beta - 1.0), 0.0) * x
        return a[:, None] * g[..., None, :]

    return ManifoldGraph(n, h, jac, kind="c1profile", params={"beta": beta, "amplitudes": a.tolist()})


def polynomial(terms, n: int = 1) -> ManifoldGraph:
    """Monomial sums; ``terms[j]`` is a list of ``(coefficient, powers)`` pairs for ``h_j``.

    Every monomial must have total degree at least 2 so that ``h(0) = 0`` and
    ``Dh(0) = 0``.
    """
    if len(terms) != n:
        raise InvalidInput("need one list of monomials per component")
    parsed = []
    for comp in terms:
        rows = []
        for coef, powers in comp:
            powers = np.asarray(powers, dtype=int)
            if powers.shape != (n,) or np.any(powers < 0):
                raise InvalidInput(f"bad monomial exponents {powers.tolist()}")
            if powers.sum() < 2:
                raise InvalidInput("monomials of degree < 2 violate h(0) = 0, Dh(0) = 0")
            rows.append((float(coef), powers))
        parsed.append(rows)

    def h(x):
        out = np.zeros_like(x)
        for j, rows in enumerate(parsed):
            for coef, pw in rows:
                out[..., j] += coef * np.prod(x ** pw, axis=-1)
        return out

    def jac(x):
        out = np.zeros(x.shape + (n,))
        for j, rows in enumerate(parsed):
            for coef, pw in rows:
                for k in range(n):
                    if pw[k] == 0:
                        continue
                    dpw = pw.copy()
                    dpw[k] -= 1
                    out[..., j, k] += coef * pw[k] * np.prod(x ** dpw, axis=-1)
        return out

    spec = [[[c, p.tolist()] for c, p in rows] for rows in parsed]
    return ManifoldGraph(n, h, jac, kind="polynomial", params={"terms": spec})


def sphere(radius: float = 1.0, n: int = 1) -> ManifoldGraph:
    """Lower cap ``h_j(x) = sqrt(R^2 - |x|^2) - R`` of the sphere about ``-iR``.

    For ``n = 1`` this is the boundary arc of the disc ``|z + iR| < R`` near the
    origin; its quadratic part is ``-|x|^2 / (2R)``.  Valid for ``|x| < R``.
    """
    R = float(radius)
    if R <= 0:
        raise InvalidInput("sphere radius must be positive")

    def h(x):
        s = np.maximum(R * R - np.sum(x * x, axis=-1, keepdims=True), 0.0)
        return np.broadcast_to(np.sqrt(s) - R, x.shape).copy()

    def jac(x):
        s = np.maximum(R * R - np.sum(x * x, axis=-1, keepdims=True), 1e-300)
        g = -x / np.sqrt(s)
        return np.broadcast_to(g[..., None, :], x.shape + (n,)).copy()

    return ManifoldGraph(n, h, jac, kind="sphere", params={"radius": R})


def from_spec(spec: dict) -> ManifoldGraph:
    """Build a manifold from a config mapping ``{"kind": ..., ...}``."""
    kind = spec.get("kind")
    n = int(spec.get("n", 1))
    if kind == "flat":
        return flat(n)
    if kind == "quadratic":
        coeffs = spec.get("coefficients")
        if coeffs is None and n == 1:
            coeffs = [[[float(spec.get("a", 1.0))]]]
        return quadratic(coeffs, n=n)
    if kind == "c1profile":
        return c1profile(float(spec.get("beta", 0.5)), spec.get("amplitudes"), n=n)
    if kind == "polynomial":
        return polynomial(spec["terms"], n=n)
    if kind == "sphere":
        return sphere(float(spec.get("radius", 1.0)), n=n)
    raise InvalidInput(f"unknown manifold kind {kind!r}; expected one of {KINDS}")


# -- smooth bump and the localized graph ------------------------------------


def _g(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = s > 0
    out[m] = np.exp(-1.0 / s[m])
    return out


def _dg(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = s > 0
    out[m] = np.exp(-1.0 / s[m]) / s[m] ** 2
    return out


def bump_radial(r):
    """Profile of the reference bump: 1 for ``r <= 1``, 0 for ``r >= 2``, C^infinity."""
    a = _g(2.0 - np.asarray(r, dtype=float))
    b = _g(np.asarray(r, dtype=float) - 1.0)
    return a / (a + b)


def bump_radial_derivative(r):
    r = np.asarray(r, dtype=float)
    a, b = _g(2.0 - r), _g(r - 1.0)
    da, db = -_dg(2.0 - r), _dg(r - 1.0)
    return (da * b - a * db) / (a + b) ** 2


def bump(x):
    """Reference bump ``lambda: R^n -> [0, 1]`` evaluated at points ``(..., n)``."""
    return bump_radial(np.linalg.norm(np.asarray(x, dtype=float), axis=-1))


@dataclass(frozen=True, eq=False)
class CutoffGraph:
    """``h_delta(x) = lambda(x / delta) h(x)``, extended by zero outside ``2 delta``."""

    base: ManifoldGraph
    delta: float
    tau: float

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def kind(self) -> str:
        return self.base.kind

    def lam(self, x) -> np.ndarray:
        return bump(np.asarray(x, dtype=float) / self.delta)

    def h(self, x) -> np.ndarray:
        x = _as_points(x, self.n)
        out = np.zeros_like(x)
        r = np.linalg.norm(x, axis=-1)
        m = r < 2.0 * self.delta
        if np.any(m):
            xm = x[m]
            out[m] = bump_radial(r[m] / self.delta)[:, None] * self.base.h(xm)
        return out

    def jacobian(self, x) -> np.ndarray:
        x = _as_points(x, self.n)
        out = np.zeros(x.shape + (self.n,))
        r = np.linalg.norm(x, axis=-1)
        m = r < 2.0 * self.delta
        if np.any(m):
            xm, rm = x[m], r[m]
            lam = bump_radial(rm / self.delta)
            dlam = bump_radial_derivative(rm / self.delta)
            with np.errstate(divide="ignore", invalid="ignore"):
                unit = np.where(rm[:, None] > 0, xm / rm[:, None], 0.0)
            grad_lam = (dlam / self.delta)[:, None] * unit
            out[m] = (lam[:, None, None] * self.base.jacobian(xm)
                      + self.base.h(xm)[:, :, None] * grad_lam[:, None, :])
        return out

    def probed_gradient_sup(self, points_per_axis: int | None = None) -> float:
        """Probed ``sup ||D h_delta||`` over the support cube ``[-2 delta, 2 delta]^n``."""
        return _probed_sup(self.base, self.delta, points_per_axis)

    def contraction_bound(self, T_norm: float) -> float:
        """Lipschitz bound ``T_norm * sup ||D h_delta||`` of the Picard map."""
        return T_norm * self.probed_gradient_sup()


def _probed_sup(base: ManifoldGraph, delta: float, points_per_axis=None) -> float:
    if base.is_flat:
        return 0.0
    g = CutoffGraph(base, delta, np.inf)
    x = probe_cube(base.n, 2.0 * delta, points_per_axis)
    return float(np.max(jacobian_inf_norm(g.jacobian(x))))


def eval_cutoff(g: CutoffGraph, x) -> np.ndarray:
    return g.h(x)


def choose_tau_delta(g: ManifoldGraph, contraction_target: float, T_norm: float,
                     delta_max: float = DELTA_MAX) -> CutoffGraph:
    """Fix ``tau = contraction_target / T_norm`` and bisect for the largest admissible delta.

    The returned cutoff satisfies ``sup ||D h_delta|| <= tau`` on the probe
    grid, so the Picard map contracts by at most ``contraction_target`` in the
    grid sup-norm.
    """
    if not 0.0 < contraction_target < 1.0:
        raise InvalidInput("contraction target must lie in (0, 1)")
    if not T_norm > 0:
        raise InvalidInput("T_norm must be positive")
    tau = contraction_target / T_norm
    if g.is_flat:
        return CutoffGraph(g, 1.0, tau)
    if _probed_sup(g, delta_max) <= tau:
        return CutoffGraph(g, delta_max, tau)
    if _probed_sup(g, DELTA_MIN) > tau:
        raise DegenerateManifold(
            f"gradient of h does not vanish fast enough at 0: sup ||D h_delta|| > {tau:.3g} "
            f"even for delta = {DELTA_MIN:g}"
        )
    lo, hi = np.log(DELTA_MIN), np.log(delta_max)
    while hi - lo > 1e-7:
        mid = 0.5 * (lo + hi)
        if _probed_sup(g, np.exp(mid)) <= tau:
            lo = mid
        else:
            hi = mid
    return CutoffGraph(g, float(np.exp(lo)), tau)


@dataclass(frozen=True, eq=False)
class DilationFamily:
    """``h(x, d) = h(d x) / d`` for ``d != 0`` and ``h(x, 0) = 0``."""

    base: ManifoldGraph
    interval: tuple[float, float] = (-1.0, 1.0)

    def at(self, d: float) -> ManifoldGraph:
        return dilate(self, d)


def dilate(fam: DilationFamily, d: float) -> ManifoldGraph:
    lo, hi = fam.interval
    if not lo <= d <= hi:
        raise InvalidInput(f"dilation parameter {d} outside {fam.interval}")
    base = fam.base
    if d == 0 or base.is_flat:
        return flat(base.n)
    d = float(d)
    return ManifoldGraph(
        base.n,
        lambda x: base.h(d * x) / d,
        lambda x: base.jacobian(d * x),
        kind=base.kind,
        params={**base.params, "d": d},
    )


# -- the collar -------------------------------------------------------------


def collar_profile(theta) -> np.ndarray:
    """Reference collar: 0 on ``[0, pi]``, ``-exp(-1/((theta-pi)(2 pi-theta)))`` below."""
    th = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
    out = np.zeros_like(th)
    m = (th > np.pi) & (th < 2.0 * np.pi)
    s = th[m]
    out[m] = -np.exp(-1.0 / ((s - np.pi) * (2.0 * np.pi - s)))
    return out


#: Resolution used for the conjugate of the collar; the collar is resolved to
#: roundoff there, so its Hilbert transform does not depend on the working grid.
COLLAR_REFERENCE_NODES = 16384


@dataclass(frozen=True, eq=False)
class CollarFunction:
    """The collar psi (identical components) together with its conjugate T psi."""

    grid: CircleGrid
    n: int = 1

    @cached_property
    def scalar(self) -> np.ndarray:
        return collar_profile(self.grid.theta)

    @cached_property
    def scalar_conjugate(self) -> np.ndarray:
        N = self.grid.N
        factor = max(1, -(-COLLAR_REFERENCE_NODES // N))
        fine = self.grid.refine(factor)
        Tfine = hilbert_values(collar_profile(fine.theta)[:, None], fine)[:, 0]
        return Tfine[::factor]

    @cached_property
    def psi(self) -> CircleFunction:
        return CircleFunction(self.grid, np.repeat(self.scalar[:, None], self.n, axis=1))

    @cached_property
    def conjugate(self) -> CircleFunction:
        """``T psi`` per component."""
        return CircleFunction(self.grid, np.repeat(self.scalar_conjugate[:, None], self.n, axis=1))


def build_collar(grid: CircleGrid, n: int = 1) -> CollarFunction:
    return CollarFunction(grid, n)


# -- distance to the graph --------------------------------------------------


@dataclass(frozen=True)
class DistanceResult:
    distance: float
    x_star: np.ndarray
    lower_bound: float
    approximate: bool = False


def dist_to_manifold(g, z, seeds_per_axis: int | None = None,
                     box: float | None = None) -> DistanceResult:
    """Distance from ``z`` in C^n to the graph ``{x + i h(x)}``.

    The nearest foot point satisfies ``|x* - Re z| <= |Im z - h(Re z)|`` (the
    vertical distance bounds the true one), so seeds are laid on that cube and
    the best few are polished with L-BFGS-B.  ``distance`` is attained by
    ``x_star`` and is therefore an upper bound; ``lower_bound`` comes from the
    seed grid and the Lipschitz constant of the parametrization.
    """
    n = g.n
    z = np.asarray(z, dtype=complex).reshape(n)
    a, b = z.real, z.imag

    def sq(x):
        x = np.atleast_2d(x)
        return np.sum((x - a) ** 2 + (g.h(x) - b) ** 2, axis=-1)

    vertical = float(np.sqrt(sq(a)[0]))
    if vertical == 0.0:
        return DistanceResult(0.0, a.copy(), 0.0)
    w = vertical if box is None else min(vertical, box)
    approximate = box is not None and box < vertical
    if seeds_per_axis is None:
        seeds_per_axis = {1: 65, 2: 17, 3: 7}.get(n, 5)
    offsets = np.linspace(-w, w, seeds_per_axis)
    mesh = np.meshgrid(*([offsets] * n), indexing="ij")
    seeds = a + np.stack([m.reshape(-1) for m in mesh], axis=-1)
    vals = sq(seeds)

    def fun(x):
        r1 = x - a
        r2 = g.h(x[None, :])[0] - b
        J = g.jacobian(x[None, :])[0]
        return float(r1 @ r1 + r2 @ r2), 2.0 * (r1 + J.T @ r2)

    best_x, best_v = a.copy(), float(sq(a)[0])
    bounds = [(ai - w, ai + w) for ai in a]
    for idx in np.argsort(vals)[:3]:
        res = optimize.minimize(fun, seeds[idx], jac=True, method="L-BFGS-B", bounds=bounds,
                                options={"ftol": 1e-15, "gtol": 1e-14, "maxiter": 200})
        cand = [(float(res.fun), res.x), (float(vals[idx]), seeds[idx])]
        for v, x in cand:
            if v < best_v:
                best_v, best_x = v, np.array(x, dtype=float)
    # exact recomputation avoids the optimizer's rounding of the objective
    dist = float(np.sqrt(sq(best_x)[0]))
    spacing = 2.0 * w / (seeds_per_axis - 1)
    lip = 1.0 + float(np.max(jacobian_inf_norm(g.jacobian(seeds))))
    lower = max(0.0, float(np.sqrt(vals.min())) - lip * spacing * np.sqrt(n) / 2.0)
    return DistanceResult(dist, best_x, min(lower, dist), approximate)


def distances_to_manifold(g, Z) -> np.ndarray:
    """Vector of :func:`dist_to_manifold` distances for points ``Z`` of shape ``(m, n)``."""
    Z = np.asarray(Z, dtype=complex).reshape(-1, g.n)
    return np.array([dist_to_manifold(g, z).distance for z in Z])
