"""Defining functions, wedges, cones and the boundary estimates along disc families.

Points of C^n are complex arrays with trailing dimension ``n``.  A defining
function returns real values; its complex gradient is ``d rho / d z_j`` and
its complex Hessian ``d^2 rho / (d z_j d conj(z_k))``, the matrix of the Levi
form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg, optimize, stats
from scipy.spatial import cKDTree

from .errors import (
    DegenerateBoundary,
    DomainViolation,
    HypothesisViolation,
    InvalidInput,
    Unsupported,
)
from .manifolds import ManifoldGraph, dist_to_manifold


def _to_real(z):
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def _to_complex(w, n):
    w = np.asarray(w, dtype=float)
    return w[..., :n] + 1j * w[..., n:]


@dataclass(frozen=True, eq=False)
class DefiningFunction:
    """Real function on C^n with optional analytic derivatives.

    Missing derivatives fall back to centred differences (step
    ``1e-5 (1 + |z|)`` for gradients, ``1e-4 (1 + |z|)`` for Hessians).
    ``order`` is the differentiability class; Levi forms need ``order >= 2``.
    """

    func: Callable[[np.ndarray], np.ndarray]
    n: int
    order: int = 2
    dz_func: Callable | None = None
    hess_func: Callable | None = None
    name: str = "custom"

    def __call__(self, z) -> np.ndarray:
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=float)

    def real_gradient_fd(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(self.n)
        w = _to_real(z)
        h = 1e-5 * (1.0 + np.linalg.norm(w))
        g = np.empty(2 * self.n)
        for i in range(2 * self.n):
            e = np.zeros(2 * self.n)
            e[i] = h
            g[i] = (self(_to_complex(w + e, self.n)) - self(_to_complex(w - e, self.n))) / (2 * h)
        return g

    def dz(self, z) -> np.ndarray:
        """``d rho / d z_j`` at a single point."""
        z = np.asarray(z, dtype=complex).reshape(self.n)
        if self.dz_func is not None:
            return np.asarray(self.dz_func(z), dtype=complex)
        g = self.real_gradient_fd(z)
        return 0.5 * (g[: self.n] - 1j * g[self.n:])

    def real_gradient(self, z) -> np.ndarray:
        """Gradient in the real coordinates ``(x, y)``."""
        a = self.dz(z)
        return np.concatenate([2.0 * a.real, -2.0 * a.imag])

    def complex_hessian(self, z) -> np.ndarray:
        if self.order < 2:
            raise Unsupported(f"{self.name} is only C^1; the Levi form needs C^2")
        z = np.asarray(z, dtype=complex).reshape(self.n)
        if self.hess_func is not None:
            return np.asarray(self.hess_func(z), dtype=complex)
        n = self.n
        w = _to_real(z)
        h = 1e-4 * (1.0 + np.linalg.norm(w))
        R = np.empty((2 * n, 2 * n))
        f = lambda v: float(self(_to_complex(v, n)))
        for i in range(2 * n):
            for j in range(i, 2 * n):
                ei = np.zeros(2 * n)
                ej = np.zeros(2 * n)
                ei[i] = h
                ej[j] = h
                R[i, j] = R[j, i] = (f(w + ei + ej) - f(w + ei - ej) - f(w - ei + ej)
                                     + f(w - ei - ej)) / (4 * h * h)
        xx, xy, yx, yy = R[:n, :n], R[:n, n:], R[n:, :n], R[n:, n:]
        return 0.25 * (xx + yy + 1j * (xy - yx))


# -- catalogue --------------------------------------------------------------


def unit_ball(n: int = 1, center=None, radius: float = 1.0) -> DefiningFunction:
    """``|z - a|^2 - R^2``."""
    a = np.zeros(n, dtype=complex) if center is None else np.asarray(center, dtype=complex)

    def f(z):
        return np.sum(np.abs(z - a) ** 2, axis=-1) - radius ** 2

    return DefiningFunction(f, n, 2, lambda z: np.conj(z - a), lambda z: np.eye(n, dtype=complex),
                            name="ball")


def ellipsoid(weights) -> DefiningFunction:
    """``sum_j w_j |z_j|^2 - 1``."""
    w = np.asarray(weights, dtype=float)
    n = w.size
    return DefiningFunction(
        lambda z: np.sum(w * np.abs(z) ** 2, axis=-1) - 1.0,
        n, 2, lambda z: w * np.conj(z), lambda z: np.diag(w).astype(complex), name="ellipsoid",
    )


def half_space(n: int = 1, j: int = 0, part: str = "im") -> DefiningFunction:
    """``Im z_j`` (default) or ``Re z_j``: pluriharmonic, zero Levi form."""
    if part not in ("re", "im"):
        raise InvalidInput("part must be 're' or 'im'")
    e = np.zeros(n, dtype=complex)
    e[j] = 0.5 if part == "re" else -0.5j
    take = (lambda z: z[..., j].real) if part == "re" else (lambda z: z[..., j].imag)
    return DefiningFunction(take, n, 2, lambda z: e.copy(), lambda z: np.zeros((n, n), dtype=complex),
                            name=f"half_space_{part}{j + 1}")


def graph_face(graph: ManifoldGraph, j: int) -> DefiningFunction:
    """``phi_j(z) = Im z_j - h_j(Re z)``; the wedge below the graph of ``h``."""
    n = graph.n

    def f(z):
        z = np.asarray(z, dtype=complex)
        return z[..., j].imag - graph.h(z.real)[..., j]

    def dz(z):
        J = graph.jacobian(z.real[None, :])[0]
        out = -0.5 * J[j].astype(complex)
        out[j] += -0.5j
        return out

    order = 2 if graph.kind in ("flat", "quadratic", "polynomial", "sphere") else 1
    return DefiningFunction(f, n, order, dz, None, name=f"graph_face{j + 1}")


def flat_edge_square(n: int = 1) -> DefiningFunction:
    """``|Im z|^2``: nonnegative, strictly psh, vanishing exactly on ``R^n``."""
    return DefiningFunction(
        lambda z: np.sum(np.asarray(z).imag ** 2, axis=-1),
        n, 2, lambda z: -1j * z.imag, lambda z: 0.5 * np.eye(n, dtype=complex), name="flat_edge_square",
    )


def sphere_square(n: int = 1, center=None, radius: float = 1.0) -> DefiningFunction:
    """``(|z - a|^2 - R^2)^2``: nonnegative, vanishing on the sphere, strictly psh near it."""
    a = np.zeros(n, dtype=complex) if center is None else np.asarray(center, dtype=complex)

    def f(z):
        s = np.sum(np.abs(np.asarray(z) - a) ** 2, axis=-1) - radius ** 2
        return s * s

    def dz(z):
        s = np.sum(np.abs(z - a) ** 2) - radius ** 2
        return 2.0 * s * np.conj(z - a)

    def hess(z):
        w = z - a
        s = np.sum(np.abs(w) ** 2) - radius ** 2
        return 2.0 * np.outer(np.conj(w), w) + 2.0 * s * np.eye(n)

    return DefiningFunction(f, n, 2, dz, hess, name="sphere_square")


# -- Levi form and pseudoconvexity ------------------------------------------


def levi_form(rho: DefiningFunction, p, v) -> float:
    """``sum_{j,k} d^2 rho / (dz_j d conj z_k)(p) v_j conj(v_k)``, symmetrized to be real."""
    H = rho.complex_hessian(p)
    H = 0.5 * (H + H.conj().T)
    v = np.asarray(v, dtype=complex).reshape(rho.n)
    return float(np.real(v @ H @ np.conj(v)))


def restricted_levi_eigenvalues(rho: DefiningFunction, p) -> np.ndarray:
    """Eigenvalues of the Levi form on ``H_p = {v : sum_j (d rho / d z_j) v_j = 0}``."""
    a = rho.dz(p)
    if np.linalg.norm(a) < 1e-12:
        raise DegenerateBoundary(f"d rho vanishes at {np.asarray(p).tolist()}")
    B = linalg.null_space(a[None, :])
    if B.shape[1] == 0:
        return np.empty(0)
    H = rho.complex_hessian(p)
    H = 0.5 * (H + H.conj().T)
    # the form v -> v^T H conj(v) on v = B w equals q^H M q with q = conj(w)
    M = B.T @ H @ B.conj()
    return np.linalg.eigvalsh(0.5 * (M + M.conj().T))


@dataclass
class PseudoconvexityReport:
    min_eigenvalues: list
    min_eigenvalue: float | None
    strict: bool
    samples: int

    def as_dict(self) -> dict:
        return {"min_eigenvalue": self.min_eigenvalue, "strict": self.strict, "samples": self.samples}


def strict_pseudoconvexity_check(rho: DefiningFunction, samples, boundary_tol: float = 1e-8,
                                 strict_tol: float = 1e-10) -> PseudoconvexityReport:
    """Minimal restricted Levi eigenvalue at each boundary sample.

    With ``n = 1`` the complex tangent space is trivial and the check is
    vacuous (``min_eigenvalue`` is ``None``, ``strict`` is true).
    """
    pts = np.asarray(samples, dtype=complex).reshape(-1, rho.n)
    vals = rho(pts)
    if np.any(np.abs(vals) > boundary_tol):
        raise InvalidInput(f"samples must lie on rho = 0 within {boundary_tol:g}")
    mins = []
    for p in pts:
        ev = restricted_levi_eigenvalues(rho, p)
        mins.append(float(ev.min()) if ev.size else None)
    finite = [m for m in mins if m is not None]
    lowest = min(finite) if finite else None
    strict = lowest is None or lowest > strict_tol
    return PseudoconvexityReport(mins, lowest, strict, len(pts))


def sphere_samples(n: int, count: int, seed: int = 0, weights=None) -> np.ndarray:
    """Random points on ``sum w_j |z_j|^2 = 1`` (the unit sphere by default)."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    return g / np.sqrt(np.sum(w * np.abs(g) ** 2, axis=1, keepdims=True))


# -- wedges -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Wedge:
    """``W = {phi_j < 0}`` with edge ``E = {phi_j = 0}``; ``delta`` sets the shrunk wedge.

    ``edge_graph`` gives ``E`` in graph normal form when available, which
    makes distances to the edge cheap and reliable.
    """

    phis: tuple
    delta: float = 0.1
    edge_graph: ManifoldGraph | None = None

    def __post_init__(self):
        object.__setattr__(self, "phis", tuple(self.phis))
        if not self.phis:
            raise InvalidInput("a wedge needs at least one defining function")
        if not self.delta > 0:
            raise InvalidInput("shrink parameter delta must be positive")

    @property
    def n(self) -> int:
        return self.phis[0].n

    def values(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.stack([phi(z) for phi in self.phis], axis=-1)

    def shrunk_values(self, z) -> np.ndarray:
        v = self.values(z)
        total = v.sum(axis=-1, keepdims=True)
        return v - self.delta * (total - v)

    def generic_margin(self, z) -> float:
        """Smallest singular value of ``(d phi_j / d z_k)``; positive means generic edge."""
        A = np.stack([phi.dz(z) for phi in self.phis])
        return float(np.linalg.svd(A, compute_uv=False)[-1])

    def dist_to_edge(self, z) -> float:
        if self.edge_graph is not None:
            return dist_to_manifold(self.edge_graph, z).distance
        return self._constrained_distance(z, eq=range(len(self.phis)), ineq=())

    def dist_to_boundary(self, z) -> float:
        """Distance to ``bW``: minimum over faces ``{phi_j = 0, phi_l <= 0}``."""
        m = len(self.phis)
        return min(self._constrained_distance(z, eq=(j,), ineq=[l for l in range(m) if l != j])
                   for j in range(m))

    def _constrained_distance(self, z, eq, ineq) -> float:
        n = self.n
        w0 = _to_real(np.asarray(z, dtype=complex).reshape(n))
        cons = [{"type": "eq", "fun": (lambda w, j=j: float(self.phis[j](_to_complex(w, n))))} for j in eq]
        cons += [{"type": "ineq", "fun": (lambda w, j=j: -float(self.phis[j](_to_complex(w, n))))}
                 for j in ineq]
        res = optimize.minimize(lambda w: float(np.sum((w - w0) ** 2)), w0,
                                jac=lambda w: 2 * (w - w0), constraints=cons, method="SLSQP",
                                options={"ftol": 1e-14, "maxiter": 300})
        return float(np.sqrt(np.sum((res.x - w0) ** 2)))


def wedge_membership(w: Wedge, z, shrunk: bool = False) -> bool:
    v = w.shrunk_values(z) if shrunk else w.values(z)
    return bool(np.all(v < 0))


def model_wedge(n: int, delta: float = 0.1) -> Wedge:
    """``W^0 = {Im z_j < 0}`` with edge ``R^n``."""
    from .manifolds import flat

    return Wedge(tuple(half_space(n, j) for j in range(n)), delta, flat(n))


def graph_wedge(graph: ManifoldGraph, delta: float = 0.1) -> Wedge:
    """Wedge ``{Im z_j < h_j(Re z)}`` below a graph, with that graph as edge."""
    return Wedge(tuple(graph_face(graph, j) for j in range(graph.n)), delta, graph)


@dataclass
class ComparabilityReport:
    constant: float
    ratios: np.ndarray
    used: int
    skipped: int

    def as_dict(self) -> dict:
        return {"constant": self.constant, "used": self.used, "skipped": self.skipped}


def edge_distance_comparability(w: Wedge, samples) -> ComparabilityReport:
    """Smallest C with ``dist(z, bW) / C <= dist(z, E) <= C dist(z, bW)`` on samples in ``W_delta``."""
    pts = np.asarray(samples, dtype=complex).reshape(-1, w.n)
    ratios, skipped = [], 0
    for z in pts:
        if not wedge_membership(w, z, shrunk=True):
            skipped += 1
            continue
        de, db = w.dist_to_edge(z), w.dist_to_boundary(z)
        ratios.append(de / db)
    if skipped:
        warnings.warn(f"{skipped} samples outside the shrunk wedge were skipped", stacklevel=2)
    r = np.asarray(ratios)
    if r.size == 0:
        raise InvalidInput("no samples inside the shrunk wedge")
    C = float(max(r.max(), 1.0 / r.min()))
    return ComparabilityReport(C, r, r.size, skipped)


@dataclass(frozen=True)
class Cone:
    """Closed circular cone ``{v : angle(v - vertex, axis) <= half_angle, |v - vertex| <= radius}``.

    ``axis`` is a complex n-vector read as a direction in ``R^{2n}``.
    """

    axis: np.ndarray
    half_angle: float
    radius: float
    vertex: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=complex)
        a = a / np.linalg.norm(a)
        object.__setattr__(self, "axis", a)
        v = np.zeros_like(a) if self.vertex is None else np.asarray(self.vertex, dtype=complex)
        object.__setattr__(self, "vertex", v)
        if not 0 < self.half_angle < np.pi / 2:
            raise InvalidInput("half angle must lie in (0, pi/2)")

    def translate(self, vertex) -> Cone:
        return Cone(self.axis, self.half_angle, self.radius, np.asarray(vertex, dtype=complex))

    def contains(self, z) -> np.ndarray:
        d = np.asarray(z, dtype=complex) - self.vertex
        r = np.linalg.norm(d, axis=-1)
        cosang = np.real(np.sum(d * np.conj(self.axis), axis=-1)) / np.where(r > 0, r, 1.0)
        return (r <= self.radius) & ((r == 0) | (cosang >= np.cos(self.half_angle) - 1e-15))

    def in_model_wedge(self) -> bool:
        """True iff the closed cone minus its vertex lies in ``vertex + {Im z_j < 0}``.

        The largest value of ``Im v_j / |v|`` over the cone is
        ``cos(max(beta_j - half_angle, 0))`` with ``beta_j`` the angle between
        the axis and the ``Im z_j`` direction, so the condition is
        ``beta_j - half_angle > pi / 2`` for every j.
        """
        n = self.axis.size
        for j in range(n):
            e = np.zeros(n, dtype=complex)
            e[j] = 1j
            beta = np.arccos(np.clip(np.real(np.vdot(e, self.axis)), -1.0, 1.0))
            if not beta - self.half_angle > np.pi / 2:
                return False
        return True


# -- estimates along discs --------------------------------------------------


def _polar(window, n_radii, n_angles):
    s = np.geomspace(window[0], window[1], n_radii)
    th = 2 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    zeta = (1.0 - s)[:, None] * np.exp(1j * th)[None, :]
    return s, th, zeta


@dataclass
class HopfReport:
    applicable: bool
    constant: float | None = None
    refined_constant: float | None = None
    chain_constant: float | None = None
    lipschitz: float | None = None
    chain_ok: bool | None = None
    stable: bool | None = None
    passed: bool | None = None
    table: np.ndarray | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("applicable", "constant", "refined_constant",
                                              "chain_constant", "lipschitz", "chain_ok", "stable",
                                              "passed")}


def _hopf_constant(disc, rho, window, n_radii, n_angles, domain_tol):
    s, th, zeta = _polar(window, n_radii, n_angles)
    H = disc(zeta)
    vals = rho(H)
    if np.max(vals) > domain_tol:
        raise DomainViolation(f"disc image leaves the domain: max rho = {np.max(vals):.3g}")
    ratio = np.abs(vals) / s[:, None]
    return float(ratio.min()), s, H, vals


def hopf_bound_check(disc, rho: DefiningFunction, edge: ManifoldGraph, *, refined=None,
                     window=(1e-4, 0.3), n_radii: int = 24, n_angles: int = 64,
                     stability_tol: float = 0.1, domain_tol: float = 1e-12) -> HopfReport:
    """Fit ``C`` in ``|rho(H(zeta))| >= C (1 - |zeta|)`` and check the chained distance estimate.

    ``C`` is the minimum of the ratio over a polar sample set with
    ``1 - |zeta|`` in ``window``.  The chained constant ``C'`` in
    ``1 - |zeta| <= C' dist(H(zeta), E)`` is the maximum of the reciprocal
    ratio; it must not exceed ``Lip(rho) / C`` (up to ``stability_tol``),
    since ``|rho| <= Lip(rho) dist(., E)`` for ``E`` inside ``{rho = 0}``.
    With ``refined`` (the same disc at higher resolution) the fitted ``C``
    must also agree within ``stability_tol``.
    """
    if disc.is_constant():
        return HopfReport(applicable=False)
    C, s, H, vals = _hopf_constant(disc, rho, window, n_radii, n_angles, domain_tol)
    flatH = H.reshape(-1, disc.n)
    dist = np.array([dist_to_manifold(edge, z).distance for z in flatH]).reshape(H.shape[:2])
    chain = float(np.max(s[:, None] / dist))
    lip = float(max(np.linalg.norm(rho.real_gradient(z)) for z in flatH))
    chain_ok = chain <= (1.0 + stability_tol) * lip / C
    refined_C, stable = None, None
    if refined is not None:
        refined_C = _hopf_constant(refined, rho, window, n_radii, n_angles, domain_tol)[0]
        stable = abs(refined_C - C) <= stability_tol * C
    passed = C > 0 and chain_ok and (stable is not False)
    table = np.column_stack([np.repeat(s, H.shape[1]), np.abs(vals).reshape(-1), dist.reshape(-1)])
    return HopfReport(True, C, refined_C, chain, lip, bool(chain_ok), stable, bool(passed), table)


@dataclass
class FillReport:
    fraction: float
    covered: int
    samples: int
    eps_fill: float
    max_gap: float

    @property
    def passed(self) -> bool:
        return self.covered == self.samples

    def as_dict(self) -> dict:
        return {"fraction": self.fraction, "covered": self.covered, "samples": self.samples,
                "eps_fill": self.eps_fill, "max_gap": self.max_gap, "passed": self.passed}


def disc_cloud(discs, n_radii: int = 16, n_angles: int = 48) -> np.ndarray:
    """Pooled interior and boundary samples of a list of discs, shape ``(m, n)``."""
    r = 1.0 - np.geomspace(1e-3, 1.0, n_radii)
    th = 2 * np.pi * np.arange(n_angles) / n_angles
    zeta = (r[:, None] * np.exp(1j * th)[None, :]).reshape(-1)
    chunks = []
    for d in discs:
        chunks.append(d(zeta).reshape(-1, d.n))
        chunks.append(d.trace.values)
    return np.concatenate(chunks)


def sample_shrunk_wedge(w: Wedge, r: float, count: int, seed: int = 0) -> np.ndarray:
    """Uniform samples of ``W_delta`` intersected with the ball of radius ``r`` (rejection)."""
    rng = np.random.default_rng(seed)
    n = w.n
    out = []
    while len(out) < count:
        g = rng.normal(size=(4 * count, 2 * n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        g *= r * rng.uniform(size=(4 * count, 1)) ** (1.0 / (2 * n))
        z = _to_complex(g, n)
        keep = np.all(w.shrunk_values(z) < 0, axis=-1)
        out.extend(z[keep])
    return np.asarray(out[:count])


def wedge_fill_check(discs, w: Wedge, r: float, n_samples: int, eps_fill: float,
                     seed: int = 0, n_radii: int = 16, n_angles: int = 48) -> FillReport:
    """Fraction of samples of ``W_delta`` within ``r`` that lie within ``eps_fill`` of a disc image."""
    discs = list(discs)
    if not discs:
        raise InvalidInput("disc sweep is empty")
    if w.n not in (1, 2):
        raise InvalidInput("wedge filling is checked for n = 1 or 2 only")
    cloud = disc_cloud(discs, n_radii, n_angles)
    tree = cKDTree(_to_real(cloud))
    pts = sample_shrunk_wedge(w, r, n_samples, seed)
    gap, _ = tree.query(_to_real(pts))
    covered = int(np.sum(gap <= eps_fill))
    return FillReport(covered / n_samples, covered, n_samples, eps_fill, float(gap.max()))


@dataclass
class KeyEstimateReport:
    constant: float
    refined_constant: float
    stable: bool
    slope: float
    slope_band: tuple
    passed: bool

    def as_dict(self) -> dict:
        return {"constant": self.constant, "refined_constant": self.refined_constant,
                "stable": self.stable, "slope": self.slope, "slope_band": list(self.slope_band),
                "passed": self.passed}


def holder_slope(f, discs, angles=(np.pi / 4, np.pi / 2, 3 * np.pi / 4), scales=range(4, 13)):
    """Regress ``log |f(z1) - f(z2)|`` on ``log |z1 - z2|`` along radii approaching the edge.

    ``z1 = H((1 - 2^-m) e^{i a})`` and ``z2 = H((1 - 2^-(m+1)) e^{i a})``
    straddle the dyadic scale ``2^-m``.  Returns ``(slope, stderr)``.
    """
    xs, ys = [], []
    for d in discs:
        if d.is_constant():
            continue
        for a in angles:
            for m in scales:
                z1 = d((1 - 2.0 ** -m) * np.exp(1j * a))
                z2 = d((1 - 2.0 ** -(m + 1)) * np.exp(1j * a))
                dz = np.linalg.norm(z1 - z2)
                df = np.linalg.norm(np.asarray(f(z1)) - np.asarray(f(z2)))
                if dz > 0 and df > 0:
                    xs.append(np.log(dz))
                    ys.append(np.log(df))
    if len(xs) < 3:
        raise InvalidInput("not enough non-degenerate disc samples for a slope fit")
    fit = stats.linregress(xs, ys)
    return float(fit.slope), float(fit.stderr)


def key_estimate_check(f, discs, rho_M: DefiningFunction, edge: ManifoldGraph, *,
                       edge_tol: float = 1e-9, window=(1e-4, 0.3), coarse_floor: float = 1e-2,
                       n_radii: int = 12, n_angles: int = 24, stability_tol: float = 0.1,
                       min_slope: float = 0.9, band_floor: float = 0.8) -> KeyEstimateReport:
    """Fit C in ``rho_M(f(z)) <= C dist(z, E)`` over disc images and measure Hoelder slopes.

    Hypotheses are checked first: ``rho_M >= 0`` and ``rho_M(f(e)) <= edge_tol``
    at edge samples ``e`` (the upper-semicircle traces of the discs and a
    grid on ``E`` spanning them).  ``C`` is fitted on the window with
    ``1 - |zeta| >= coarse_floor`` and again on the full window; it passes
    when both are finite, the refined one exceeds the coarse one by at most
    ``stability_tol``, and the slope fit is at least ``min_slope`` with
    ``slope - 2 stderr >= band_floor``.
    """
    discs = [d for d in discs]
    if not discs:
        raise InvalidInput("no discs supplied")
    n = edge.n
    edge_pts = np.concatenate([d.trace.values[d.grid.upper] for d in discs])
    lo, hi = edge_pts.real.min(axis=0), edge_pts.real.max(axis=0)
    extra = np.linspace(lo, hi, 33)
    edge_pts = np.concatenate([edge_pts, edge.point(extra)])
    on_edge = np.array([rho_M(np.asarray(f(e))) for e in edge_pts])
    if np.any(on_edge > edge_tol):
        raise HypothesisViolation(f"f(E) is not contained in M: max rho_M(f(e)) = {on_edge.max():.3g}")

    s, th, zeta = _polar(window, n_radii, n_angles)
    ratios = []
    for d in discs:
        if d.is_constant():
            continue
        Z = d(zeta).reshape(-1, n)
        vals = np.array([float(rho_M(np.asarray(f(z)))) for z in Z])
        if np.any(vals < -1e-14):
            raise HypothesisViolation("rho_M takes negative values")
        dist = np.array([dist_to_manifold(edge, z).distance for z in Z])
        ratios.append((vals / dist).reshape(s.size, -1))
    if not ratios:
        raise InvalidInput("all discs are constant")
    R = np.concatenate(ratios, axis=1)
    coarse = float(R[s >= coarse_floor].max())
    fine = float(R.max())
    stable = bool(np.isfinite(fine) and fine <= (1.0 + stability_tol) * coarse)
    slope, se = holder_slope(f, discs)
    band = (slope - 2 * se, slope + 2 * se)
    passed = bool(stable and np.isfinite(coarse) and slope >= min_slope and band[0] >= band_floor)
    return KeyEstimateReport(coarse, fine, stable, slope, band, passed)


# -- model holomorphic maps -------------------------------------------------


def disc_automorphism(a: complex, center: complex = -1j, radius: float = 1.0):
    """Automorphism ``z -> c + R m((z - c)/R)`` of the disc ``|z - c| < R``, ``m(w) = (w - a)/(1 - conj(a) w)``."""
    a = complex(a)
    if abs(a) >= 1:
        raise InvalidInput("automorphism parameter must satisfy |a| < 1")

    def f(z):
        w = (np.asarray(z, dtype=complex) - center) / radius
        return center + radius * (w - a) / (1 - np.conj(a) * w)

    return f


def identity_map(z):
    return np.asarray(z, dtype=complex)
