"""Picard iteration for the localized Bishop equation on the circle grid.

The unknown is a real ``(N, n)`` array ``u`` and the fixed-point map is

    Phi(u) = -T h_delta(u) - t * T psi + c

with ``T`` acting componentwise.  When ``sup |u| <= delta`` the cutoff is
inactive along the solution and ``u`` also solves the equation for the
original graph ``h``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, NoConvergence, NonContraction
from .manifolds import CollarFunction, CutoffGraph
from .spectral import CircleFunction, hilbert_values, holder_norm

EPS_PICARD = 1e-12
MAX_ITER = 500
NONCONTRACTION_STREAK = 10


@dataclass(frozen=True)
class DiscParameters:
    """Disc parameters ``c`` (centre on the edge), ``t >= 0`` (depth) and dilation ``d``."""

    c: np.ndarray
    t: np.ndarray
    d: float = 0.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        t = np.atleast_1d(np.asarray(self.t, dtype=float))
        if c.shape != t.shape or c.ndim != 1:
            raise InvalidInput("c and t must be vectors of the same length")
        if np.any(t < 0):
            raise InvalidInput("depth parameters t_j must be nonnegative")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(t)) and np.isfinite(self.d)):
            raise InvalidInput("parameters must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "d", float(self.d))

    @property
    def n(self) -> int:
        return self.c.size

    def as_dict(self) -> dict:
        return {"c": self.c.tolist(), "t": self.t.tolist(), "d": self.d}


@dataclass(frozen=True)
class ParameterGrid:
    """Rectangular grid over a box of ``(c, t)`` and a list of dilations.

    ``c_lo``/``c_hi`` and ``t_lo``/``t_hi`` are per-component bounds;
    ``resolution`` is the number of points per axis.
    """

    c_lo: tuple
    c_hi: tuple
    t_lo: tuple
    t_hi: tuple
    resolution: tuple = (3, 3)
    d_values: tuple = (0.0,)

    def __post_init__(self):
        for name in ("c_lo", "c_hi", "t_lo", "t_hi"):
            object.__setattr__(self, name, tuple(float(v) for v in np.atleast_1d(getattr(self, name))))
        n = len(self.c_lo)
        if not (len(self.c_hi) == len(self.t_lo) == len(self.t_hi) == n):
            raise InvalidInput("all box bounds need the same dimension")
        if any(lo > hi for lo, hi in zip(self.c_lo + self.t_lo, self.c_hi + self.t_hi)):
            raise InvalidInput("box lower bounds exceed upper bounds")
        if min(self.t_lo) < 0:
            raise InvalidInput("t box must lie in t >= 0")
        res = tuple(int(r) for r in np.atleast_1d(self.resolution))
        if len(res) == 1:
            res = res * 2
        if min(res) < 1:
            raise InvalidInput("resolution must be positive")
        object.__setattr__(self, "resolution", res)
        object.__setattr__(self, "d_values", tuple(float(d) for d in np.atleast_1d(self.d_values)))

    @property
    def n(self) -> int:
        return len(self.c_lo)

    def c_axes(self):
        return [np.linspace(lo, hi, self.resolution[0]) for lo, hi in zip(self.c_lo, self.c_hi)]

    def t_axes(self):
        return [np.linspace(lo, hi, self.resolution[1]) for lo, hi in zip(self.t_lo, self.t_hi)]

    def spacing(self) -> tuple[float, float]:
        """Largest axis spacing in the c and t directions."""
        def sp(lo, hi, r):
            return max((h - l) / (r - 1) if r > 1 else 0.0 for l, h in zip(lo, hi))
        return sp(self.c_lo, self.c_hi, self.resolution[0]), sp(self.t_lo, self.t_hi, self.resolution[1])

    def points(self, d: float | None = None) -> list[DiscParameters]:
        """All grid points in deterministic (d, c, t) lexicographic order."""
        ds = self.d_values if d is None else (float(d),)
        out = []
        for dv in ds:
            for c in itertools.product(*self.c_axes()):
                for t in itertools.product(*self.t_axes()):
                    out.append(DiscParameters(np.array(c), np.array(t), dv))
        return out


@dataclass(frozen=True)
class BishopSolution:
    params: DiscParameters
    u: CircleFunction
    iterations: int
    contraction_factor: float
    localized: bool
    residual: float
    delta: float
    history: tuple = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "iterations": self.iterations,
            "contraction_factor": self.contraction_factor,
            "localized": self.localized,
            "residual": self.residual,
            "sup_u": self.u.sup(),
        }


def _forcing(collar: CollarFunction, params: DiscParameters) -> np.ndarray:
    if collar.n != params.n:
        raise InvalidInput(f"collar has {collar.n} components but parameters have {params.n}")
    return params.c[None, :] - params.t[None, :] * collar.conjugate.values


def _phi(values, g: CutoffGraph, forcing, grid):
    return forcing - hilbert_values(g.h(values), grid)


def picard_step(u: CircleFunction, g: CutoffGraph, collar: CollarFunction,
                params: DiscParameters) -> CircleFunction:
    """One application of ``Phi(u) = -T h_delta(u) - t T psi + c``."""
    if u.grid != collar.grid or u.n != g.n:
        raise InvalidInput("u, cutoff graph and collar must share grid and dimension")
    return CircleFunction(u.grid, _phi(u.values, g, _forcing(collar, params), u.grid))


def solve(g: CutoffGraph, collar: CollarFunction, params: DiscParameters, *,
          tol: float = EPS_PICARD, max_iter: int = MAX_ITER, u0=None) -> BishopSolution:
    """Fixed point of the Picard map, started from ``u0`` (default ``u = c``).

    Iterates until successive iterates differ by at most
    ``max(tol, 10 eps |u|)`` in the grid sup-norm.  ``contraction_factor`` is
    the largest ratio of successive step sizes observed while steps are above
    the roundoff floor.

    Raises
    ------
    NonContraction
        The product of the last ten step ratios exceeds 1 (no net
        contraction over a ten-step window), or iterates blow up.
    NoConvergence
        ``max_iter`` steps without reaching the floor.
    """
    grid = collar.grid
    forcing = _forcing(collar, params)
    if g.n != params.n:
        raise InvalidInput("cutoff graph and parameters disagree on dimension")
    if u0 is None:
        u = np.broadcast_to(params.c, (grid.N, params.n)).astype(float)
    else:
        arr = np.asarray(u0.values if isinstance(u0, CircleFunction) else u0, dtype=float)
        if arr.ndim == 1 and arr.shape[0] == grid.N:
            arr = arr[:, None]
        u = np.broadcast_to(arr, (grid.N, params.n)).copy()

    eps = np.finfo(float).eps
    prev = None
    ratios = []
    history = []
    for it in range(1, max_iter + 1):
        new = _phi(u, g, forcing, grid)
        step = float(np.max(np.abs(new - u)))
        if not np.isfinite(step):
            raise NonContraction(f"iterates diverged at step {it} for {params.as_dict()}")
        scale = max(1.0, float(np.max(np.abs(new))))
        floor = max(tol, 10.0 * eps * scale)
        history.append(step)
        if prev is not None and prev > 1e3 * eps * scale and step > 1e2 * eps * scale:
            ratio = step / prev
            ratios.append(ratio)
            window = ratios[-NONCONTRACTION_STREAK:]
            if len(window) == NONCONTRACTION_STREAK and float(np.prod(window)) > 1.0:
                raise NonContraction(
                    f"no net contraction over {NONCONTRACTION_STREAK} steps "
                    f"(window factor {float(np.prod(window)):.3g}) for {params.as_dict()}"
                )
        u, prev = new, step
        if step <= floor:
            break
    else:
        raise NoConvergence(
            f"no convergence in {max_iter} Picard steps (last step {step:.3g}) for {params.as_dict()}"
        )

    residual = float(np.max(np.abs(u - _phi(u, g, forcing, grid))))
    sol_u = CircleFunction(grid, u)
    sup_u = float(np.max(np.linalg.norm(u, axis=1)))
    return BishopSolution(
        params=params,
        u=sol_u,
        iterations=it,
        contraction_factor=float(max(ratios, default=0.0)),
        localized=sup_u <= g.delta,
        residual=residual,
        delta=g.delta,
        history=tuple(history),
    )


def solve_many(g: CutoffGraph, collar: CollarFunction, points, **kwargs) -> list[BishopSolution]:
    return [solve(g, collar, p, **kwargs) for p in points]


def uniqueness_spread(g: CutoffGraph, collar: CollarFunction, params: DiscParameters,
                      seed: int = 0) -> float:
    """Sup-norm spread of fixed points reached from ``u = c``, ``u = 0`` and a random start."""
    rng = np.random.default_rng(seed)
    N, n = collar.grid.N, params.n
    starts = [None, np.zeros((N, n)), rng.uniform(-g.delta, g.delta, size=(N, n))]
    sols = [solve(g, collar, params, u0=s).u.values for s in starts]
    return float(max(np.max(np.abs(a - sols[0])) for a in sols[1:]))


def admissible_scale(g: CutoffGraph, collar: CollarFunction, fraction: float = 0.9,
                     iterations: int = 30) -> float:
    """Largest ``s`` such that corner parameters ``|c_j| = s``, ``t_j = s`` stay localized.

    Found by bisection with actual solves at the box corners; the box
    ``c in [-s, s]^n``, ``t in [0, s]^n`` is the empirically admissible
    parameter neighbourhood reported for a configuration.
    """
    n = g.n

    def ok(s):
        for signs in itertools.product((-1.0, 1.0), repeat=n):
            p = DiscParameters(s * np.array(signs), s * np.ones(n))
            try:
                sol = solve(g, collar, p)
            except (NonContraction, NoConvergence):
                return False
            if sol.u.sup() > fraction * g.delta:
                return False
        return True

    lo, hi = 0.0, g.delta
    if ok(hi):
        return hi
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class RegularityReport:
    """Finite-difference norms per direction and step level."""

    p: float
    steps: dict
    norms: dict
    cauchy: dict

    def drift(self, direction: str) -> float:
        v = np.asarray(self.norms[direction])
        return float((v.max() - v.min()) / max(v.min(), 1e-300))

    def bound(self) -> float:
        return float(max(max(v) for v in self.norms.values()))

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "steps": self.steps,
            "norms": self.norms,
            "cauchy": self.cauchy,
            "drift": {k: self.drift(k) for k in self.norms},
            "bound": self.bound(),
        }


def _lp_over(arrs, p):
    # normalized L^p over (parameter grid) x (circle), summed over components
    stack = np.stack(arrs)
    return float(np.sum(np.mean(np.abs(stack) ** p, axis=(0, 1)) ** (1.0 / p)))


def finite_difference_regularity_probe(g: CutoffGraph, collar: CollarFunction,
                                       grid: ParameterGrid, p: float,
                                       levels: int = 3) -> RegularityReport:
    """L^p norms of difference quotients of ``u`` in every parameter direction and in theta.

    Parameter steps are ``width / 16`` halved ``levels - 1`` times, where
    ``width`` is the box width along the direction; theta steps shift by
    ``N / 64`` nodes, halved likewise (so ``N >= 256`` for three levels).  Bounded, non-drifting
    norms with shrinking successive differences are the discrete counterpart
    of membership in ``W^{1,p}``.
    """
    if not p > 1:
        raise InvalidInput("p must exceed 1")
    N = collar.grid.N
    theta_shifts = [N // (64 * 2 ** k) for k in range(levels)]
    if levels < 3 or theta_shifts[-1] < 1:
        raise InvalidInput("grid too coarse for three finite-difference levels")
    n = grid.n
    points = grid.points(d=grid.d_values[0])
    base = {i: solve(g, collar, pt).u.values for i, pt in enumerate(points)}

    directions = [(f"c{j + 1}", "c", j) for j in range(n)] + [(f"t{j + 1}", "t", j) for j in range(n)]
    steps, norms, cauchy = {}, {}, {}
    for name, which, j in directions:
        lo = (grid.c_lo if which == "c" else grid.t_lo)[j]
        hi = (grid.c_hi if which == "c" else grid.t_hi)[j]
        width = hi - lo
        if width <= 0:
            raise InvalidInput(f"box has zero width in direction {name}")
        hs = [width / 16 / 2 ** k for k in range(levels)]
        quotients = []
        for h in hs:
            q = []
            for i, pt in enumerate(points):
                c, t = pt.c.copy(), pt.t.copy()
                (c if which == "c" else t)[j] += h
                moved = solve(g, collar, DiscParameters(c, t, pt.d)).u.values
                q.append((moved - base[i]) / h)
            quotients.append(q)
        steps[name] = hs
        norms[name] = [_lp_over(q, p) for q in quotients]
        cauchy[name] = [_lp_over([a - b for a, b in zip(q1, q2)], p)
                        for q1, q2 in zip(quotients, quotients[1:])]

    dtheta = 2 * np.pi / N
    hs = [s * dtheta for s in theta_shifts]
    quotients = [[(np.roll(u, -s, axis=0) - u) / h for u in base.values()] for s, h in zip(theta_shifts, hs)]
    steps["theta"] = hs
    norms["theta"] = [_lp_over(q, p) for q in quotients]
    cauchy["theta"] = [_lp_over([a - b for a, b in zip(q1, q2)], p)
                       for q1, q2 in zip(quotients, quotients[1:])]
    return RegularityReport(p=p, steps=steps, norms=norms, cauchy=cauchy)


def holder_report(sol: BishopSolution, alphas) -> dict:
    """Grid Hoelder norms of the solution for each exponent."""
    return {float(a): holder_norm(sol.u, float(a)) for a in alphas}
