"""Analytic discs glued to a totally real graph along the upper semicircle."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import AttachmentFailure, HolomorphyFailure, InvalidInput, NotLocalized
from .manifolds import (
    CollarFunction,
    CutoffGraph,
    DilationFamily,
    choose_tau_delta,
    jacobian_inf_norm,
)
from .solver import EPS_PICARD, BishopSolution, DiscParameters, solve
from .spectral import (
    CircleFunction,
    _check_interior,
    fourier_analyze,
    holder_norm,
    negative_frequency_residual,
    sobolev_norm,
)


def default_tolerance(eps_picard: float = EPS_PICARD, grad_bound: float = 0.0) -> float:
    return max(1e-8, 100.0 * eps_picard * (1.0 + grad_bound))


@dataclass(frozen=True, eq=False)
class AnalyticDisc:
    """Boundary trace ``U`` of a disc and the holomorphic extension ``H = P U``."""

    params: DiscParameters
    trace: CircleFunction
    attach_residual: float
    holo_residual: float
    kind: str = "bishop"
    holder_norms: dict = field(default_factory=dict)

    @property
    def grid(self):
        return self.trace.grid

    @property
    def n(self) -> int:
        return self.trace.n

    @cached_property
    def taylor(self) -> np.ndarray:
        """Coefficients of ``zeta^k`` for ``0 <= k < N/2``."""
        c = fourier_analyze(self.trace).coeffs
        return c[: self.grid.N // 2]

    def __call__(self, zeta) -> np.ndarray:
        return evaluate_interior(self, zeta)

    def is_constant(self, tol: float = 1e-14) -> bool:
        return float(np.max(np.abs(self.taylor[1:]), initial=0.0)) <= tol

    def as_dict(self, include_trace: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "params": self.params.as_dict(),
            "N": self.grid.N,
            "attach_residual": self.attach_residual,
            "holo_residual": self.holo_residual,
            "holder_norms": {str(k): v for k, v in self.holder_norms.items()},
        }
        if include_trace:
            out["trace"] = {
                "re": self.trace.values.real.T.tolist(),
                "im": self.trace.values.imag.T.tolist(),
            }
        return out


def _attach_residual(trace: CircleFunction, graph) -> float:
    up = trace.values[trace.grid.upper]
    return float(np.max(np.abs(up.imag - graph.h(up.real))))


def _assemble(params, trace, graph, kind, tol_holo, tol_attach, alphas):
    attach = _attach_residual(trace, graph)
    holo = negative_frequency_residual(trace)
    if holo > tol_holo:
        raise HolomorphyFailure(
            f"negative-frequency residual {holo:.3g} exceeds {tol_holo:.3g} for {params.as_dict()}"
        )
    if attach > tol_attach:
        raise AttachmentFailure(
            f"attachment residual {attach:.3g} exceeds {tol_attach:.3g} for {params.as_dict()}"
        )
    norms = {float(a): holder_norm(trace, float(a)) for a in alphas}
    return AnalyticDisc(params, trace, attach, holo, kind, norms)


def build_disc(sol: BishopSolution, graph, collar: CollarFunction, *,
               tol_holo: float | None = None, tol_attach: float | None = None,
               alphas=()) -> AnalyticDisc:
    """Assemble ``U = u + i h(u) + i t psi`` and certify holomorphy and attachment.

    ``graph`` is the original manifold (or its cutoff); on a localized
    solution both give the same trace.
    """
    if not sol.localized:
        raise NotLocalized(
            f"sup |u| = {sol.u.sup():.3g} exceeds delta = {sol.delta:.3g} for {sol.params.as_dict()}"
        )
    base = graph.base if isinstance(graph, CutoffGraph) else graph
    u = sol.u.values
    grad = float(np.max(jacobian_inf_norm(base.jacobian(u))))
    tol = default_tolerance(grad_bound=grad)
    tol_holo = tol if tol_holo is None else tol_holo
    tol_attach = tol if tol_attach is None else tol_attach
    im = base.h(u) + sol.params.t[None, :] * collar.psi.values
    trace = CircleFunction(sol.u.grid, u + 1j * im)
    return _assemble(sol.params, trace, base, "bishop", tol_holo, tol_attach, alphas)


def flat_trace(params: DiscParameters, collar: CollarFunction) -> CircleFunction:
    t = params.t[None, :]
    values = params.c[None, :] - t * collar.conjugate.values + 1j * t * collar.psi.values
    return CircleFunction(collar.grid, values)


def flat_disc(params: DiscParameters, collar: CollarFunction, *,
              tol_holo: float | None = None, alphas=()) -> AnalyticDisc:
    """Closed-form disc ``U = c - t T psi + i t psi`` attached to ``R^n``."""
    from .manifolds import flat

    tol = default_tolerance() if tol_holo is None else tol_holo
    return _assemble(params, flat_trace(params, collar), flat(params.n), "flat", tol, tol, alphas)


def evaluate_interior(disc: AnalyticDisc, zeta) -> np.ndarray:
    """``H(zeta) = sum_{0 <= k < N/2} a_k zeta^k``; shape ``zeta.shape + (n,)``."""
    z = _check_interior(zeta)
    a = disc.taylor
    zf = z.reshape(-1)
    # Horner in the highest power first
    out = np.zeros((zf.size, disc.n), dtype=complex)
    for coef in a[::-1]:
        out = out * zf[:, None] + coef[None, :]
    return out.reshape(z.shape + (disc.n,))


def derivative_interior(disc: AnalyticDisc, zeta) -> np.ndarray:
    """Complex derivative ``H'(zeta)``."""
    z = _check_interior(zeta)
    a = disc.taylor
    k = np.arange(a.shape[0])
    da = (a * k[:, None])[1:]
    zf = z.reshape(-1)
    out = np.zeros((zf.size, disc.n), dtype=complex)
    for coef in da[::-1]:
        out = out * zf[:, None] + coef[None, :]
    return out.reshape(z.shape + (disc.n,))


def cauchy_riemann_defect(disc: AnalyticDisc, radii=(0.3, 0.6, 0.9), angles: int = 16,
                          h: float = 1e-5) -> float:
    """Max of ``|dH/dx + i dH/dy|`` by centred differences on a polar sample grid.

    Zero for holomorphic ``H``; the finite-difference error is ``O(h^2)``.
    """
    r = np.asarray(radii)[:, None]
    th = 2 * np.pi * np.arange(angles)[None, :] / angles
    z = (r * np.exp(1j * th)).reshape(-1)
    dx = (evaluate_interior(disc, z + h) - evaluate_interior(disc, z - h)) / (2 * h)
    dy = (evaluate_interior(disc, z + 1j * h) - evaluate_interior(disc, z - 1j * h)) / (2 * h)
    return float(np.max(np.abs(dx + 1j * dy)))


@dataclass
class StabilitySweep:
    """Deviations ``||U(c, t, d) - U(c, t, 0)||_{W^{1,p}}`` along a list of dilations."""

    params: DiscParameters
    p: float
    d_values: list
    deviations: list
    c1_norms: list
    delta: float
    tau: float

    def is_decreasing(self) -> bool:
        devs = self.deviations
        return all(b < a for a, b in zip(devs, devs[1:]))

    def decay_slope(self) -> float:
        """Least-squares slope of ``log deviation`` against ``log d`` (nonzero d only)."""
        d = np.array(self.d_values, dtype=float)
        v = np.array(self.deviations, dtype=float)
        m = (d != 0) & (v > 0)
        return float(np.polyfit(np.log(np.abs(d[m])), np.log(v[m]), 1)[0])

    def linear_constant(self) -> list:
        """``deviation / |d|`` per nonzero d (stable when decay is linear)."""
        return [v / abs(d) for d, v in zip(self.d_values, self.deviations) if d != 0]

    def c1_constant(self) -> float:
        """Smallest C' with ``deviation <= C' ||h(., d)||_{C^1}`` over the sweep."""
        ratios = [v / c for v, c in zip(self.deviations, self.c1_norms) if c > 0]
        return float(max(ratios, default=0.0))

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "p": self.p,
            "d": list(self.d_values),
            "deviation": list(self.deviations),
            "c1_norm": list(self.c1_norms),
            "decreasing": self.is_decreasing(),
            "slope": self.decay_slope() if len(self.d_values) > 1 else None,
            "delta": self.delta,
            "tau": self.tau,
        }


def uniform_cutoffs(fam: DilationFamily, d_values, T_norm: float,
                    contraction_target: float = 0.5) -> dict:
    """Cutoffs for every ``h(., d)`` sharing the smallest admissible delta and one tau.

    A common delta makes the contraction certificate and the localization
    box independent of d.
    """
    per_d = {float(d): choose_tau_delta(fam.at(d), contraction_target, T_norm) for d in d_values}
    delta = min(g.delta for g in per_d.values())
    tau = contraction_target / T_norm
    return {d: CutoffGraph(fam.at(d), delta, tau) for d in per_d}


def stability_sweep(fam: DilationFamily, params: DiscParameters, d_values, p: float,
                    collar: CollarFunction, contraction_target: float = 0.5,
                    c1_radius: float | None = None) -> StabilitySweep:
    """Sobolev deviation of the dilated discs from the flat disc with the same ``(c, t)``."""
    if not p > 1:
        raise InvalidInput("p must exceed 1")
    d_values = [float(d) for d in d_values]
    T_norm = collar.grid.hilbert_sup_norm
    cutoffs = uniform_cutoffs(fam, list(d_values) + [0.0], T_norm, contraction_target)
    any_cut = next(iter(cutoffs.values()))
    reference = flat_trace(params, collar)
    radius = any_cut.delta if c1_radius is None else c1_radius
    devs, c1 = [], []
    for d in d_values:
        g = cutoffs[d]
        pd = DiscParameters(params.c, params.t, d)
        try:
            disc = build_disc(solve(g, collar, pd), g, collar)
        except Exception as exc:
            raise type(exc)(f"stability sweep failed at d = {d}: {exc}") from exc
        devs.append(sobolev_norm(disc.trace - reference, p))
        c1.append(g.base.c1_norm(radius))
    return StabilitySweep(params, p, d_values, devs, c1, any_cut.delta, any_cut.tau)


def grid_deviation(fam: DilationFamily, points, d: float, p: float, collar: CollarFunction,
                   contraction_target: float = 0.5) -> float:
    """Deviation aggregated over a parameter grid: mean of the per-point ``W^{1,p}`` powers.

    The parameter-direction derivatives are not included; see
    :func:`bishop_discs.solver.finite_difference_regularity_probe` for those.
    """
    T_norm = collar.grid.hilbert_sup_norm
    g = uniform_cutoffs(fam, [d, 0.0], T_norm, contraction_target)[float(d)]
    acc = 0.0
    for pt in points:
        pd = DiscParameters(pt.c, pt.t, d)
        disc = build_disc(solve(g, collar, pd), g, collar)
        acc += sobolev_norm(disc.trace - flat_trace(pd, collar), p) ** p
    return float((acc / len(points)) ** (1.0 / p))
