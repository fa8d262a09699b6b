"""Batch driver: sweeps, invariant suites and deterministic report files.

Every report is written with sorted keys and fixed float formatting so that
two runs of the same scenario produce byte-identical ``report.json``; wall
clock data goes to the ``metadata.json`` sidecar instead.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import numpy as np

from .config import ScenarioConfig
from .discs import AnalyticDisc, build_disc, default_tolerance, flat_disc, stability_sweep
from .errors import BishopError, HypothesisViolation, InvalidInput
from .geometry import (
    disc_automorphism,
    sphere_square,
    flat_edge_square,
    half_space,
    hopf_bound_check,
    identity_map,
    key_estimate_check,
    model_wedge,
    graph_wedge,
    unit_ball,
    wedge_fill_check,
    wedge_membership,
    sample_shrunk_wedge,
)
from .manifolds import CutoffGraph, DilationFamily, build_collar, choose_tau_delta, flat, from_spec, sphere
from .solver import (
    DiscParameters,
    ParameterGrid,
    finite_difference_regularity_probe,
    solve,
    uniqueness_spread,
)
from .spectral import (
    CircleFunction,
    CircleGrid,
    FourierCoeffs,
    fourier_analyze,
    fourier_synthesize,
    hilbert_values,
    poisson_extend,
)

REPORT_SCHEMA = "bishop-discs/run-report/v1"
SUITES = ("spectral", "bishop", "stability", "wedge", "prop41")
UNIQUENESS_TOL = 1e-10
DRIFT_TOL = 0.1
STABILITY_DS = (0.5, 0.25, 0.125, 0.0625)
AUTOMORPHISM_A = 0.3 + 0.2j


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to ``None``."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


@dataclass
class RunReport:
    command: str
    config: dict
    records: list = field(default_factory=list)
    invariants: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    suite: str | None = None
    discs: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(inv["passed"] for inv in self.invariants)

    def add_check(self, name, passed, value=None, threshold=None, detail=None):
        self.invariants.append({"name": name, "passed": bool(passed), "value": value,
                                "threshold": threshold, "detail": detail})

    def to_dict(self) -> dict:
        return _clean({
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "suite": self.suite,
            "config": self.config,
            "records": self.records,
            "invariants": self.invariants,
            "constants": self.constants,
            "failures": self.failures,
            "passed": self.passed,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"


# -- schema -------------------------------------------------------------------


def load_schema() -> dict:
    text = resources.files("bishop_discs").joinpath("schemas/run_report.schema.json").read_text()
    return json.loads(text)


def validate_report(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` violates the shipped schema."""
    import jsonschema

    jsonschema.validate(doc, load_schema())


# -- scenario context ---------------------------------------------------------


@dataclass
class _Context:
    grid: CircleGrid
    collar: object
    family: DilationFamily
    cutoffs: dict
    T_norm: float


_CONTEXTS: dict = {}


def make_cutoff(graph, cfg: ScenarioConfig, T_norm: float) -> CutoffGraph:
    """Cutoff for one graph, honouring the ``tau``/``delta`` overrides.

    A ``tau`` with ``tau * T_norm >= 1`` carries no contraction certificate;
    the cutoff radius then defaults to 1 unless ``delta`` is given too.
    """
    if cfg.delta is not None:
        tau = cfg.tau if cfg.tau is not None else cfg.contraction_target / T_norm
        return CutoffGraph(graph, cfg.delta, tau)
    if cfg.tau is not None:
        q = cfg.tau * T_norm
        if q < 1.0:
            return choose_tau_delta(graph, q, T_norm)
        return CutoffGraph(graph, 1.0, cfg.tau)
    return choose_tau_delta(graph, cfg.contraction_target, T_norm)


def _context(cfg: ScenarioConfig) -> _Context:
    key = json.dumps(cfg.to_dict(), sort_keys=True)
    if key not in _CONTEXTS:
        grid = CircleGrid(cfg.grid_n)
        fam = DilationFamily(from_spec(cfg.manifold))
        T_norm = grid.hilbert_sup_norm
        cutoffs = {d: make_cutoff(fam.at(d), cfg, T_norm) for d in cfg.d_values}
        _CONTEXTS.clear()
        _CONTEXTS[key] = _Context(grid, build_collar(grid, cfg.n), fam, cutoffs, T_norm)
    return _CONTEXTS[key]


def parameter_grid(cfg: ScenarioConfig) -> ParameterGrid:
    return ParameterGrid(cfg.c_lo, cfg.c_hi, cfg.t_lo, cfg.t_hi, tuple(cfg.resolution), tuple(cfg.d_values))


def _domain_rho(cfg: ScenarioConfig):
    dom = cfg.domain
    if dom is None:
        raise InvalidInput("this diagnostic needs a 'domain' entry in the scenario")
    if dom["kind"] == "half_plane":
        return half_space(cfg.n, int(dom.get("j", 0)))
    center = dom.get("center")
    if center is not None:
        center = [complex(c[0], c[1]) if isinstance(c, list) else complex(c) for c in center]
    return unit_ball(cfg.n, center, float(dom.get("radius", 1.0)))


# -- per-point work -------------------------------------------------------------


def _point(args):
    cfg, index, params = args
    ctx = _context(cfg)
    g = ctx.cutoffs[params.d]
    rec = {"index": index, "params": params.as_dict(), "status": "failed", "error": None,
           "solver": None, "disc": None, "uniqueness_spread": None}
    disc = None
    try:
        sol = solve(g, ctx.collar, params, tol=cfg.tol_picard)
        rec["solver"] = sol.as_dict()
        rec["solver"].pop("params")
        disc = build_disc(sol, g, ctx.collar, tol_holo=cfg.tol_holo, tol_attach=cfg.tol_attach,
                          alphas=cfg.holder_alphas)
        rec["disc"] = disc.as_dict(include_trace=False)
        rec["disc"].pop("params")
        if cfg.uniqueness:
            rec["uniqueness_spread"] = uniqueness_spread(g, ctx.collar, params, seed=cfg.seed + index)
        rec["status"] = "accepted"
    except BishopError as exc:
        rec["error"] = {"type": type(exc).__name__, "message": str(exc)}
        disc = None
    return rec, disc


def _map(func, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))


def _sweep(cfg: ScenarioConfig, jobs: int):
    points = parameter_grid(cfg).points()
    out = _map(_point, [(cfg, i, p) for i, p in enumerate(points)], jobs)
    return [r for r, _ in out], [d for _, d in out]


def _fitted_constants(ctx: _Context, cfg: ScenarioConfig, records) -> dict:
    consts = {
        "T_norm": ctx.T_norm,
        "cutoffs": [{"d": d, "tau": g.tau, "delta": g.delta, "certified_factor": g.tau * ctx.T_norm}
                    for d, g in sorted(ctx.cutoffs.items())],
    }
    acc = [r for r in records if r["status"] == "accepted"]
    if acc:
        consts["max_contraction_factor"] = max(r["solver"]["contraction_factor"] for r in acc)
        consts["max_attach_residual"] = max(r["disc"]["attach_residual"] for r in acc)
        consts["max_holo_residual"] = max(r["disc"]["holo_residual"] for r in acc)
        consts["holder_bound"] = {str(a): max(r["disc"]["holder_norms"][str(a)] for r in acc)
                                  for a in cfg.holder_alphas}
    return consts


# -- run ------------------------------------------------------------------------


def run(cfg: ScenarioConfig, jobs: int = 1) -> RunReport:
    """Solve, build and diagnose every grid point; failures are recorded, never raised."""
    report = RunReport("run", cfg.to_dict())
    try:
        ctx = _context(cfg)
    except BishopError as exc:
        report.failures.append({"index": None, "type": type(exc).__name__, "message": str(exc)})
        report.add_check("setup", False, detail=str(exc))
        return report

    records, discs = _sweep(cfg, jobs)
    report.records = records
    report.discs = [d for d in discs if d is not None]
    report.failures = [{"index": r["index"], "type": r["error"]["type"], "message": r["error"]["message"]}
                       for r in records if r["status"] == "failed"]
    report.constants = _fitted_constants(ctx, cfg, records)
    n_acc = sum(r["status"] == "accepted" for r in records)
    report.add_check("acceptance", n_acc == len(records), value=n_acc, threshold=len(records))

    solved = [r for r in records if r["solver"] is not None]
    worst = max((r["solver"]["contraction_factor"] for r in solved), default=None)
    bound = min(g.tau for g in ctx.cutoffs.values()) * ctx.T_norm
    report.add_check("contraction", bool(solved) and bound < 1.0 and worst <= bound,
                     value=worst, threshold=bound)
    if cfg.uniqueness:
        spreads = [r["uniqueness_spread"] for r in records if r["uniqueness_spread"] is not None]
        worst_u = max(spreads, default=None)
        report.add_check("uniqueness", bool(spreads) and worst_u <= UNIQUENESS_TOL,
                         value=worst_u, threshold=UNIQUENESS_TOL)

    if cfg.regularity:
        _regularity_check(report, ctx, cfg)
    if cfg.stability:
        _stability_check(report, ctx, cfg)
    if cfg.hopf:
        _hopf_check(report, cfg, report.discs)
    return report


def _guarded(report: RunReport, name: str, func):
    try:
        func()
    except BishopError as exc:
        report.failures.append({"index": None, "type": type(exc).__name__, "message": str(exc)})
        report.add_check(name, False, detail=f"{type(exc).__name__}: {exc}")


def _regularity_check(report, ctx, cfg):
    def go():
        d = cfg.d_values[0]
        grid = parameter_grid(cfg)
        rr = finite_difference_regularity_probe(ctx.cutoffs[d], ctx.collar, grid, cfg.p)
        drift = max(rr.drift(k) for k in rr.norms)
        report.constants["regularity"] = rr.as_dict()
        report.add_check("regularity", drift <= DRIFT_TOL, value=drift, threshold=DRIFT_TOL)
    _guarded(report, "regularity", go)


def _box_center(cfg) -> DiscParameters:
    c = 0.5 * (np.array(cfg.c_lo) + np.array(cfg.c_hi))
    t = 0.5 * (np.array(cfg.t_lo) + np.array(cfg.t_hi))
    return DiscParameters(c, t)


def _stability_check(report, ctx, cfg):
    def go():
        ds = sorted({d for d in cfg.d_values if d != 0}, key=abs, reverse=True)
        if len(ds) < 2:
            ds = list(STABILITY_DS)
        sw = stability_sweep(ctx.family, _box_center(cfg), ds, cfg.p, ctx.collar,
                             cfg.contraction_target)
        report.constants["stability"] = sw.as_dict()
        slope = sw.decay_slope()
        report.add_check("stability_decreasing", sw.is_decreasing(), value=sw.deviations)
        report.add_check("stability_slope", slope >= 0.9, value=slope, threshold=0.9)
    _guarded(report, "stability", go)


def _refine(disc: AnalyticDisc, cfg: ScenarioConfig) -> AnalyticDisc:
    grid = CircleGrid(2 * disc.grid.N)
    collar = build_collar(grid, disc.n)
    fam = DilationFamily(from_spec(cfg.manifold))
    if disc.kind == "flat":
        return flat_disc(disc.params, collar)
    g = make_cutoff(fam.at(disc.params.d), cfg, grid.hilbert_sup_norm)
    return build_disc(solve(g, collar, disc.params, tol=cfg.tol_picard), g, collar,
                      tol_holo=cfg.tol_holo, tol_attach=cfg.tol_attach)


def hopf_reports(cfg: ScenarioConfig, discs):
    rho = _domain_rho(cfg)
    fam = DilationFamily(from_spec(cfg.manifold))
    out = []
    for disc in discs:
        if disc.is_constant():
            continue
        edge = fam.at(disc.params.d)
        out.append((disc, hopf_bound_check(disc, rho, edge, refined=_refine(disc, cfg))))
    return out


def _hopf_check(report, cfg, discs):
    def go():
        reps = hopf_reports(cfg, discs)
        consts = [r.constant for _, r in reps]
        report.constants["hopf"] = [dict(r.as_dict(), params=d.params.as_dict()) for d, r in reps]
        ok = bool(reps) and all(r.passed for _, r in reps)
        report.add_check("hopf", ok, value=min(consts, default=None), threshold=0.0)
    _guarded(report, "hopf", go)


# -- verify suites ----------------------------------------------------------------


def verify(suite: str, cfg: ScenarioConfig, jobs: int = 1) -> RunReport:
    """Run one named invariant suite; unknown names raise :class:`InvalidInput`."""
    if suite not in SUITES:
        raise InvalidInput(f"unknown suite {suite!r}; expected one of {SUITES}")
    report = RunReport("verify", cfg.to_dict(), suite=suite)
    func = {"spectral": _verify_spectral, "bishop": _verify_bishop, "stability": _verify_stability,
            "wedge": _verify_wedge, "prop41": _verify_key_estimate}[suite]
    _guarded(report, suite, lambda: func(report, cfg, jobs))
    return report


def _verify_spectral(report, cfg, jobs):
    grid = CircleGrid(cfg.grid_n)
    th = grid.theta
    ks = range(1, grid.N // 4 + 1)
    err = 0.0
    for k in ks:
        err = max(err, np.max(np.abs(hilbert_values(np.cos(k * th)[:, None], grid)[:, 0] - np.sin(k * th))))
        err = max(err, np.max(np.abs(hilbert_values(np.sin(k * th)[:, None], grid)[:, 0] + np.cos(k * th))))
    report.add_check("conjugate_pairs", err <= 1e-12, value=float(err), threshold=1e-12)

    rng = np.random.default_rng(cfg.seed)
    coeffs = np.zeros(grid.N, dtype=complex)
    m = grid.N // 4
    coeffs[1:m + 1] = rng.normal(size=m) + 1j * rng.normal(size=m)
    coeffs[-m:] = np.conj(coeffs[1:m + 1][::-1])
    f = fourier_synthesize(FourierCoeffs(grid, coeffs[:, None]), real=True)
    tt = hilbert_values(hilbert_values(f.values, grid), grid)
    e2 = float(np.max(np.abs(tt + f.values)))
    report.add_check("T_squared", e2 <= 1e-12, value=e2, threshold=1e-12)

    rt = float(np.max(np.abs(fourier_synthesize(fourier_analyze(f), real=True).values - f.values)))
    report.add_check("round_trip", rt <= 1e-12, value=rt, threshold=1e-12)

    r = np.linspace(0.0, 0.95, 7)
    zeta = r[:, None] * np.exp(1j * th[:: max(1, grid.N // 32)])[None, :]
    ep = 0.0
    for k in (1, 3, m):
        u = CircleFunction(grid, np.cos(k * th))
        exact = (np.abs(zeta) ** k) * np.cos(k * np.angle(zeta))
        ep = max(ep, float(np.max(np.abs(poisson_extend(u, zeta)[..., 0] - exact))))
    report.add_check("poisson", ep <= 1e-12, value=ep, threshold=1e-12)
    report.constants["T_norm"] = grid.hilbert_sup_norm


def _verify_bishop(report, cfg, jobs):
    ctx = _context(cfg)
    # the flat closed form is reached in one Picard step
    gflat = CutoffGraph(flat(cfg.n), 1.0, cfg.contraction_target / ctx.T_norm)
    err = 0.0
    for p in parameter_grid(cfg).points(d=0.0):
        sol = solve(gflat, ctx.collar, p)
        closed = p.c[None, :] - p.t[None, :] * ctx.collar.conjugate.values
        err = max(err, float(np.max(np.abs(sol.u.values - closed))))
        if sol.iterations > 2:
            err = math.inf
    report.add_check("flat_closed_form", err <= 1e-12, value=err, threshold=1e-12)

    records, discs = _sweep(cfg, jobs)
    report.records = records
    report.failures = [{"index": r["index"], "type": r["error"]["type"], "message": r["error"]["message"]}
                       for r in records if r["status"] == "failed"]
    report.constants = _fitted_constants(ctx, cfg, records)
    acc = [r for r in records if r["status"] == "accepted"]
    report.add_check("acceptance", len(acc) == len(records), value=len(acc), threshold=len(records))
    bound = min(g.tau for g in ctx.cutoffs.values()) * ctx.T_norm
    worst = max((r["solver"]["contraction_factor"] for r in acc), default=None)
    report.add_check("contraction", bool(acc) and worst <= bound, value=worst, threshold=bound)
    if cfg.uniqueness:
        worst_u = max((r["uniqueness_spread"] for r in acc), default=None)
        report.add_check("uniqueness", bool(acc) and worst_u <= UNIQUENESS_TOL, value=worst_u,
                         threshold=UNIQUENESS_TOL)


def _verify_stability(report, cfg, jobs):
    ctx = _context(cfg)
    _stability_check(report, ctx, cfg)


def _verify_wedge(report, cfg, jobs):
    if cfg.n != 1:
        raise InvalidInput("the wedge suite samples n = 1 scenarios")
    ctx = _context(cfg)
    d = cfg.d_values[0]
    grid = parameter_grid(cfg)
    points = grid.points(d=d)
    g = ctx.cutoffs[d]
    if g.base.is_flat:
        discs = [flat_disc(p, ctx.collar) for p in points]
        w = model_wedge(1, 0.1)
    else:
        discs = [build_disc(solve(g, ctx.collar, p), g, ctx.collar) for p in points]
        w = graph_wedge(ctx.family.at(d), 0.1)
    eps = 2.0 * max(grid.spacing())
    fill = wedge_fill_check(discs, w, 0.05, 500, eps, seed=cfg.seed)
    report.constants["fill"] = fill.as_dict()
    report.add_check("wedge_fill", fill.passed, value=fill.fraction, threshold=1.0)
    pts = sample_shrunk_wedge(w, 0.05, 200, seed=cfg.seed)
    inside = all(wedge_membership(w, z) for z in pts)
    report.add_check("shrunk_inside_wedge", inside, value=len(pts))


def _verify_key_estimate(report, cfg, jobs):
    grid = CircleGrid(cfg.grid_n)
    collar = build_collar(grid, 1)
    pts = [DiscParameters([c], [t]) for c in (-0.01, 0.01) for t in (0.005, 0.01)]
    discs = [flat_disc(p, collar) for p in pts]
    rep = key_estimate_check(identity_map, discs, flat_edge_square(1), flat(1))
    report.constants["identity"] = rep.as_dict()
    report.add_check("key_estimate_identity", rep.passed, value=rep.slope, threshold=0.9)

    # a ball automorphism maps the sphere edge into the sphere; rho_M = (|z + i|^2 - 1)^2
    edge = sphere(1.0)
    g = choose_tau_delta(edge, cfg.contraction_target, grid.hilbert_sup_norm)
    sdiscs = [build_disc(solve(g, collar, p), g, collar) for p in pts]
    rep = key_estimate_check(disc_automorphism(AUTOMORPHISM_A), sdiscs, sphere_square(1, center=[-1j]), edge)
    report.constants["automorphism"] = dict(rep.as_dict(), a=[AUTOMORPHISM_A.real, AUTOMORPHISM_A.imag])
    report.add_check("key_estimate_automorphism", rep.passed, value=rep.slope, threshold=0.9)
    try:
        key_estimate_check(lambda z: np.asarray(z) + 0.1j, discs, flat_edge_square(1), flat(1))
        caught = False
    except HypothesisViolation:
        caught = True
    report.add_check("hypothesis_violation_detected", caught)


# -- flat family and plot tables --------------------------------------------------


def flat_family(cfg: ScenarioConfig) -> RunReport:
    """Closed-form discs attached to ``R^n`` over the configured ``(c, t)`` grid."""
    grid = CircleGrid(cfg.grid_n)
    collar = build_collar(grid, cfg.n)
    report = RunReport("flat", cfg.to_dict())
    for i, p in enumerate(parameter_grid(cfg).points(d=0.0)):
        rec = {"index": i, "params": p.as_dict(), "status": "failed", "error": None,
               "solver": None, "disc": None, "uniqueness_spread": None}
        try:
            disc = flat_disc(p, collar, tol_holo=cfg.tol_holo, alphas=cfg.holder_alphas)
            report.discs.append(disc)
            rec["disc"] = disc.as_dict(include_trace=False)
            rec["disc"].pop("params")
            rec["status"] = "accepted"
        except BishopError as exc:
            rec["error"] = {"type": type(exc).__name__, "message": str(exc)}
            report.failures.append({"index": i, "type": rec["error"]["type"], "message": str(exc)})
        report.records.append(rec)
    worst = max((r["disc"]["holo_residual"] for r in report.records if r["disc"]), default=None)
    report.add_check("acceptance", not report.failures, value=len(report.discs), threshold=len(report.records))
    tol = default_tolerance() if cfg.tol_holo is None else cfg.tol_holo
    report.add_check("holomorphy", worst is not None and worst <= tol, value=worst, threshold=tol)
    return report


def export_plots(cfg: ScenarioConfig, jobs: int = 1) -> tuple[RunReport, str]:
    """Hopf tables ``(1 - |zeta|, |rho(H)|, dist(H, E))`` for every accepted disc, as CSV text."""
    report = run(cfg, jobs)
    report.command = "export-plots"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "one_minus_r", "abs_rho", "dist"])
    reps = hopf_reports(cfg, report.discs)
    index = {json.dumps(r["params"], sort_keys=True): r["index"] for r in report.records}
    for disc, rep in reps:
        i = index[json.dumps(_clean(disc.params.as_dict()), sort_keys=True)]
        for s, a, dist in rep.table:
            w.writerow([i, repr(float(s)), repr(float(a)), repr(float(dist))])
    return report, buf.getvalue()


# -- files ------------------------------------------------------------------------


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = len(records[0]["params"]["c"]) if records else 0
    w.writerow(["index", "status"] + [f"c{j + 1}" for j in range(n)] + [f"t{j + 1}" for j in range(n)]
               + ["d", "iterations", "contraction_factor", "residual", "sup_u",
                  "attach_residual", "holo_residual", "uniqueness_spread", "error"])

    def f(x):
        return "" if x is None else repr(float(x))

    for r in records:
        s, dsc = r["solver"] or {}, r["disc"] or {}
        w.writerow([r["index"], r["status"]] + [f(v) for v in r["params"]["c"] + r["params"]["t"]]
                   + [f(r["params"]["d"]), s.get("iterations", ""), f(s.get("contraction_factor")),
                      f(s.get("residual")), f(s.get("sup_u")), f(dsc.get("attach_residual")),
                      f(dsc.get("holo_residual")), f(r["uniqueness_spread"]),
                      (r["error"] or {}).get("type", "")])
    return buf.getvalue()


def package_version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def write_outputs(report: RunReport, out: Path, *, elapsed: float, argv=None, jobs: int = 1,
                  export_traces: bool = False, extra: dict | None = None) -> list[Path]:
    """Write ``report.json``, ``discs.csv``, optional ``discs.json`` and the metadata sidecar."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    doc = report.to_dict()
    validate_report(doc)
    paths = []
    p = out / "report.json"
    p.write_text(json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n")
    paths.append(p)
    if report.records:
        p = out / "discs.csv"
        p.write_text(records_csv(report.records))
        paths.append(p)
    if export_traces and report.discs:
        p = out / "discs.json"
        p.write_text(json.dumps(_clean([d.as_dict() for d in report.discs]), sort_keys=True) + "\n")
        paths.append(p)
    for name, text in (extra or {}).items():
        p = out / name
        p.write_text(text)
        paths.append(p)
    meta = {
        "created": datetime.now(timezone.utc).isoformat(),
        "elapsed_seconds": elapsed,
        "version": package_version(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "argv": list(sys.argv if argv is None else argv),
        "jobs": jobs,
        "report_schema": REPORT_SCHEMA,
    }
    p = out / "metadata.json"
    p.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    paths.append(p)
    return paths


def timed(func, *args, **kwargs):
    t0 = time.perf_counter()
    res = func(*args, **kwargs)
    return res, time.perf_counter() - t0
