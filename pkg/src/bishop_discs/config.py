"""Scenario configuration: a single JSON document, validated with line-numbered errors."""

from __future__ import annotations

import json
import os
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import InvalidInput
from .manifolds import KINDS

SCHEMA_TAG = "bishop-discs/scenario/v1"
OUTPUT_ENV = "BISHOP_DISCS_OUT"
DEFAULT_OUTPUT = "bishop_out"


class ConfigError(InvalidInput):
    """Invalid scenario; ``line`` points into the source document when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class ScenarioConfig:
    manifold: dict = field(default_factory=lambda: {"kind": "quadratic", "n": 1})
    collar: str = "reference"
    grid_n: int = 512
    p: float = 2.0
    contraction_target: float = 0.5
    c_lo: list = field(default_factory=lambda: [-0.01])
    c_hi: list = field(default_factory=lambda: [0.01])
    t_lo: list = field(default_factory=lambda: [0.0])
    t_hi: list = field(default_factory=lambda: [0.01])
    resolution: list = field(default_factory=lambda: [3, 3])
    d_values: list = field(default_factory=lambda: [1.0])
    holder_alphas: list = field(default_factory=lambda: [0.5, 0.9])
    uniqueness: bool = True
    regularity: bool = False
    stability: bool = False
    hopf: bool = False
    domain: dict | None = None
    tol_picard: float = 1e-12
    tol_holo: float | None = None
    tol_attach: float | None = None
    tau: float | None = None
    delta: float | None = None
    seed: int = 0
    output: str | None = None
    export_traces: bool = False

    @property
    def n(self) -> int:
        return int(self.manifold.get("n", 1))

    def output_dir(self) -> Path:
        return Path(self.output or os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("output")
        return d


def _line_of(text: str | None, key: str):
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _vec(value, n, key, text):
    if isinstance(value, (int, float)):
        value = [float(value)] * n
    if not isinstance(value, list) or len(value) != n or not all(isinstance(v, (int, float)) for v in value):
        raise ConfigError(f"{key!r} must be a number or a list of {n} numbers", _line_of(text, key))
    return [float(v) for v in value]


def parse_config(data: dict, text: str | None = None) -> ScenarioConfig:
    """Validate a decoded JSON mapping and build a :class:`ScenarioConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object", 1)
    known = {"schema", "manifold", "collar", "grid_n", "p", "contraction_target", "parameters",
             "diagnostics", "domain", "tolerances", "overrides", "seed", "output", "export_traces"}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown key {key!r}", _line_of(text, key))
    schema = data.get("schema", SCHEMA_TAG)
    if schema != SCHEMA_TAG:
        raise ConfigError(f"unsupported schema {schema!r}", _line_of(text, "schema"))

    cfg = ScenarioConfig()
    man = data.get("manifold", cfg.manifold)
    if not isinstance(man, dict) or man.get("kind") not in KINDS:
        raise ConfigError(f"manifold.kind must be one of {KINDS}", _line_of(text, "manifold"))
    cfg.manifold = man
    n = cfg.n
    if n < 1:
        raise ConfigError("manifold.n must be >= 1", _line_of(text, "n"))

    if data.get("collar", "reference") != "reference":
        raise ConfigError("only the 'reference' collar is available", _line_of(text, "collar"))

    grid_n = data.get("grid_n", cfg.grid_n)
    if not isinstance(grid_n, int) or grid_n < 8 or grid_n % 2:
        raise ConfigError("grid_n must be an even integer >= 8", _line_of(text, "grid_n"))
    cfg.grid_n = grid_n

    p = data.get("p", cfg.p)
    if not isinstance(p, (int, float)) or p <= 1:
        raise ConfigError("p must be a number > 1", _line_of(text, "p"))
    cfg.p = float(p)

    q = data.get("contraction_target", cfg.contraction_target)
    if not isinstance(q, (int, float)) or not 0 < q < 1:
        raise ConfigError("contraction_target must lie in (0, 1)", _line_of(text, "contraction_target"))
    cfg.contraction_target = float(q)

    params = data.get("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("parameters must be an object", _line_of(text, "parameters"))
    c = params.get("c", {"lo": cfg.c_lo * n, "hi": cfg.c_hi * n})
    t = params.get("t", {"lo": cfg.t_lo * n, "hi": cfg.t_hi * n})
    for name, box in (("c", c), ("t", t)):
        if not isinstance(box, dict) or "lo" not in box or "hi" not in box:
            raise ConfigError(f"parameters.{name} needs 'lo' and 'hi'", _line_of(text, name))
    cfg.c_lo, cfg.c_hi = _vec(c["lo"], n, "c", text), _vec(c["hi"], n, "c", text)
    cfg.t_lo, cfg.t_hi = _vec(t["lo"], n, "t", text), _vec(t["hi"], n, "t", text)
    if any(lo > hi for lo, hi in zip(cfg.c_lo + cfg.t_lo, cfg.c_hi + cfg.t_hi)):
        raise ConfigError("empty parameter box (lo > hi)", _line_of(text, "parameters"))
    if min(cfg.t_lo) < 0:
        raise ConfigError("t box must satisfy t >= 0", _line_of(text, "t"))
    res = params.get("resolution", cfg.resolution)
    if isinstance(res, int):
        res = [res, res]
    if not isinstance(res, list) or len(res) != 2 or not all(isinstance(r, int) and r >= 1 for r in res):
        raise ConfigError("resolution must be a positive integer or [nc, nt]", _line_of(text, "resolution"))
    cfg.resolution = res
    d = params.get("d", cfg.d_values)
    d = [d] if isinstance(d, (int, float)) else d
    if not isinstance(d, list) or not d or not all(isinstance(v, (int, float)) and -1 <= v <= 1 for v in d):
        raise ConfigError("parameters.d must be a nonempty list of numbers in [-1, 1]", _line_of(text, "d"))
    cfg.d_values = [float(v) for v in d]

    diag = data.get("diagnostics", {})
    if not isinstance(diag, dict):
        raise ConfigError("diagnostics must be an object", _line_of(text, "diagnostics"))
    alphas = diag.get("holder", cfg.holder_alphas)
    if not isinstance(alphas, list) or not all(isinstance(a, (int, float)) and 0 < a < 1 for a in alphas):
        raise ConfigError("diagnostics.holder must list exponents in (0, 1)", _line_of(text, "holder"))
    cfg.holder_alphas = [float(a) for a in alphas]
    for key in ("uniqueness", "regularity", "stability", "hopf"):
        val = diag.get(key, getattr(cfg, key))
        if not isinstance(val, bool):
            raise ConfigError(f"diagnostics.{key} must be true or false", _line_of(text, key))
        setattr(cfg, key, val)

    dom = data.get("domain")
    if dom is not None and (not isinstance(dom, dict) or dom.get("kind") not in ("half_plane", "ball")):
        raise ConfigError("domain.kind must be 'half_plane' or 'ball'", _line_of(text, "domain"))
    cfg.domain = dom

    tols = data.get("tolerances", {})
    for key, attr in (("picard", "tol_picard"), ("holo", "tol_holo"), ("attach", "tol_attach")):
        val = tols.get(key, getattr(cfg, attr))
        if val is not None and (not isinstance(val, (int, float)) or val <= 0):
            raise ConfigError(f"tolerances.{key} must be positive", _line_of(text, key))
        setattr(cfg, attr, None if val is None else float(val))

    over = data.get("overrides", {})
    for key in ("tau", "delta"):
        val = over.get(key)
        if val is not None and (not isinstance(val, (int, float)) or val <= 0):
            raise ConfigError(f"overrides.{key} must be positive", _line_of(text, key))
        setattr(cfg, key, None if val is None else float(val))

    seed = data.get("seed", cfg.seed)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer", _line_of(text, "seed"))
    cfg.seed = seed
    out = data.get("output")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output must be a path string", _line_of(text, "output"))
    cfg.output = out
    cfg.export_traces = bool(data.get("export_traces", False))
    return cfg


def load_config(path) -> ScenarioConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    return parse_config(data, text)
