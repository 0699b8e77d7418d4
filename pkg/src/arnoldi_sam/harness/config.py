"""Experiment configuration: dataclasses, per-experiment defaults, YAML loading."""
from __future__ import annotations

import copy
import dataclasses
import hashlib
import json
import typing
from dataclasses import dataclass, field

import yaml

EXPERIMENTS = ("eig_study", "variant_compare", "benchmark", "single_run")
METHODS = ("sam_step_average", "sam_directional", "bfgs", "nelder_mead")


class ConfigError(ValueError):
    pass


@dataclass
class ProblemConfig:
    kind: str = "quadratic"  # quadratic | rosenbrock
    p: int = 8  # quadratic dimension is 2**p
    q: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    n: int = 256  # rosenbrock dimension
    x0: str | None = None  # sine | alternating; None picks by kind


@dataclass
class NoiseConfig:
    rel_sigma_f: float = 0.0
    rel_sigma_g: list[float] = field(default_factory=lambda: [0.025])
    rel_bias_g: list[float] = field(default_factory=lambda: [0.0])


@dataclass
class SamSection:
    r: int = 4
    m: int = 16
    alpha: float = 1.0
    delta0: float | None = None  # None -> delta_factor * ||x0||
    delta_factor: float = 10.0
    delta_max: float | None = None
    tau: float = 0.1
    max_iter: int = 10


@dataclass
class BfgsSection:
    max_evals: int | None = None  # None -> matched to SAM (benchmark) or 10000
    grad_tol: float = 1e-8
    c1: float = 1e-4
    c2: float = 0.9
    max_line_search: int = 30


@dataclass
class NelderMeadSection:
    max_evals: int | None = None
    init_scale: float = 0.05
    zero_step: float = 0.05
    xtol: float = 1e-8
    ftol: float = 1e-10


@dataclass
class OutputConfig:
    path: str | None = None
    format: str = "csv"


@dataclass
class ExperimentConfig:
    experiment: str = "eig_study"
    seed: int = 0
    runs: int = 100
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    sam: SamSection = field(default_factory=SamSection)
    bfgs: BfgsSection = field(default_factory=BfgsSection)
    nelder_mead: NelderMeadSection = field(default_factory=NelderMeadSection)
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    eig_count: int = 8
    output: OutputConfig = field(default_factory=OutputConfig)


DEFAULTS = {
    "eig_study": {
        "runs": 100,
        "problem": {"kind": "quadratic", "p": 8, "q": [0.5, 1.0, 2.0], "x0": "sine"},
        "noise": {"rel_sigma_f": 0.0, "rel_sigma_g": [0.005, 0.025, 0.05], "rel_bias_g": [0.0]},
        "sam": {"m": 16, "alpha": 1.0},
    },
    "variant_compare": {
        "runs": 1000,
        "problem": {"kind": "quadratic", "p": 8, "q": [0.5, 1.0, 2.0], "x0": "sine"},
        "noise": {"rel_sigma_f": 0.025, "rel_sigma_g": [0.025], "rel_bias_g": [0.0, 0.1]},
        "sam": {"r": 4, "m": 16, "alpha": 1.0},
        "methods": ["sam_step_average", "sam_directional"],
    },
    "benchmark": {
        "runs": 20,
        "problem": {"kind": "rosenbrock", "n": 256, "x0": "alternating"},
        "noise": {"rel_sigma_f": 0.025, "rel_sigma_g": [0.025], "rel_bias_g": [0.0]},
        "sam": {"r": 4, "m": 16, "alpha": 0.5, "tau": 0.1, "max_iter": 10},
    },
    "single_run": {
        "runs": 1,
        "problem": {"kind": "rosenbrock", "n": 256, "x0": "alternating"},
        "noise": {"rel_sigma_f": 0.025, "rel_sigma_g": [0.025], "rel_bias_g": [0.0]},
        "sam": {"r": 4, "m": 16, "alpha": 0.5, "tau": 0.1, "max_iter": 10},
        "methods": ["sam_step_average"],
    },
}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _coerce(tp, value, where):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin is typing.Union or (origin is not None and type(None) in args):
        if value is None:
            if type(None) in args:
                return None
            raise ConfigError(f"{where}: null not allowed")
        inner = [a for a in args if a is not type(None)]
        return _coerce(inner[0], value, where)
    if origin is list:
        (elem,) = args
        if not isinstance(value, list):
            value = [value]
        return [_coerce(elem, v, f"{where}[{i}]") for i, v in enumerate(value)]
    if dataclasses.is_dataclass(tp):
        return _build(tp, value, where)
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{where}: unsupported type {tp}")


def _build(cls, data, where="config"):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    kwargs = {k: _coerce(hints[k], v, f"{where}.{k}") for k, v in data.items()}
    return cls(**kwargs)


def config_from_dict(data: dict) -> ExperimentConfig:
    """Overlay `data` on the defaults for its ``experiment`` kind and validate."""
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping")
    kind = data.get("experiment", "eig_study")
    if kind not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {kind!r}; expected one of {EXPERIMENTS}")
    merged = _merge(DEFAULTS[kind], data)
    merged["experiment"] = kind
    cfg = _build(ExperimentConfig, merged)
    validate(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(data or {})


def default_config(kind: str) -> ExperimentConfig:
    return config_from_dict({"experiment": kind})


def validate(cfg: ExperimentConfig) -> None:
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    p = cfg.problem
    need(p.kind in ("quadratic", "rosenbrock"), f"problem.kind must be quadratic or rosenbrock, got {p.kind!r}")
    need(p.x0 in (None, "sine", "alternating"), f"problem.x0 must be sine or alternating, got {p.x0!r}")
    if p.kind == "quadratic":
        need(0 <= p.p <= 20, "problem.p must be in [0, 20]")
        need(len(p.q) > 0, "problem.q must list at least one exponent")
        need(all(q > 0 for q in p.q), "problem.q exponents must be positive")
    else:
        need(p.n >= 2 and p.n % 2 == 0, "problem.n must be even and >= 2")
    need(cfg.runs >= 1, "runs must be >= 1")
    need(0 <= cfg.seed < 2**64, "seed must be an unsigned 64-bit integer")
    nz = cfg.noise
    need(nz.rel_sigma_f >= 0 and all(s >= 0 for s in nz.rel_sigma_g), "noise levels must be non-negative")
    need(len(nz.rel_sigma_g) > 0 and len(nz.rel_bias_g) > 0, "noise lists must be non-empty")
    s = cfg.sam
    need(s.m >= 1 and 1 <= s.r <= s.m, "sam requires 1 <= r <= m")
    need(s.alpha > 0 and s.tau > 0 and s.delta_factor > 0, "sam.alpha, sam.tau, sam.delta_factor must be positive")
    need(s.delta0 is None or s.delta0 > 0, "sam.delta0 must be positive")
    need(s.max_iter >= 0, "sam.max_iter must be non-negative")
    need(all(mth in METHODS for mth in cfg.methods), f"methods must be drawn from {METHODS}")
    need(len(cfg.methods) > 0, "methods must be non-empty")
    need(cfg.eig_count >= 1, "eig_count must be >= 1")
    need(cfg.output.format in ("csv", "json"), "output.format must be csv or json")
    if cfg.experiment in ("eig_study", "variant_compare"):
        need(p.kind == "quadratic", f"{cfg.experiment} requires the quadratic problem")
        need(cfg.eig_count <= s.m or cfg.experiment != "eig_study", "eig_count must not exceed sam.m")
    if cfg.experiment == "eig_study":
        need(cfg.eig_count <= 2**p.p, "eig_count must not exceed the problem dimension")
    if cfg.experiment == "variant_compare":
        need(all(mth.startswith("sam_") for mth in cfg.methods), "variant_compare only runs SAM variants")
    if cfg.experiment == "benchmark":
        need(p.kind == "rosenbrock", "benchmark requires the rosenbrock problem")


def config_hash(cfg: ExperimentConfig) -> str:
    """Short digest of everything that affects results (output settings excluded)."""
    d = dataclasses.asdict(cfg)
    d.pop("output")
    blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]
