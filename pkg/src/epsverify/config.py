"""Run configuration: JSON schema, loading, overrides and point sampling."""

from dataclasses import dataclass, replace
import json
from pathlib import Path

import jsonschema
import numpy as np

from . import expr as ex
from .errors import ConfigError, ParseError
from .geometry import DIM, Tolerances
from .paracontact import BUILTIN_METRICS, builtin_model, make_model
from .zsymmetry import CONDITIONS

DEFAULT_COUNT = 100
DEFAULT_SEED = 0
DEFAULT_BOX = ((-1.0, 1.0),) * DIM

_STR3 = {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3}
_STR33 = {"type": "array", "items": _STR3, "minItems": 3, "maxItems": 3}
_EPS = {"enum": [1, -1]}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["model"],
    "properties": {
        "model": {
            "oneOf": [
                {"type": "string"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["coordinates", "metric", "phi", "xi", "eta", "epsilon"],
                    "properties": {
                        "name": {"type": "string"},
                        "coordinates": _STR3,
                        "metric": _STR33,
                        "phi": _STR33,
                        "xi": _STR3,
                        "eta": _STR3,
                        "psi": {"type": "string"},
                        "epsilon": _EPS,
                    },
                },
            ]
        },
        "epsilon": _EPS,
        "psi": {"type": "string"},
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "count": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": -(2**63), "maximum": 2**64 - 1},
                "box": {
                    "type": "array",
                    "minItems": 3,
                    "maxItems": 3,
                    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                },
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                k: {"type": "number", "exclusiveMinimum": 0}
                for k in ("axiom", "identity", "derivative", "predicate")
            },
        },
        "checks": {"type": "array", "items": {"enum": list(CONDITIONS)}, "uniqueItems": True},
    },
}


@dataclass(frozen=True)
class Sampling:
    count: int = DEFAULT_COUNT
    seed: int = DEFAULT_SEED
    box: tuple = DEFAULT_BOX


@dataclass(frozen=True)
class RunConfig:
    model: object  # ModelSpec
    model_source: object  # built-in name or the inline definition dict
    sampling: Sampling = Sampling()
    tolerances: Tolerances = Tolerances()
    checks: tuple = CONDITIONS
    psi: str = "0"

    def echo(self):
        """JSON-ready view of the configuration."""
        return {
            "model": self.model_source,
            "epsilon": self.model.epsilon,
            "psi": self.psi,
            "sampling": {
                "count": self.sampling.count,
                "seed": self.sampling.seed,
                "box": [list(b) for b in self.sampling.box],
            },
            "tolerances": {
                "axiom": self.tolerances.axiom,
                "identity": self.tolerances.identity,
                "derivative": self.tolerances.derivative,
                "predicate": self.tolerances.predicate,
            },
            "checks": list(self.checks),
        }


def _json_path(parts):
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _check_box(box, path):
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    for i, (lo, hi) in enumerate(box):
        if not lo < hi:
            raise ConfigError(f"degenerate sampling interval [{lo}, {hi}]", _json_path(path + [i]))
    return box


def _build_model(doc):
    model = doc["model"]
    if isinstance(model, str):
        if model not in BUILTIN_METRICS:
            raise ConfigError(f"unknown built-in model {model!r}; choose from {sorted(BUILTIN_METRICS)}",
                              "$.model")
        eps = doc.get("epsilon", 1)
        psi = doc.get("psi", "0")
        _parse_at(psi, ex.Env(), "$.psi")
        return builtin_model(model, eps, psi), model, psi
    if "epsilon" in doc and doc["epsilon"] != model["epsilon"]:
        raise ConfigError("top-level epsilon disagrees with model.epsilon", "$.epsilon")
    metric = model["metric"]
    for i in range(DIM):
        for j in range(i + 1, DIM):
            if metric[i][j].replace(" ", "") != metric[j][i].replace(" ", ""):
                raise ConfigError(f"metric is not symmetric: entries ({i},{j}) and ({j},{i}) differ",
                                  f"$.model.metric[{i}][{j}]")
    psi = model.get("psi", doc.get("psi", "0"))
    try:
        env = ex.Env(tuple(model["coordinates"]), {"eps": float(model["epsilon"])})
    except ConfigError as exc:
        raise ConfigError(str(exc), "$.model.coordinates") from None
    # parse every entry here so errors carry their JSON path
    fields = [("metric", metric), ("phi", model["phi"])]
    for key, rows in fields:
        for i, row in enumerate(rows):
            for j, text in enumerate(row):
                _parse_at(text, env, f"$.model.{key}[{i}][{j}]")
    for key in ("xi", "eta"):
        for i, text in enumerate(model[key]):
            _parse_at(text, env, f"$.model.{key}[{i}]")
    _parse_at(psi, env, "$.model.psi")
    built = make_model(
        model.get("name", "inline"), model["coordinates"], metric, model["phi"],
        model["xi"], model["eta"], psi, model["epsilon"],
    )
    return built, dict(model, psi=psi), psi


def _parse_at(text, env, path):
    try:
        return ex.parse(text, env.names)
    except ParseError as exc:
        raise ConfigError(f"{exc} in expression {text!r}", path) from None


def build_config(doc):
    """Validate a config document (already decoded from JSON) into a RunConfig."""
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(exc.message, _json_path(list(exc.absolute_path))) from None
    model, source, psi = _build_model(doc)
    samp = doc.get("sampling", {})
    sampling = Sampling(
        count=samp.get("count", DEFAULT_COUNT),
        seed=samp.get("seed", DEFAULT_SEED),
        box=_check_box(samp["box"], ["sampling", "box"]) if "box" in samp else DEFAULT_BOX,
    )
    tolerances = Tolerances(**doc.get("tolerances", {}))
    checks = tuple(doc["checks"]) if "checks" in doc else CONDITIONS
    return RunConfig(model, source, sampling, tolerances, checks, psi)


def load_config(source):
    """Load a RunConfig from a path, a JSON string, or a decoded dict."""
    if isinstance(source, dict):
        return build_config(source)
    text = str(source)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc.strerror}", str(source)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", "$") from None
    return build_config(doc)


def override(config, model=None, epsilon=None, points=None, seed=None, tol_predicate=None, checks=None):
    """Apply command-line style overrides, re-validating what changes."""
    if model is not None or epsilon is not None:
        source = model if model is not None else config.model_source
        eps = epsilon if epsilon is not None else config.model.epsilon
        if isinstance(source, str):
            doc = {"model": source, "epsilon": eps, "psi": config.psi}
        else:
            doc = {"model": dict(source, epsilon=eps)}
        new = build_config(doc)
        config = replace(config, model=new.model, model_source=new.model_source, psi=new.psi)
    if points is not None or seed is not None:
        if points is not None and points < 1:
            raise ConfigError(f"point count must be positive, got {points}", "--points")
        config = replace(config, sampling=replace(
            config.sampling,
            count=points if points is not None else config.sampling.count,
            seed=seed if seed is not None else config.sampling.seed,
        ))
    if tol_predicate is not None:
        if tol_predicate <= 0:
            raise ConfigError(f"tolerance must be positive, got {tol_predicate}", "--tol-predicate")
        config = replace(config, tolerances=replace(config.tolerances, predicate=tol_predicate))
    if checks is not None:
        unknown = [c for c in checks if c not in CONDITIONS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; choose from {list(CONDITIONS)}", "--checks")
        config = replace(config, checks=tuple(checks))
    return config


def sample_point(seed, k, box):
    """Point ``k`` of the stream for ``seed``; depends on nothing else."""
    rng = np.random.default_rng([seed % 2**64, k])
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return lo + rng.random(DIM) * (hi - lo)


def sample_points(config):
    s = config.sampling
    return np.array([sample_point(s.seed, k, s.box) for k in range(s.count)])
