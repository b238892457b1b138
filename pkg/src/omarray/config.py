"""Experiment configuration: JSON schema, defaults, and strict validation.

A run is configured by one JSON file holding the experiment name, the
physical parameters, and one experiment-specific block.  Validation is
total and happens before any computation: unknown keys anywhere, wrong
types, and out-of-range values all raise :class:`ParameterError`.  Command
line flags override file values, which override defaults; the provenance of
each resolved setting is recorded for the run manifest.

Complex coupling amplitudes are written as a real number or a two-element
``[re, im]`` array.  Scalar ``delta``, ``g``, and ``nbar`` broadcast to the
required length.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ParameterError
from .params import SystemParams

EXPERIMENTS = ("modes", "walk", "heat", "shuttle", "validate")

#: physical defaults for the array experiments (heat-diffusion demo point)
_PARAM_DEFAULTS = {
    "N": 20, "gamma": 5e-5, "kappa": 6.4, "delta": -1.0, "g": 0.3, "nbar": 10.0,
}
#: physical defaults for the shuttling experiments (coherent-exchange point)
_PARAM_DEFAULTS_SHUTTLE = {
    "N": 4, "gamma": 1e-6, "kappa": 1e-3, "delta": -1.0, "g": 0.0, "nbar": 0.0,
}

_PI = math.pi

_BLOCK_SCHEMAS: dict[str, dict[str, Any]] = {
    "modes": {},
    "walk": {
        "source": 6,
        "active_mode": 1,
        "time": _PI,
        "sigma": _PI,
        "realizations": 10000,
        "dump_realizations": False,
    },
    "heat": {
        "hot_element": 6,
        "excess": 20.0,
        "nn_strength": 0.3,
        "t_max": None,
        "samples": 200,
    },
    "shuttle": {
        "protocol": "transfer_1_to_4",
        "omega_rabi": 0.1,
        "segments": None,
        "initial_element": 1,
        "samples": 400,
        "dissipative": True,
    },
    "validate": {
        "level": "fast",
    },
}

_TOP_KEYS = ("experiment", "seed", "output_dir", "threads", "params")


@dataclass
class ResolvedConfig:
    """Fully validated configuration with per-key provenance."""

    experiment: str
    seed: int
    output_dir: str
    threads: int
    params: SystemParams
    block: dict
    provenance: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """JSON-able copy of every resolved value, for the manifest."""
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "threads": self.threads,
            "params": {
                "N": self.params.N,
                "omega": self.params.omega,
                "gamma": self.params.gamma,
                "kappa": self.params.kappa,
                "delta": list(map(float, self.params.delta)),
                "g": [[z.real, z.imag] for z in self.params.g],
                "nbar": list(map(float, self.params.nbar)),
            },
            "block": _jsonable(self.block),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _require(cond: bool, msg: str):
    if not cond:
        raise ParameterError(msg)


def _as_int(value, key: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), f"{key} must be an integer")
    return value


def _as_number(value, key: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"{key} must be a number")
    _require(math.isfinite(value), f"{key} must be finite")
    return float(value)


def _as_complex(value, key: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(_as_number(value[0], key), _as_number(value[1], key))
    raise ParameterError(f"{key} must be a number or a [re, im] pair")


def _broadcast(value, length: int, key: str, conv):
    """Scalar values broadcast to ``length``; lists must match it exactly.

    For complex-valued keys a flat ``[re, im]`` pair counts as one scalar
    unless the required length is exactly 2, in which case a flat list is
    read as per-mode real values (use nested pairs to disambiguate).
    """
    if not isinstance(value, list):
        return [conv(value, key)] * length
    if conv is _as_complex and len(value) == 2 and length != 2 \
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return [conv(value, key)] * length
    _require(len(value) == length, f"{key} must have length {length}")
    return [conv(v, f"{key}[{i}]") for i, v in enumerate(value)]


def _resolve_params(raw: dict, experiment: str) -> SystemParams:
    defaults = dict(_PARAM_DEFAULTS_SHUTTLE if experiment == "shuttle" else _PARAM_DEFAULTS)
    if experiment == "modes":
        defaults["N"] = 6
    unknown = set(raw) - set(defaults)
    _require(not unknown, f"unknown params keys: {sorted(unknown)}")
    merged = {**defaults, **raw}
    N = _as_int(merged["N"], "params.N")
    _require(N >= 2, "params.N must be >= 2")
    delta = _broadcast(merged["delta"], N - 1, "params.delta", _as_number)
    g = _broadcast(merged["g"], N - 1, "params.g", _as_complex)
    if experiment in ("walk", "heat") and "g" not in raw:
        # default drive addresses only the longest-wavelength mode
        g = [complex(defaults["g"])] + [0j] * (N - 2)
    nbar = _broadcast(merged["nbar"], N, "params.nbar", _as_number)
    return SystemParams(N=N, gamma=_as_number(merged["gamma"], "params.gamma"),
                        kappa=_as_number(merged["kappa"], "params.kappa"),
                        delta=delta, g=g, nbar=nbar)


def _validate_block(experiment: str, raw: dict, N: int) -> dict:
    schema = _BLOCK_SCHEMAS[experiment]
    unknown = set(raw) - set(schema)
    _require(not unknown, f"unknown {experiment} keys: {sorted(unknown)}")
    blk = {**schema, **raw}
    if experiment == "walk":
        blk["source"] = _as_int(blk["source"], "walk.source")
        blk["active_mode"] = _as_int(blk["active_mode"], "walk.active_mode")
        blk["time"] = _as_number(blk["time"], "walk.time")
        blk["sigma"] = _as_number(blk["sigma"], "walk.sigma")
        blk["realizations"] = _as_int(blk["realizations"], "walk.realizations")
        _require(isinstance(blk["dump_realizations"], bool), "walk.dump_realizations must be a bool")
        _require(1 <= blk["source"] <= N, f"walk.source must be in 1..{N}")
        _require(1 <= blk["active_mode"] <= N - 1, f"walk.active_mode must be in 1..{N - 1}")
        _require(blk["sigma"] >= 0, "walk.sigma must be >= 0")
        _require(blk["realizations"] >= 1, "walk.realizations must be >= 1")
    elif experiment == "heat":
        blk["hot_element"] = _as_int(blk["hot_element"], "heat.hot_element")
        blk["excess"] = _as_number(blk["excess"], "heat.excess")
        blk["nn_strength"] = _as_number(blk["nn_strength"], "heat.nn_strength")
        if blk["t_max"] is not None:
            blk["t_max"] = _as_number(blk["t_max"], "heat.t_max")
            _require(blk["t_max"] > 1.0, "heat.t_max must be > 1")
        blk["samples"] = _as_int(blk["samples"], "heat.samples")
        _require(1 <= blk["hot_element"] <= N, f"heat.hot_element must be in 1..{N}")
        _require(blk["excess"] >= 0, "heat.excess must be >= 0")
        _require(blk["samples"] >= 2, "heat.samples must be >= 2")
    elif experiment == "shuttle":
        _require(blk["protocol"] in ("transfer_1_to_4", "polariton_hold", "custom"),
                 "shuttle.protocol must be transfer_1_to_4, polariton_hold, or custom")
        blk["omega_rabi"] = _as_number(blk["omega_rabi"], "shuttle.omega_rabi")
        _require(blk["omega_rabi"] > 0, "shuttle.omega_rabi must be > 0")
        blk["initial_element"] = _as_int(blk["initial_element"], "shuttle.initial_element")
        _require(1 <= blk["initial_element"] <= N, f"shuttle.initial_element must be in 1..{N}")
        blk["samples"] = _as_int(blk["samples"], "shuttle.samples")
        _require(blk["samples"] >= 2, "shuttle.samples must be >= 2")
        _require(isinstance(blk["dissipative"], bool), "shuttle.dissipative must be a bool")
        if blk["protocol"] == "custom":
            _require(isinstance(blk["segments"], list) and blk["segments"],
                     "shuttle.segments must be a nonempty list for protocol=custom")
            segs = []
            for i, seg in enumerate(blk["segments"]):
                _require(isinstance(seg, dict), f"shuttle.segments[{i}] must be an object")
                extra = set(seg) - {"g", "duration"}
                _require(not extra, f"unknown shuttle.segments[{i}] keys: {sorted(extra)}")
                _require("g" in seg and "duration" in seg,
                         f"shuttle.segments[{i}] needs g and duration")
                gvec = _broadcast(seg["g"], N - 1, f"shuttle.segments[{i}].g", _as_complex)
                dur = _as_number(seg["duration"], f"shuttle.segments[{i}].duration")
                _require(dur >= 0, f"shuttle.segments[{i}].duration must be >= 0")
                segs.append({"g": gvec, "duration": dur})
            blk["segments"] = segs
        else:
            _require(raw.get("segments") is None,
                     "shuttle.segments is only accepted with protocol=custom")
            _require(N == 4, f"shuttle protocol {blk['protocol']} requires N=4")
    elif experiment == "validate":
        _require(blk["level"] in ("fast", "full"), "validate.level must be fast or full")
    return blk


def load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config {path} is not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "config root must be a JSON object")
    return doc


def resolve(experiment: str, file_doc: dict | None = None, *, seed: int | None = None,
            output_dir: str | None = None, threads: int | None = None,
            level: str | None = None) -> ResolvedConfig:
    """Merge flags > file > defaults into a validated configuration."""
    _require(experiment in EXPERIMENTS, f"experiment must be one of {EXPERIMENTS}")
    doc = dict(file_doc or {})
    allowed = set(_TOP_KEYS) | {experiment}
    unknown = set(doc) - allowed
    _require(not unknown, f"unknown config keys: {sorted(unknown)} (allowed: {sorted(allowed)})")
    if "experiment" in doc:
        _require(doc["experiment"] == experiment,
                 f"config file is for experiment {doc['experiment']!r}, not {experiment!r}")

    prov: dict[str, str] = {}

    def pick(key, flag, file_value, default):
        if flag is not None:
            prov[key] = "flag"
            return flag
        if file_value is not None:
            prov[key] = "file"
            return file_value
        prov[key] = "default"
        return default

    seed_v = pick("seed", seed, doc.get("seed"), 12345)
    _require(isinstance(seed_v, int) and not isinstance(seed_v, bool) and 0 <= seed_v < 2**64,
             "seed must be an unsigned 64-bit integer")
    out_v = pick("output_dir", output_dir, doc.get("output_dir"), "out")
    _require(isinstance(out_v, str) and out_v, "output_dir must be a nonempty string")
    thr_v = pick("threads", threads, doc.get("threads"), 1)
    _require(isinstance(thr_v, int) and not isinstance(thr_v, bool) and thr_v >= 1,
             "threads must be an integer >= 1")

    raw_params = doc.get("params", {})
    _require(isinstance(raw_params, dict), "params must be an object")
    prov["params"] = "file" if raw_params else "default"
    params = _resolve_params(raw_params, experiment)

    raw_block = doc.get(experiment, {})
    _require(isinstance(raw_block, dict), f"{experiment} block must be an object")
    prov[experiment] = "file" if raw_block else "default"
    block = _validate_block(experiment, raw_block, params.N)
    if experiment == "validate" and level is not None:
        _require(level in ("fast", "full"), "level must be fast or full")
        block["level"] = level
        prov["validate.level"] = "flag"

    return ResolvedConfig(experiment=experiment, seed=seed_v, output_dir=out_v,
                          threads=thr_v, params=params, block=block, provenance=prov)
