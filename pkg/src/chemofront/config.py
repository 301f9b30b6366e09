"""Flat key = value run configuration: parsing, validation, rendering.

Format: one `key = value` pair per line, `#` starts a comment, blank lines
ignored.  Unknown keys, duplicate keys, missing required keys, and keys
that do not belong to the selected mode are all hard errors.  See KEYS for
the full list with defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

from .errors import ConfigError, InvalidArgument
from .model import ModelParams

__all__ = ["RunConfig", "parse_config", "render_config", "KEYS"]

MODES = ("simulate", "sweep", "bisect", "convergence", "preset")

# key -> (type, required, default, modes where allowed; None = all modes)
KEYS: dict[str, tuple] = {
    "a": ("float", True, None, None),
    "b": ("float", True, None, None),
    "chi1": ("float", True, None, None),
    "chi2": ("float", True, None, None),
    "lambda1": ("float", True, None, None),
    "lambda2": ("float", True, None, None),
    "mu1": ("float", True, None, None),
    "mu2": ("float", True, None, None),
    "nu": ("float", True, None, None),
    "sigma": ("float", True, None, None),
    "h0": ("float", True, None, None),
    "M": ("int", True, None, None),
    "T": ("float", True, None, None),
    "tau": ("float", False, None, None),
    "mode": ("str", False, "simulate", None),
    "output_dir": ("str", False, "out", None),
    "sample_every": ("float", False, 0.1, None),
    "snapshot_times": ("floatlist", False, [], None),
    "window": ("float", False, 1.0, None),
    "allow_unstable_tau": ("bool", False, False, None),
    "axis": ("str", False, None, ("sweep",)),
    "values": ("floatlist", False, None, ("sweep",)),
    "report_times": ("floatlist", False, None, ("sweep",)),
    "parameter": ("str", False, None, ("bisect",)),
    "bracket_lo": ("float", False, None, ("bisect",)),
    "bracket_hi": ("float", False, None, ("bisect",)),
    "tolerance": ("float", False, 0.005, ("bisect",)),
    "max_iterations": ("int", False, 20, ("bisect",)),
    "refinements": ("int", False, 2, ("convergence",)),
    "preset": ("str", False, None, ("preset",)),
}

SWEEP_AXES = ("sigma", "h0", "nu", "chi1", "chi2", "a", "b",
              "lambda1", "lambda2", "mu1", "mu2")


@dataclass
class RunConfig:
    params: ModelParams
    M: int
    T: float
    tau: float | None = None
    mode: str = "simulate"
    output_dir: str = "out"
    sample_every: float = 0.1
    snapshot_times: list[float] = field(default_factory=list)
    window: float = 1.0
    allow_unstable_tau: bool = False
    axis: str | None = None
    values: list[float] | None = None
    report_times: list[float] | None = None
    parameter: str | None = None
    bracket_lo: float | None = None
    bracket_hi: float | None = None
    tolerance: float = 0.005
    max_iterations: int = 20
    refinements: int = 2
    preset: str | None = None


def _convert(key: str, kind: str, raw: str, line_no: int):
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            value = float(raw)
            if value != int(value):
                raise ValueError("not an integer")
            return int(value)
        if kind == "bool":
            lowered = raw.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError("expected true/false")
        if kind == "floatlist":
            if raw.strip() == "":
                return []
            return [float(part) for part in raw.split(",")]
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})", line_no) from exc


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate configuration text."""
    seen: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected key = value, got {body!r}", line_no)
        key, _, raw = body.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", line_no)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", line_no)
        seen[key] = _convert(key, KEYS[key][0], raw, line_no)

    missing = [k for k, (_, required, _, _) in KEYS.items() if required and k not in seen]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    values = {
        k: seen.get(k, default if not isinstance(default, list) else list(default))
        for k, (_, _, default, _) in KEYS.items()
    }

    mode = values["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    for key in seen:
        allowed = KEYS[key][3]
        if allowed is not None and mode not in allowed:
            raise ConfigError(
                f"key {key!r} only applies to mode(s) {', '.join(allowed)}, "
                f"but mode is {mode!r}"
            )

    try:
        params = ModelParams(
            a=values["a"], b=values["b"], chi1=values["chi1"], chi2=values["chi2"],
            lambda1=values["lambda1"], lambda2=values["lambda2"],
            mu1=values["mu1"], mu2=values["mu2"], nu=values["nu"],
            sigma=values["sigma"], h0=values["h0"],
        )
    except InvalidArgument as exc:
        raise ConfigError(str(exc)) from exc

    if values["M"] < 8:
        raise ConfigError(f"M must be >= 8, got {values['M']}")
    if not values["T"] > 0:
        raise ConfigError(f"T must be > 0, got {values['T']}")
    if values["tau"] is not None and not values["tau"] > 0:
        raise ConfigError(f"tau must be > 0, got {values['tau']}")
    if not values["sample_every"] > 0:
        raise ConfigError(f"sample_every must be > 0, got {values['sample_every']}")
    if not values["window"] > 0:
        raise ConfigError(f"window must be > 0, got {values['window']}")

    if mode == "sweep":
        if values["axis"] is None or values["values"] is None:
            raise ConfigError("mode sweep requires keys 'axis' and 'values'")
        if values["axis"] not in SWEEP_AXES:
            raise ConfigError(
                f"axis must be one of {', '.join(SWEEP_AXES)}, got {values['axis']!r}"
            )
        if not values["values"]:
            raise ConfigError("'values' must be a nonempty list")
    if mode == "bisect":
        for key in ("parameter", "bracket_lo", "bracket_hi"):
            if values[key] is None:
                raise ConfigError(f"mode bisect requires key {key!r}")
        if values["parameter"] not in ("nu", "sigma"):
            raise ConfigError(
                f"parameter must be nu or sigma, got {values['parameter']!r}"
            )
        if not values["tolerance"] > 0:
            raise ConfigError(f"tolerance must be > 0, got {values['tolerance']}")
    if mode == "convergence" and values["refinements"] < 2:
        raise ConfigError(f"refinements must be >= 2, got {values['refinements']}")
    if mode == "preset" and values["preset"] is None:
        raise ConfigError("mode preset requires key 'preset'")

    return RunConfig(
        params=params,
        M=values["M"],
        T=values["T"],
        tau=values["tau"],
        mode=mode,
        output_dir=values["output_dir"],
        sample_every=values["sample_every"],
        snapshot_times=values["snapshot_times"],
        window=values["window"],
        allow_unstable_tau=values["allow_unstable_tau"],
        axis=values["axis"],
        values=values["values"],
        report_times=values["report_times"],
        parameter=values["parameter"],
        bracket_lo=values["bracket_lo"],
        bracket_hi=values["bracket_hi"],
        tolerance=values["tolerance"],
        max_iterations=values["max_iterations"],
        refinements=values["refinements"],
        preset=values["preset"],
    )


def _render_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


def render_config(cfg: RunConfig) -> str:
    """Inverse of parse_config: parse_config(render_config(c)) == c."""
    lines = []
    for name in ("a", "b", "chi1", "chi2", "lambda1", "lambda2", "mu1", "mu2",
                 "nu", "sigma", "h0"):
        lines.append(f"{name} = {_render_value(getattr(cfg.params, name))}")
    simple = {f.name for f in fields(RunConfig)} - {"params"}
    for name in ("M", "T", "tau", "mode", "output_dir", "sample_every",
                 "snapshot_times", "window", "allow_unstable_tau", "axis",
                 "values", "report_times", "parameter", "bracket_lo",
                 "bracket_hi", "tolerance", "max_iterations", "refinements",
                 "preset"):
        assert name in simple
        value = getattr(cfg, name)
        if value is None:
            continue
        if name == "snapshot_times" and not value:
            continue
        allowed = KEYS[name][3]
        if allowed is not None and cfg.mode not in allowed:
            continue
        lines.append(f"{name} = {_render_value(value)}")
    return "\n".join(lines) + "\n"
