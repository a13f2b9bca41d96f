"""Run configuration: INI file sections overridden by command-line flags.

Recognised keys (all optional)::

    [run]         seed = 0
                  lambda = 0.7
                  c_phase = 0.785398          ; radians, c = exp(i c_phase)
    [grid]        dimension = 2
                  n = 32
                  spacing = 0.25
    [kernel]      kernel = shipped            ; shipped | broken | path/to/kernel.json
    [tolerances]  identity = 1e-12
                  moment = 1e-10
                  psd = 1e-10
                  negative_control = 1e-3
                  convergence = 0.01
    [output]      format = text               ; text | csv | json
                  out = report.txt

Inline ``;`` comments above are annotations only; in a real file comments
go on their own lines.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import asdict, dataclass, field, fields

FORMATS = ("text", "csv", "json")


class ConfigError(ValueError):
    pass


@dataclass
class Tolerances:
    identity: float = 1e-12
    moment: float = 1e-10
    psd: float = 1e-10
    negative_control: float = 1e-3
    convergence: float = 0.01


@dataclass
class RunConfig:
    seed: int = 0
    lam: float = 0.7
    c_phase: float | None = None
    dimension: int = 2
    n: int = 32
    spacing: float = 0.25
    kernel: str = "shipped"
    format: str = "text"
    out: str | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    def validate(self) -> "RunConfig":
        for f in fields(Tolerances):
            v = getattr(self.tolerances, f.name)
            if not v > 0:
                raise ConfigError("tolerance %s must be positive, got %r" % (f.name, v))
        if self.n < 2 or self.n % 2:
            raise ConfigError("grid n must be even and >= 2")
        if self.dimension < 1 or self.dimension > 4:
            raise ConfigError("dimension must be between 1 and 4")
        if not self.spacing > 0:
            raise ConfigError("grid spacing must be positive")
        if self.format not in FORMATS:
            raise ConfigError("format must be one of %s" % ", ".join(FORMATS))
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        return self

    def parameters(self) -> dict:
        d = asdict(self)
        d.pop("format")
        d.pop("out")
        return d


_KEYS = {
    ("run", "seed"): ("seed", int),
    ("run", "lambda"): ("lam", float),
    ("run", "c_phase"): ("c_phase", float),
    ("grid", "dimension"): ("dimension", int),
    ("grid", "n"): ("n", int),
    ("grid", "spacing"): ("spacing", float),
    ("kernel", "kernel"): ("kernel", str),
    ("output", "format"): ("format", str),
    ("output", "out"): ("out", str),
}


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path:
        parser = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
        for section in parser.sections():
            for key, raw in parser.items(section):
                try:
                    if section == "tolerances":
                        if key not in {f.name for f in fields(Tolerances)}:
                            raise ConfigError("unknown tolerance %r" % key)
                        setattr(cfg.tolerances, key, float(raw))
                        continue
                    if (section, key) not in _KEYS:
                        raise ConfigError("unknown config key [%s] %s" % (section, key))
                    name, conv = _KEYS[(section, key)]
                    setattr(cfg, name, conv(raw))
                except ValueError as exc:
                    if isinstance(exc, ConfigError):
                        raise
                    raise ConfigError("bad value for [%s] %s: %r" % (section, key, raw)) from exc
    for name, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, name, value)
    return cfg.validate()


def thread_count() -> int:
    """Worker cap from ``LIERF_THREADS`` (default 1, i.e. serial)."""
    raw = os.environ.get("LIERF_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError("LIERF_THREADS must be an integer, got %r" % raw) from None
    return max(1, n)
