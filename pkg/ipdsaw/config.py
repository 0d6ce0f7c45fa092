"""Run configuration: command-line flags over an optional INI file ([run] section)."""

from __future__ import annotations

import configparser
import io
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

from .errors import RunConfigError
from .ipsaw import FAMILIES
from .util import read_text_safe, write_text_atomic

RUN_SECTION = "run"
SAMPLING_COMMANDS = ("sample", "analyze")


@dataclass
class RunConfig:
    """Everything that determines a run; echoed verbatim into every output file."""

    command: str = ""
    betas: tuple[float, ...] = (1.0,)
    lengths: tuple[int, ...] = (64,)
    samples: int = 1000
    seed: Optional[int] = None
    sampler: str = "exact"
    burn_in: int = 10_000
    thin: int = 100
    grid: int = 200
    output: Optional[str] = None
    fmt: str = "csv"
    plot: str = "none"
    workers: int = 1
    family: str = "PD"
    max_length: int = 10
    time_exp: str = "1/2"
    space_exp: str = "1/2"
    ensemble: Optional[str] = None

    def validate(self) -> "RunConfig":
        if not self.betas:
            raise RunConfigError("at least one beta is required")
        if any(b < 0 for b in self.betas):
            raise RunConfigError(f"betas must be >= 0 (got {self.betas})")
        if not self.lengths or any(n < 1 for n in self.lengths):
            raise RunConfigError(f"lengths must be positive (got {self.lengths})")
        if self.samples < 0:
            raise RunConfigError(f"samples must be >= 0 (got {self.samples})")
        if self.sampler not in ("exact", "mcmc"):
            raise RunConfigError(f"sampler must be exact or mcmc (got {self.sampler!r})")
        if self.burn_in < 0 or self.thin < 1:
            raise RunConfigError(f"need burn_in >= 0 and thin >= 1 (got {self.burn_in}, {self.thin})")
        if self.grid < 1:
            raise RunConfigError(f"grid must be positive (got {self.grid})")
        if self.fmt not in ("csv", "json"):
            raise RunConfigError(f"format must be csv or json (got {self.fmt!r})")
        if self.plot not in ("none", "svg"):
            raise RunConfigError(f"plot must be none or svg (got {self.plot!r})")
        if self.workers < 1:
            raise RunConfigError(f"workers must be >= 1 (got {self.workers})")
        if self.family not in FAMILIES:
            raise RunConfigError(f"family must be one of {', '.join(FAMILIES)} (got {self.family!r})")
        if self.max_length < 1:
            raise RunConfigError(f"max_length must be positive (got {self.max_length})")
        parse_exponent(self.time_exp)
        parse_exponent(self.space_exp)
        if self.command in SAMPLING_COMMANDS and self.ensemble is None and self.seed is None:
            raise RunConfigError(f"{self.command} draws samples and needs --seed")
        return self

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["betas"] = list(self.betas)
        d["lengths"] = list(self.lengths)
        return d


# --- value parsing -------------------------------------------------------------------


def parse_float_list(text: str) -> tuple[float, ...]:
    """'0.5,1,2', 'lo:hi:n' (inclusive linspace) or 'beta_c' tokens."""
    out: list[float] = []
    for tok in str(text).replace(" ", "").split(","):
        if not tok:
            continue
        try:
            if tok == "beta_c":
                from .free_energy import critical_beta

                out.append(critical_beta())
            elif ":" in tok:
                lo, hi, n = tok.split(":")
                out.extend(float(v) for v in np.linspace(float(lo), float(hi), int(n)))
            else:
                out.append(float(tok))
        except ValueError:
            raise RunConfigError(f"invalid number list {text!r}") from None
    if not out:
        raise RunConfigError(f"empty number list {text!r}")
    return tuple(out)


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(tok) for tok in str(text).replace(" ", "").split(",") if tok)
    except ValueError:
        raise RunConfigError(f"invalid integer list {text!r}") from None
    if not out:
        raise RunConfigError(f"empty integer list {text!r}")
    return out


def parse_exponent(text: str) -> float:
    """'2/3' or a decimal."""
    try:
        if "/" in str(text):
            num, den = str(text).split("/")
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise RunConfigError(f"invalid exponent {text!r}") from None


_CONVERTERS = {
    "betas": parse_float_list,
    "lengths": parse_int_list,
    "samples": int,
    "seed": int,
    "burn_in": int,
    "thin": int,
    "grid": int,
    "workers": int,
    "max_length": int,
}


def _convert(name: str, value: Any) -> Any:
    conv = _CONVERTERS.get(name)
    if conv is None or not isinstance(value, str):
        return value
    try:
        return conv(value)
    except ValueError:
        raise RunConfigError(f"invalid value for {name}: {value!r}") from None


def build_run_config(command: str, overrides: Mapping[str, Any], ini_path: Optional[Path] = None) -> RunConfig:
    """Built-in defaults, then the INI [run] section, then non-None flags."""
    known = {f.name for f in fields(RunConfig)}
    values: dict[str, Any] = {}
    if ini_path is not None:
        cfg = read_config(ini_path)
        if cfg.has_section(RUN_SECTION):
            for option, raw in cfg.items(RUN_SECTION):
                if option not in known or option == "command":
                    raise RunConfigError(f"unknown option {RUN_SECTION}.{option} in {ini_path}")
                values[option] = _convert(option, raw)
    for name, value in overrides.items():
        if name in known and value is not None:
            values[name] = _convert(name, value)
    values["command"] = command
    return RunConfig(**values).validate()


# --- INI file ------------------------------------------------------------------------


def _parse_key(key: str) -> tuple[str, str]:
    """Return (section, option)."""
    parts = key.split(".")
    if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
        raise RunConfigError(f"invalid config key: {key!r} (expected section.option)")
    return parts[0].strip(), parts[1].strip()


def read_config(path: Path) -> configparser.ConfigParser:
    """Parse the INI file; a missing file reads as empty, a malformed one raises."""
    cfg = configparser.ConfigParser()
    content = read_text_safe(Path(path))
    if content:
        try:
            cfg.read_string(content)
        except configparser.Error as e:
            raise RunConfigError(f"cannot parse {path}: {e}") from None
    return cfg


def write_config(path: Path, cfg: configparser.ConfigParser) -> None:
    buf = io.StringIO()
    cfg.write(buf)
    write_text_atomic(Path(path), buf.getvalue())


def get_value(path: Path, key: str) -> Optional[str]:
    section, option = _parse_key(key)
    cfg = read_config(path)
    if cfg.has_section(section) and cfg.has_option(section, option):
        return cfg.get(section, option)
    return None


def set_value(path: Path, key: str, value: str) -> None:
    section, option = _parse_key(key)
    cfg = read_config(path)
    if not cfg.has_section(section):
        cfg.add_section(section)
    cfg.set(section, option, value)
    write_config(path, cfg)


def list_values(path: Path) -> list[tuple[str, str]]:
    """[(section.option, value), ...] sorted by key."""
    cfg = read_config(path)
    result: list[tuple[str, str]] = []
    for section in sorted(cfg.sections()):
        for option in sorted(cfg.options(section)):
            result.append((f"{section}.{option}", cfg.get(section, option)))
    return result
