"""Run configuration: TOML/JSON loading, validation and environment overrides.

Files mirror the library configs, one table per section::

    [trap]
    temperature = 5e-5
    [gate]
    regime = "large_dd"
    [run]
    seed = 1

All quantities are SI with angular frequencies in rad/s and temperatures or
trap depths in kelvin. Noise spectra take either a single flat value or a
table ``{edges = [...], values = [...]}``.

Environment variables ``RYDGATE_<SECTION>_<KEY>`` override file values, for
example ``RYDGATE_TRAP_PRESSURE_MBAR=2e-10`` or ``RYDGATE_RUN_SEED=7``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .atomic import RB87
from .errors import ConfigurationError, ValidationError
from .gate import GateConfig
from .raman import RamanConfig
from .readout import ReadoutConfig
from .rydberg import PairConfig
from .trap import NoiseSpectrum, TrapConfig

ENV_PREFIX = "RYDGATE_"
SPECIES = {"Rb87": RB87}
FORMATS = ("csv", "json")
NOISE_FIELDS = ("intensity_noise", "pointing_noise", "steering_noise")


class ConfigParseError(ConfigurationError):
    """Malformed configuration text; carries the 1-based line and column."""

    def __init__(self, path, line, column, detail):
        self.path, self.line, self.column = path, line, column
        super().__init__(f"{path}:{line}:{column}: {detail}")


@dataclass(frozen=True)
class RunSettings:
    species: str = "Rb87"
    output_dir: str = "results"
    seed: int = 0
    output_format: str = "csv"
    n_samples: int = 3
    plots: bool = True

    def __post_init__(self):
        if self.species not in SPECIES:
            raise ValidationError(f"species must be one of {sorted(SPECIES)}")
        if self.output_format not in FORMATS:
            raise ValidationError(f"output_format must be one of {FORMATS}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ValidationError("n_samples must be a positive integer")


SECTIONS = {
    "trap": TrapConfig,
    "raman": RamanConfig,
    "readout": ReadoutConfig,
    "gate": GateConfig,
    "pair": PairConfig,
    "run": RunSettings,
}


@dataclass(frozen=True)
class RunConfig:
    trap: TrapConfig = field(default_factory=TrapConfig)
    raman: RamanConfig = field(default_factory=RamanConfig)
    readout: ReadoutConfig = field(default_factory=ReadoutConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    pair: PairConfig = field(default_factory=PairConfig)
    run: RunSettings = field(default_factory=RunSettings)

    def to_dict(self) -> dict:
        out = {}
        for name in SECTIONS:
            obj = getattr(self, name)
            out[name] = {f.name: _plain(getattr(obj, f.name))
                         for f in dataclasses.fields(obj) if _user_field(obj, f.name)}
        return out

    def hash(self) -> str:
        """Short digest of everything that affects results (not output location or format)."""
        data = self.to_dict()
        for key in ("output_dir", "output_format", "plots"):
            data["run"].pop(key)
        text = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def replace(self, section: str, **changes) -> "RunConfig":
        return dataclasses.replace(self, **{section: dataclasses.replace(getattr(self, section), **changes)})


def _user_field(cls, name: str) -> bool:
    """Library configs carry a SpeciesData object chosen by [run] species."""
    return name != "species" or cls is RunSettings or isinstance(cls, RunSettings)


def _plain(value):
    if isinstance(value, NoiseSpectrum):
        return {"edges": [_plain(e) for e in value.edges], "values": list(value.values)}
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _coerce(section: str, key: str, value, template):
    """Convert a raw config value to the type of the dataclass default."""
    where = f"[{section}] {key}"
    if key in NOISE_FIELDS:
        if isinstance(value, dict):
            unknown = set(value) - {"edges", "values"}
            if unknown:
                raise ValidationError(f"{where}: unknown key '{sorted(unknown)[0]}'")
            edges = [math.inf if e == "inf" else e for e in value.get("edges", [])]
            return NoiseSpectrum(tuple(edges), tuple(value.get("values", [])))
        return NoiseSpectrum.flat(_number(where, value))
    if key.startswith("eps_"):
        if value is None:
            return None
        if isinstance(value, list) and len(value) == 2:
            return complex(_number(where, value[0]), _number(where, value[1]))
        return _number(where, value)
    if isinstance(template, bool):
        if not isinstance(value, bool):
            raise ValidationError(f"{where} must be true or false")
        return value
    if isinstance(template, int) and not isinstance(template, bool):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ValidationError(f"{where} must be an integer")
        return int(value)
    if isinstance(template, str):
        if not isinstance(value, str):
            raise ValidationError(f"{where} must be a string")
        return value
    if template is None:
        return None if value is None else _number(where, value)
    return _number(where, value)


def _number(where: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where} must be a number")
    return float(value)


def build_config(data: dict) -> RunConfig:
    """Validate a nested mapping and construct the RunConfig."""
    if not isinstance(data, dict):
        raise ValidationError("configuration root must be a table/object")
    for name in data:
        if name not in SECTIONS:
            raise ValidationError(f"unknown section '{name}'")
    run_raw = data.get("run", {})
    species_name = run_raw.get("species", "Rb87") if isinstance(run_raw, dict) else "Rb87"
    if species_name not in SPECIES:
        raise ValidationError(f"[run] species must be one of {sorted(SPECIES)}")
    parts = {}
    for name, cls in SECTIONS.items():
        raw = data.get(name, {})
        if not isinstance(raw, dict):
            raise ValidationError(f"section '{name}' must be a table")
        defaults = {f.name: f for f in dataclasses.fields(cls) if _user_field(cls, f.name)}
        kwargs = {}
        for key, value in raw.items():
            if key not in defaults:
                raise ValidationError(f"unknown key '{key}' in section [{name}]")
            f = defaults[key]
            template = f.default if f.default is not dataclasses.MISSING else None
            kwargs[key] = _coerce(name, key, value, template)
        if "species" not in defaults and "species" in {f.name for f in dataclasses.fields(cls)}:
            kwargs["species"] = SPECIES[species_name]
        try:
            parts[name] = cls(**kwargs)
        except ValidationError as exc:
            raise ValidationError(f"[{name}] {exc}") from None
    return RunConfig(**parts)


def _parse_text(text: str, path: str) -> dict:
    if path.endswith(".json"):
        try:
            return json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as exc:
            raise ConfigParseError(path, exc.lineno, exc.colno, exc.msg) from None
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"at line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (0, 0)
        detail = re.sub(r"\s*\(at line \d+, column \d+\)", "", str(exc))
        raise ConfigParseError(path, line, col, detail) from None


def env_overrides(environ=None) -> dict:
    """Collect ``RYDGATE_<SECTION>_<KEY>`` variables into a nested mapping."""
    environ = os.environ if environ is None else environ
    out: dict = {}
    for name, raw in sorted(environ.items()):
        if not name.startswith(ENV_PREFIX):
            continue
        rest = name[len(ENV_PREFIX):].lower()
        section, _, key = rest.partition("_")
        if section not in SECTIONS or not key:
            raise ValidationError(f"environment variable {name} does not name a section and key")
        try:
            value = tomllib.loads(f"v = {raw}")["v"]
        except tomllib.TOMLDecodeError:
            value = raw
        out.setdefault(section, {})[key] = value
    return out


def merge(base: dict, overrides: dict) -> dict:
    merged = {k: dict(v) if isinstance(v, dict) else v for k, v in base.items()}
    for section, values in overrides.items():
        merged.setdefault(section, {})
        merged[section].update(values)
    return merged


def load_config(path=None, environ=None, overrides: dict | None = None) -> RunConfig:
    """Read a TOML or JSON file (or nothing), apply environment and explicit overrides."""
    data: dict = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config '{path}': {exc.strerror}") from None
        data = _parse_text(text, str(p))
    data = merge(data, env_overrides(environ))
    if overrides:
        data = merge(data, overrides)
    return build_config(data)
