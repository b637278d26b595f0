"""Parameter files and engineering-unit parsing.

A parameter file is flat ``key = value unit`` text, one entry per line,
``#`` starting a comment. Values may be quoted, so a TOML file with string
values is also accepted::

    X = 10.75 mm
    l = 437 nH/m
    L_c = "231 pH"
    Phi_ext = 0.5 Phi0

JSON files written by the CLI (which carry a ``"params"`` object in SI
units) are accepted as well.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

from .params import FIELDS, PHI0, PLANCK, CircuitParams, ParameterError

# decimal exponents; scaling by an exact power of ten keeps "10.75 mm" == 10.75e-3
PREFIXES = {
    "f": -15, "p": -12, "n": -9, "u": -6, "µ": -6, "μ": -6,
    "m": -3, "c": -2, "k": 3, "M": 6, "G": 9, "T": 12,
}

# base units accepted per quantity kind, with their SI factor
BASE_UNITS = {
    "length": {"m": 1.0},
    "inductance_per_length": {"H/m": 1.0},
    "capacitance_per_length": {"F/m": 1.0},
    "inductance": {"H": 1.0},
    "capacitance": {"F": 1.0},
    "energy": {"J": 1.0, "Hz": PLANCK, "eV": 1.602176634e-19},
    "current": {"A": 1.0},
    "flux": {"Wb": 1.0, "Phi0": PHI0},
    "frequency": {"Hz": 2 * math.pi, "rad/s": 1.0},
    "dimensionless": {"": 1.0},
}

FIELD_KINDS = {
    "X": "length",
    "l": "inductance_per_length",
    "c": "capacitance_per_length",
    "L_c": "inductance",
    "L_2": "inductance",
    "C_q": "capacitance",
    "E_J": "energy",
    "C_R": "capacitance",
    "Phi_ext": "flux",
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


class ConfigError(ValueError):
    """Malformed parameter file or quantity string."""


def _unit_factor(unit, kind):
    """(decimal exponent, base factor) for ``unit``."""
    table = BASE_UNITS[kind]
    if unit in table:
        return 0, table[unit]
    for base, factor in table.items():
        if base and unit.endswith(base):
            prefix = unit[: -len(base)]
            if prefix in PREFIXES:
                return PREFIXES[prefix], factor
    raise ConfigError(f"unit {unit!r} is not a valid {kind.replace('_', ' ')}")


def parse_quantity(text, kind="dimensionless"):
    """Parse ``"231 pH"``, ``"115.5pH"``, ``"0.5 Phi0"`` into an SI float.

    A bare number is taken as SI. Frequencies in Hz are returned as angular
    frequencies (rad/s).
    """
    if isinstance(text, (int, float)):
        return float(text)
    match = _NUMBER.match(str(text))
    if not match:
        raise ConfigError(f"cannot parse quantity {text!r}")
    value, unit = float(match.group(1)), match.group(2)
    if not unit:
        return value
    exponent, factor = _unit_factor(unit, kind)
    value = value / 10.0**-exponent if exponent < 0 else value * 10.0**exponent
    return value * factor if factor != 1.0 else value


def parse_field(key, text):
    """Convert one parameter entry to SI.

    ``E_J`` may alternatively be given as a critical current (``0.5 uA``),
    in which case it is converted through E_J = I_c Phi0 / (2 pi).
    """
    if key not in FIELD_KINDS:
        raise ConfigError(f"unknown parameter key {key!r}")
    kind = FIELD_KINDS[key]
    if key == "E_J":
        try:
            return parse_quantity(text, "energy")
        except ConfigError:
            return parse_quantity(text, "current") * PHI0 / (2 * math.pi)
    return parse_quantity(text, kind)


def parse_text(text) -> CircuitParams:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value unit'")
        key, value = (s.strip() for s in line.split("=", 1))
        value = value.strip("'\"")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = parse_field(key, value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return _build(values)


def _build(values) -> CircuitParams:
    unknown = set(values) - set(FIELDS)
    if unknown:
        raise ConfigError(f"unknown parameter keys: {sorted(unknown)}")
    missing = [k for k in ("X", "l", "c", "L_c", "L_2") if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {missing}")
    return CircuitParams(**values)


def load(path) -> CircuitParams:
    """Read a parameter file (key-value text or CLI JSON output)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        data = json.loads(text)
        data = data.get("params", data)
        return _build({k: float(v) for k, v in data.items()})
    return parse_text(text)


def dumps(params: CircuitParams) -> str:
    """SI key-value text that :func:`parse_text` reads back exactly."""
    units = {"length": "m", "inductance_per_length": "H/m", "capacitance_per_length": "F/m",
             "inductance": "H", "capacitance": "F", "energy": "J", "flux": "Wb"}
    lines = []
    for key in FIELDS:
        lines.append(f"{key} = {getattr(params, key)!r} {units[FIELD_KINDS[key]]}")
    return "\n".join(lines) + "\n"


def published_config_path() -> Path:
    return Path(__file__).with_name("data") / "published.toml"


__all__ = [
    "ConfigError", "ParameterError", "dumps", "load", "parse_field",
    "parse_quantity", "parse_text", "published_config_path",
]
