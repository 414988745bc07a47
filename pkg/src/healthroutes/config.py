"""Simulation configuration file loading.

The config file is YAML with four optional sections (pyramid, prevalence,
noise, modifiers); missing sections fall back to the package defaults and
unknown keys are rejected. See data/config_default.yaml for a complete,
commented example.
"""

from dataclasses import dataclass

import yaml

from .errors import ConfigurationError
from .population import DEFAULT_PYRAMID, AgePyramid, PrevalenceConfig
from .rating_sim import DEFAULT_MODIFIERS, ModifierTable, NoiseConfig


@dataclass(frozen=True)
class SimulationConfig:
    pyramid: AgePyramid = DEFAULT_PYRAMID
    prevalence: PrevalenceConfig = PrevalenceConfig()
    noise: NoiseConfig = NoiseConfig()
    modifiers: ModifierTable = DEFAULT_MODIFIERS


def default_config() -> SimulationConfig:
    return SimulationConfig()


def load_config(path) -> SimulationConfig:
    """Load a SimulationConfig from a YAML file."""
    with open(path, encoding="utf-8") as handle:
        try:
            payload = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"{path}: invalid YAML: {exc}") from None
    if payload is None:
        return default_config()
    if not isinstance(payload, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    known = {"pyramid", "prevalence", "noise", "modifiers"}
    unknown = set(payload) - known
    if unknown:
        raise ConfigurationError(f"{path}: unknown sections {sorted(unknown)}")
    return SimulationConfig(
        pyramid=_parse_pyramid(payload.get("pyramid"), path),
        prevalence=_parse_prevalence(payload.get("prevalence"), path),
        noise=_parse_noise(payload.get("noise"), path),
        modifiers=_parse_modifiers(payload.get("modifiers"), path),
    )


def _section_fields(section, allowed, path, name) -> dict:
    if not isinstance(section, dict):
        raise ConfigurationError(f"{path}: section {name!r} must be a mapping")
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigurationError(f"{path}: unknown keys {sorted(unknown)} in {name!r}")
    return section


def _parse_pyramid(section, path) -> AgePyramid:
    if section is None:
        return DEFAULT_PYRAMID
    fields = _section_fields(section, ("brackets",), path, "pyramid")
    brackets = fields.get("brackets")
    if not isinstance(brackets, list) or not all(
        isinstance(b, list) and len(b) == 3 for b in brackets
    ):
        raise ConfigurationError(
            f"{path}: pyramid.brackets must be a list of [min_age, max_age, weight]"
        )
    return AgePyramid(brackets=tuple((int(lo), int(hi), float(w)) for lo, hi, w in brackets))


def _parse_prevalence(section, path) -> PrevalenceConfig:
    if section is None:
        return PrevalenceConfig()
    keys = ("visual", "respiratory", "mobility", "cardio", "heart_age_threshold")
    fields = _section_fields(section, keys, path, "prevalence")
    defaults = PrevalenceConfig()
    return PrevalenceConfig(
        p_visual=float(fields.get("visual", defaults.p_visual)),
        p_respiratory=float(fields.get("respiratory", defaults.p_respiratory)),
        p_mobility=float(fields.get("mobility", defaults.p_mobility)),
        p_cardio=float(fields.get("cardio", defaults.p_cardio)),
        heart_age_threshold=int(
            fields.get("heart_age_threshold", defaults.heart_age_threshold)
        ),
    )


def _parse_noise(section, path) -> NoiseConfig:
    if section is None:
        return NoiseConfig()
    fields = _section_fields(section, ("std_dev", "enabled"), path, "noise")
    defaults = NoiseConfig()
    return NoiseConfig(
        std_dev=float(fields.get("std_dev", defaults.std_dev)),
        enabled=bool(fields.get("enabled", defaults.enabled)),
    )


def _parse_modifiers(section, path) -> ModifierTable:
    if section is None:
        return DEFAULT_MODIFIERS
    keys = ("age_brackets", "visual", "respiratory", "mobility", "heart")
    fields = _section_fields(section, keys, path, "modifiers")

    def triple(value, name):
        if not isinstance(value, list) or len(value) != 3:
            raise ConfigurationError(
                f"{path}: modifiers.{name} must be a [distance, elevation, pavement] triple"
            )
        return tuple(float(v) for v in value)

    defaults = DEFAULT_MODIFIERS
    age_rows = defaults.age_rows
    if "age_brackets" in fields:
        rows = fields["age_brackets"]
        if not isinstance(rows, list) or len(rows) != 4:
            raise ConfigurationError(f"{path}: modifiers.age_brackets must list 4 rows")
        age_rows = tuple(triple(row, "age_brackets") for row in rows)
    return ModifierTable(
        age_rows=age_rows,
        visual=triple(fields["visual"], "visual") if "visual" in fields else defaults.visual,
        respiratory=(
            triple(fields["respiratory"], "respiratory")
            if "respiratory" in fields
            else defaults.respiratory
        ),
        mobility=(
            triple(fields["mobility"], "mobility") if "mobility" in fields else defaults.mobility
        ),
        heart=triple(fields["heart"], "heart") if "heart" in fields else defaults.heart,
    )
