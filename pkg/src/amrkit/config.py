"""Pipeline configuration: key-value files, CLI overrides, run manifests."""

from __future__ import annotations

import hashlib
from typing import Mapping

from amrkit.actions import ActionLabel, DEFAULT_RELIABILITY, ReliabilityTable


class ConfigError(ValueError):
    pass


# key -> (parser, default)
CONFIG_SPEC: dict[str, tuple] = {
    "seed": (int, 13),
    "smatch.restarts": (int, 32),
    "align.beta": (float, 0.1),
    "align.hill-climb-iters": (int, 100),
    "extract.max-span": (int, 6),
    "dict.max-span": (int, 4),
    "train.l2": (float, 1.0),
    "train.max-iters": (int, 500),
    "train.tol": (float, 1e-4),
    "train.step": (float, 1.0),
    "scorer.epochs": (int, 10),
    "reliability.VERB": (float, DEFAULT_RELIABILITY[ActionLabel.VERB]),
    "reliability.DATE": (float, DEFAULT_RELIABILITY[ActionLabel.DATE]),
    "reliability.LEMMA": (float, DEFAULT_RELIABILITY[ActionLabel.LEMMA]),
    "reliability.VALUE": (float, DEFAULT_RELIABILITY[ActionLabel.VALUE]),
    "reliability.DICT": (float, DEFAULT_RELIABILITY[ActionLabel.DICT]),
}


class PipelineConfig:
    def __init__(self, values: Mapping[str, object]):
        unknown = sorted(set(values) - set(CONFIG_SPEC))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        self._values = {k: default for k, (_, default) in CONFIG_SPEC.items()}
        self._values.update(values)

    def __getitem__(self, key: str):
        if key not in CONFIG_SPEC:
            raise ConfigError(f"unknown config key: {key}")
        return self._values[key]

    def reliability_table(self) -> ReliabilityTable:
        overrides = {
            ActionLabel.VERB: self["reliability.VERB"],
            ActionLabel.DATE: self["reliability.DATE"],
            ActionLabel.LEMMA: self["reliability.LEMMA"],
            ActionLabel.VALUE: self["reliability.VALUE"],
            ActionLabel.DICT: self["reliability.DICT"],
        }
        try:
            return DEFAULT_RELIABILITY.replace(overrides)
        except ValueError as e:
            raise ConfigError(f"bad reliability overrides: {e}") from None

    def canonical_lines(self) -> list[str]:
        return [f"{k} = {self._values[k]!r}" for k in sorted(CONFIG_SPEC)]

    def hash(self) -> str:
        return hashlib.sha256("\n".join(self.canonical_lines()).encode()).hexdigest()


def _parse_value(key: str, text: str):
    if key not in CONFIG_SPEC:
        raise ConfigError(f"unknown config key: {key}")
    parser = CONFIG_SPEC[key][0]
    try:
        return parser(text)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None


def load_config(path=None, overrides: Mapping[str, str] | None = None) -> PipelineConfig:
    """Config file of `key = value` lines; CLI overrides take precedence."""
    values: dict[str, object] = {}
    if path is not None:
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, _, text = line.partition("=")
                key = key.strip()
                values[key] = _parse_value(key, text.strip())
    for key, text in (overrides or {}).items():
        values[key] = _parse_value(key, text)
    return PipelineConfig(values)


def manifest_text(command: str, config: PipelineConfig) -> str:
    lines = [
        f"command = {command}",
        f"config-hash = {config.hash()}",
        f"seed = {config['seed']}",
    ]
    lines.extend(config.canonical_lines())
    return "".join(line + "\n" for line in lines)
