"""Run configuration: defaults, an optional TOML file, then command-line flags."""

from __future__ import annotations

import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cq import DEFAULT_LOWER, DEFAULT_UPPER, check_thresholds
from .errors import ConfigError
from .lint import DEFAULT_ROLE_LEXICON, LintConfig

CONFIG_ENV = "GENOME_CONFIG"
FORMATS = ("markdown", "json")


@dataclass
class RunConfig:
    ontology_path: str | None = None
    corpus_path: str | None = None
    matrix_path: str | None = None
    patch_dirs: list[str] = field(default_factory=list)
    template_path: str | None = None
    predicate_map_path: str | None = None
    lower: float = DEFAULT_LOWER
    upper: float = DEFAULT_UPPER
    upper_namespaces: list[str] = field(default_factory=list)
    output_format: str = "markdown"
    out: str | None = None
    max_iters: int = 10
    strict: bool = False
    internal_fixes: bool = False
    base_namespace: str | None = None
    character_class: str | None = None
    default_domain: str | None = None
    default_range: str | None = None
    role_lexicon: list[str] = field(default_factory=lambda: list(DEFAULT_ROLE_LEXICON))
    data_integration: bool = False
    profile_threshold: float = 0.5
    timestamp: str | None = None

    def validate(self) -> "RunConfig":
        check_thresholds(self.lower, self.upper)
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.output_format!r}")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")
        if not 0 < self.profile_threshold <= 1:
            raise ConfigError("profile_threshold must lie in (0, 1]")
        return self

    def lint_config(self) -> LintConfig:
        return LintConfig(
            default_domain=self.default_domain,
            default_range=self.default_range,
            role_lexicon=tuple(self.role_lexicon),
            upper_namespaces=tuple(self.upper_namespaces),
            data_integration=self.data_integration,
            profile_threshold=self.profile_threshold,
        )

    def to_dict(self) -> dict:
        return asdict(self)


# config-file spellings that differ from the field names
_ALIASES = {
    "ontology": "ontology_path",
    "corpus": "corpus_path",
    "matrix": "matrix_path",
    "patch": "patch_dirs",
    "patches": "patch_dirs",
    "template": "template_path",
    "predicate_map": "predicate_map_path",
    "format": "output_format",
}


def _coerce(name: str, value, source: str):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    kind = kinds[name]
    if kind.startswith("list"):
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{source}: {name} must be a list of strings")
        return list(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{source}: {name} must be true or false")
        return value
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{source}: {name} must be a number")
        return float(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{source}: {name} must be an integer")
        return value
    if not isinstance(value, str):
        raise ConfigError(f"{source}: {name} must be a string")
    return value


def load_config_file(path: str | Path) -> dict:
    """Read a TOML config file into RunConfig field names.

    Relative paths in the file are resolved against the file's directory.
    """
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in data.items():
        name = _ALIASES.get(key, key)
        if name not in known:
            raise ConfigError(f"{path}: unknown config key {key!r}")
        out[name] = _coerce(name, value, str(path))
    for name in ("ontology_path", "corpus_path", "matrix_path", "template_path", "predicate_map_path", "out"):
        if name in out and not Path(out[name]).is_absolute():
            out[name] = str(path.parent / out[name])
    if "patch_dirs" in out:
        out["patch_dirs"] = [p if Path(p).is_absolute() else str(path.parent / p) for p in out["patch_dirs"]]
    return out


def resolve_config(flags: dict, env: dict | None = None) -> RunConfig:
    """Merge flags over the ``GENOME_CONFIG`` file over defaults.

    ``flags`` holds only the options the user actually gave (``None`` means unset).
    """
    env = os.environ if env is None else env
    merged = {}
    path = flags.pop("config", None) or env.get(CONFIG_ENV)
    if path:
        if not Path(path).is_file():
            raise FileNotFoundError(f"config file not found: {path}")
        merged.update(load_config_file(path))
    merged.update({k: v for k, v in flags.items() if v is not None and v != []})
    return RunConfig(**merged).validate()
