"""Runtime configuration: JSON file plus BITEXTHUB_* environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .align import AlignmentParams
from .corpus import FilterRule
from .engine import EnginePolicy
from .errors import DataError

ENV_PREFIX = "BITEXTHUB_"


@dataclass(frozen=True)
class AppConfig:
    store_dir: str = "store"
    host: str = "127.0.0.1"
    port: int = 8080
    admin_token: str = ""
    translator_mode: str = "memory"  # or "external"
    translator_url: str = ""
    translator_timeout: float = 10.0
    static_dir: str = ""
    policy: EnginePolicy = field(default_factory=EnginePolicy)
    filter_rules: FilterRule = field(default_factory=FilterRule)
    align_variance: float = 6.8
    align_mean_ratio: float = 1.0

    def align_params(self) -> AlignmentParams:
        return AlignmentParams(mean_ratio=self.align_mean_ratio,
                               variance=self.align_variance)

    def to_dict(self) -> dict:
        return {
            "store_dir": self.store_dir,
            "host": self.host,
            "port": self.port,
            "admin_token": self.admin_token,
            "translator_mode": self.translator_mode,
            "translator_url": self.translator_url,
            "translator_timeout": self.translator_timeout,
            "static_dir": self.static_dir,
            "policy": self.policy.to_dict(),
            "filter_rules": {
                "max_len_tokens": self.filter_rules.max_len_tokens,
                "max_token_ratio": self.filter_rules.max_token_ratio,
                "min_len_tokens": self.filter_rules.min_len_tokens,
            },
            "align_variance": self.align_variance,
            "align_mean_ratio": self.align_mean_ratio,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AppConfig":
        fr = d.get("filter_rules", {})
        return cls(
            store_dir=d.get("store_dir", "store"),
            host=d.get("host", "127.0.0.1"),
            port=int(d.get("port", 8080)),
            admin_token=d.get("admin_token", ""),
            translator_mode=d.get("translator_mode", "memory"),
            translator_url=d.get("translator_url", ""),
            translator_timeout=float(d.get("translator_timeout", 10.0)),
            static_dir=d.get("static_dir", ""),
            policy=EnginePolicy.from_dict(d.get("policy", {})),
            filter_rules=FilterRule(
                max_len_tokens=fr.get("max_len_tokens", 120),
                max_token_ratio=fr.get("max_token_ratio", 3.0),
                min_len_tokens=fr.get("min_len_tokens", 1),
            ),
            align_variance=float(d.get("align_variance", 6.8)),
            align_mean_ratio=float(d.get("align_mean_ratio", 1.0)),
        )


def load_config(path: str | Path | None = None,
                env: dict | None = None) -> AppConfig:
    """File values under env overrides; either source is optional."""
    config = AppConfig()
    if path is not None:
        p = Path(path)
        try:
            raw = json.loads(p.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise DataError(f"config file not found: {p}")
        except json.JSONDecodeError as exc:
            raise DataError(f"config file is not valid JSON: {exc}")
        if not isinstance(raw, dict):
            raise DataError("config root must be a JSON object")
        config = AppConfig.from_dict(raw)
    env = os.environ if env is None else env
    overrides = {}
    simple = {
        "STORE_DIR": ("store_dir", str),
        "HOST": ("host", str),
        "PORT": ("port", int),
        "ADMIN_TOKEN": ("admin_token", str),
        "TRANSLATOR_MODE": ("translator_mode", str),
        "TRANSLATOR_URL": ("translator_url", str),
        "TRANSLATOR_TIMEOUT": ("translator_timeout", float),
        "STATIC_DIR": ("static_dir", str),
    }
    for key, (attr, cast) in simple.items():
        value = env.get(ENV_PREFIX + key)
        if value is not None:
            try:
                overrides[attr] = cast(value)
            except ValueError:
                raise DataError(f"bad value for {ENV_PREFIX}{key}: {value!r}")
    if overrides:
        config = replace(config, **overrides)
    return config


def save_config(config: AppConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
