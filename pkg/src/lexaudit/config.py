"""JSON configuration for the CLI and the annotation service."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus, load_corpus
from .errors import ConfigError
from .lexicon import Dictionary, load_dictionary, merge

ENV_CONFIG = "LEXAUDIT_CONFIG"


@dataclass
class Config:
    """Parsed configuration.

    corpora: list of {"path", "format", "name"?, "partition"?}
    dictionaries: list of {"path", "format", "category"?, "name"?}
    """

    corpora: list[dict] = field(default_factory=list)
    dictionaries: list[dict] = field(default_factory=list)
    profile: str = "gendered_language"
    ava_path: str | None = None
    ava_mode: str = "remove"
    exclusions: list[str] | None = None
    candidates_path: str | None = None
    journal_dir: str | None = None
    host: str = "127.0.0.1"
    port: int = 8765

    def load_corpora(self) -> dict[str, Corpus]:
        corpora: dict[str, Corpus] = {}
        for spec in self.corpora:
            corpus = load_corpus(
                spec["path"],
                spec["format"],
                name=spec.get("name"),
                partition=spec.get("partition", "unpartitioned"),
            )
            if corpus.name in corpora:
                raise ConfigError(f"duplicate corpus name {corpus.name!r}")
            corpora[corpus.name] = corpus
        return corpora

    def load_dictionary(self) -> Dictionary | None:
        loaded = [
            load_dictionary(
                spec["path"],
                spec["format"],
                category=spec.get("category"),
                name=spec.get("name"),
            )
            for spec in self.dictionaries
        ]
        if not loaded:
            return None
        if len(loaded) == 1:
            return loaded[0]
        return merge(loaded)


def load_config(path: str | Path | None = None) -> Config:
    """Load config from a path, or from $LEXAUDIT_CONFIG when omitted."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
        if not path:
            raise ConfigError(
                f"no config path given and {ENV_CONFIG} is not set"
            )
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    data = json.loads(path.read_text(encoding="utf-8"))
    known = set(Config.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    config = Config(**data)
    for spec in list(config.corpora) + list(config.dictionaries):
        if not Path(spec["path"]).exists():
            raise ConfigError(f"referenced file not found: {spec['path']}")
    for ref in (config.ava_path, config.candidates_path):
        if ref is not None and not Path(ref).exists():
            raise ConfigError(f"referenced file not found: {ref}")
    return config
