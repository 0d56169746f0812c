"""Locate packaged resource files (sample lexicon, emoticon/slang maps, label map).

The EMOSIG_RESOURCES environment variable, when set, points at a directory
whose files override the packaged defaults of the same name.
"""
from __future__ import annotations

import os
from importlib import resources as importlib_resources
from pathlib import Path

ENV_VAR = "EMOSIG_RESOURCES"

SAMPLE_LEXICON = "sample_lexicon.json"
EMOTICONS = "emoticons.tsv"
SLANG = "slang.tsv"
LABEL_MAP = "label_map.json"


def resource_path(name: str) -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return Path(str(importlib_resources.files("emosig").joinpath("resources", name)))
