"""Content-addressed on-disk cache for serialized graded characters.

Each entry is a JSON file named by a SHA-256 digest of the request
(type, rank, family, weight, level, truncation, schema version).  Entries
carry a hash of their own q^0 slice; an entry whose check fails, or whose
schema version differs, is treated as a miss.  Writes go through a
temporary file and ``os.replace`` so concurrent processes never observe a
partial file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Optional, Sequence

from .cartan import RootSystem
from .charring import GradedCharacter, deserialize, serialize

SCHEMA_VERSION = 1
ENV_VAR = "AFFCHAR_CACHE_DIR"

log = logging.getLogger(__name__)


def default_cache_dir() -> Optional[Path]:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def cache_key(type_label: str, rank: int, family: str, weight: Sequence[int], level: int,
              truncation: Optional[int]) -> str:
    payload = json.dumps({
        "type": type_label, "rank": rank, "family": family, "weight": [int(x) for x in weight],
        "level": level, "truncation": "exact" if truncation is None else truncation,
        "schema_version": SCHEMA_VERSION,
    }, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _slice_digest(terms: list[dict]) -> str:
    base = [t for t in terms if t["q"] == 0]
    return hashlib.sha256(json.dumps(base, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def dumps(data: dict) -> str:
    """The canonical byte form used for cache files and CLI JSON output."""
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


class CharacterCache:
    def __init__(self, directory):
        self.directory = Path(directory)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str, rank: int) -> Optional[GradedCharacter]:
        path = self._path(key)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("cache entry %s is unreadable (%s); recomputing", path.name, exc)
            return None
        if data.get("schema_version") != SCHEMA_VERSION:
            return None
        try:
            if data.get("slice0_sha256") != _slice_digest(data["terms"]):
                raise ValueError("q^0 slice hash mismatch")
            return deserialize(data, rank)
        except (KeyError, TypeError, ValueError) as exc:
            log.warning("cache entry %s failed its self-check (%s); recomputing", path.name, exc)
            return None

    def put(self, key: str, f: GradedCharacter, header: dict) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        data = serialize(f, {**header, "schema_version": SCHEMA_VERSION})
        data["slice0_sha256"] = _slice_digest(data["terms"])
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(dumps(data))
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return self._path(key)

    def get_or_compute(self, rs: RootSystem, family: str, weight: Sequence[int], level: int,
                       truncation: Optional[int], compute: Callable[[], GradedCharacter]) -> GradedCharacter:
        key = cache_key(rs.type_label, rs.rank, family, weight, level, truncation)
        hit = self.get(key, rs.rank)
        if hit is not None:
            return hit
        f = compute()
        self.put(key, f, {"type": rs.type_label, "rank": rs.rank, "family": family,
                          "weight": [int(x) for x in weight]})
        return f


__all__ = ["CharacterCache", "ENV_VAR", "SCHEMA_VERSION", "cache_key", "default_cache_dir", "dumps"]
