"""JSON results cache for per-cell delta sums, keyed by potential, m, n and mode."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .motive import MotiveExpr

CACHE_VERSION = 1
CACHE_ENV = "BSMOTIVE_CACHE"


def default_cache_path() -> Path | None:
    value = os.environ.get(CACHE_ENV)
    return Path(value) if value else None


class ResultsCache:
    """Read-through/write-through store; a file with another version stamp is ignored."""

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self.entries: dict[str, list] = {}
        if self.path and self.path.exists():
            try:
                data = json.loads(self.path.read_text())
            except (OSError, json.JSONDecodeError):
                data = {}
            if data.get("version") == CACHE_VERSION:
                self.entries = dict(data.get("entries", {}))

    @staticmethod
    def key(potential: str, m: int, n: int, mode: str) -> str:
        return f"{potential}|m={m}|n={n}|mode={mode}"

    def get(self, key: str) -> MotiveExpr | None:
        if key not in self.entries:
            return None
        return MotiveExpr.from_json(self.entries[key])

    def put(self, key: str, value: MotiveExpr):
        self.entries[key] = value.to_json()
        self.save()

    def save(self):
        if not self.path:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps({"version": CACHE_VERSION, "entries": self.entries}, indent=1, sort_keys=True))
        tmp.replace(self.path)

    def clear(self):
        self.entries = {}
        if self.path and self.path.exists():
            self.path.unlink()

    def __len__(self) -> int:
        return len(self.entries)
