"""
On-disk cache for expensive group data (lattices, marks, character tables).

One JSON file per (key, kind). Writes go to a temporary file in the same
directory followed by ``os.replace``, so concurrent processes sharing a cache
directory only ever see complete entries.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, TypeVar

import structlog

logger = structlog.get_logger()

T = TypeVar("T")

CACHE_VERSION = "1"
KINDS = ("lattice", "marks", "chartable")


class CacheStore:
    """Versioned JSON cache with atomic writes and an in-memory fallback."""

    def __init__(self, directory: str | Path | None, version: str = CACHE_VERSION):
        self.version = version
        self.directory: Path | None = None
        self._memory: dict[tuple[str, str], Any] = {}
        if directory is not None:
            try:
                path = Path(directory)
                path.mkdir(parents=True, exist_ok=True)
                if not os.access(path, os.W_OK):
                    raise PermissionError(f"{path} is not writable")
                self.directory = path
            except OSError as e:
                logger.warning(
                    "Cache directory unusable, keeping entries in memory",
                    directory=str(directory),
                    error=str(e),
                )

    def _path(self, key: str, kind: str) -> Path:
        digest = hashlib.sha1(key.encode()).hexdigest()[:12]
        safe = "".join(ch if ch.isalnum() else "_" for ch in key)[:40]
        return self.directory / f"{kind}-{safe}-{digest}.json"

    def get(self, key: str, kind: str) -> Any | None:
        """Return the payload for (key, kind), or None on miss, version or key mismatch."""
        if (key, kind) in self._memory:
            return self._memory[(key, kind)]
        if self.directory is None:
            return None
        path = self._path(key, kind)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
        except (OSError, ValueError) as e:
            logger.warning("Corrupt cache entry, rebuilding", key=key, kind=kind, error=str(e))
            return None
        if not isinstance(entry, dict) or entry.get("version") != self.version:
            logger.info("Cache version mismatch, rebuilding", key=key, kind=kind)
            return None
        if entry.get("key") != key or entry.get("kind") != kind:
            return None
        return entry.get("payload")

    def put(self, key: str, kind: str, payload: Any) -> None:
        self._memory[(key, kind)] = payload
        if self.directory is None:
            return
        entry = {"version": self.version, "key": key, "kind": kind, "payload": payload}
        path = self._path(key, kind)
        try:
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError as e:
            logger.warning("Could not write cache entry", key=key, kind=kind, error=str(e))

    def get_or_build(
        self,
        key: str,
        kind: str,
        build: Callable[[], T],
        encode: Callable[[T], Any],
        decode: Callable[[Any], T],
        persist: bool = True,
    ) -> T:
        """Decode a cached payload when present and valid, else build and store it."""
        if not persist:
            return build()
        payload = self.get(key, kind)
        if payload is not None:
            try:
                value = decode(payload)
                logger.debug("Cache hit", key=key, kind=kind)
                return value
            except (KeyError, TypeError, ValueError, IndexError) as e:
                logger.warning("Undecodable cache entry, rebuilding", key=key, kind=kind,
                               error=str(e))
        value = build()
        self.put(key, kind, encode(value))
        logger.debug("Cache miss, stored", key=key, kind=kind)
        return value

    def clear(self) -> int:
        """Delete every cache file; returns how many were removed."""
        self._memory.clear()
        if self.directory is None:
            return 0
        removed = 0
        for path in self.directory.glob("*.json"):
            try:
                path.unlink()
                removed += 1
            except OSError as e:
                logger.warning("Could not remove cache file", path=str(path), error=str(e))
        return removed
