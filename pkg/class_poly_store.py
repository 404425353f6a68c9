import hashlib
import json
import logging
import re
from pathlib import Path
from typing import Any, Callable

from colors import Colors
from errors import ConsistencyError


class StoreKey:
    def __init__(self, key_source: dict[str, Any]):
        self._raw_source = key_source
        self._prepared_source = json.dumps(key_source, sort_keys=True, indent=2)
        self._hash = hashlib.sha256(self._prepared_source.encode()).hexdigest()

    def __hash__(self):
        return hash(self.hash)

    def __eq__(self, other):
        return isinstance(other, StoreKey) and self.hash == other.hash

    def __str__(self):
        return self.hash

    @property
    def hash(self) -> str:
        return self._hash

    @property
    def key_source(self) -> str:
        return self._prepared_source


class ClassPolyStore:
    """
    On-disk store of class polynomial reports, one JSON file per (group, twist, element).

    Stored values are deterministic functions of their keys, so concurrent writers at worst
    rewrite a file with the same content.
    """
    VERSION = (0, 1, 0)
    VERSION_STRING = ".".join(map(str, VERSION))

    def __init__(self, cache_dir: Path):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.hit_count = 0
        self.miss_count = 0

        version_file = self.cache_dir.joinpath(".version")
        if not version_file.exists():
            version_file.write_text(self.VERSION_STRING)
        else:
            version = version_file.read_text().strip()
            match = re.match(r"(\d+)\.(\d+)\.(\d+)$", version)
            if not match:
                raise ConsistencyError(f"Wrong version format in {version_file}: {version}. Consider clearing the store")
            if tuple(int(g) for g in match.groups()) > self.VERSION:
                raise ConsistencyError(f"Store version mismatch: {version} > {self.VERSION_STRING}. Consider clearing the store")

    def key(self, group: str, twist: str, element: str, kind: str = "classpoly") -> StoreKey:
        return StoreKey({"group": group, "twist": twist, "element": element, "kind": kind})

    def _file_name(self, key: StoreKey, suffix: str = "json") -> Path:
        return self.cache_dir.joinpath(f"{key.hash}.{suffix}")

    def get(self, key: StoreKey) -> dict | None:
        file_name = self._file_name(key)
        if file_name.exists():
            self.hit_count += 1
            self.logger.debug(f"Store hit {Colors.BRIGHT_GREEN}{key.hash[:12]}{Colors.END}")
            return json.loads(file_name.read_text())
        self.miss_count += 1
        self.logger.debug(f"Store miss {Colors.BRIGHT_RED}{key.hash[:12]}{Colors.END}")
        return None

    def set(self, key: StoreKey, value: dict):
        self._file_name(key).write_text(json.dumps(value, sort_keys=True, indent=2))
        self._file_name(key, "src.json").write_text(key.key_source)

    def cached(self, key: StoreKey, compute: Callable[[], dict]) -> dict:
        value = self.get(key)
        if value is None:
            value = compute()
            self.set(key, value)
        return value
