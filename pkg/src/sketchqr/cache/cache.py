"""Disk-based cache for generated test matrices and their singular values."""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional

import diskcache

from ..config import CACHE_DIR, CACHE_TTL
from ..logging import get_logger
from ..testmat import TestMatrix, gen_by_name

logger = get_logger(__name__)


class MatrixCache:
    """Disk cache for generated test matrices."""

    def __init__(self, cache_dir: Optional[Path] = None):
        cache_dir = cache_dir or CACHE_DIR
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        self.cache = diskcache.Cache(str(cache_dir))

    def _make_key(self, prefix: str, identifier: str) -> str:
        """Create a cache key."""
        normalized = identifier.strip().lower()
        if len(normalized) > 100:
            normalized = hashlib.md5(normalized.encode()).hexdigest()
        return f"{prefix}:{normalized}"

    @staticmethod
    def describe(name: str, m: int, n: int, seed: int, params: Dict[str, Any]) -> str:
        """Canonical generator descriptor."""
        kept = {key: value for key, value in sorted(params.items()) if value is not None}
        return f"{name}/{m}x{n}/seed={seed}/{json.dumps(kept, sort_keys=True)}"

    def get_matrix(self, descriptor: str) -> Optional[TestMatrix]:
        """Get a cached test matrix."""
        key = self._make_key("matrix", descriptor)
        result = self.cache.get(key)
        if result is not None:
            logger.debug(f"Cache hit for matrix: {descriptor}")
        return result

    def set_matrix(self, descriptor: str, matrix: TestMatrix) -> None:
        """Cache a test matrix."""
        key = self._make_key("matrix", descriptor)
        self.cache.set(key, matrix, expire=CACHE_TTL)
        logger.debug(f"Cached matrix for: {descriptor}")

    def get_sigma(self, descriptor: str):
        """Get cached singular values of a test matrix."""
        key = self._make_key("sigma", descriptor)
        result = self.cache.get(key)
        if result is not None:
            logger.debug(f"Cache hit for sigma: {descriptor}")
        return result

    def set_sigma(self, descriptor: str, sigma) -> None:
        """Cache singular values of a test matrix."""
        key = self._make_key("sigma", descriptor)
        self.cache.set(key, sigma, expire=CACHE_TTL)
        logger.debug(f"Cached sigma for: {descriptor}")

    def generate(self, name: str, m: int, n: int, seed: int = 0, **params: Any) -> TestMatrix:
        """gen_by_name through the cache."""
        descriptor = self.describe(name, m, n, seed, params)
        cached = self.get_matrix(descriptor)
        if cached is not None:
            return cached
        result = gen_by_name(name, m, n, seed, **params)
        self.set_matrix(descriptor, result)
        return result

    def clear(self) -> None:
        """Clear all cache."""
        self.cache.clear()
        logger.info("Cache cleared")
