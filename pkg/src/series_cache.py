import logging
import threading
import time
from collections import OrderedDict
from fractions import Fraction
from typing import Callable, Dict, Hashable

from src.errors import ConfigError
from src.series import QSeries, s_truncate

logger = logging.getLogger(__name__)

DEFAULT_CACHE_SIZE = 256


class SeriesCache:
    """
    Singleton class that keeps built series at the highest order requested so far.

    Holds at most `maxsize` entries; the least recently used one is dropped first.
    """

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super(SeriesCache, cls).__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self._series: "OrderedDict[Hashable, QSeries]" = OrderedDict()
        self._key_locks: Dict[Hashable, threading.Lock] = {}
        self._hits = 0
        self._misses = 0
        self._evictions = 0
        self.maxsize = DEFAULT_CACHE_SIZE
        self._build_seconds = 0.0
        self.enabled = True
        self._initialized = True

    def _key_lock(self, key: Hashable) -> threading.Lock:
        with self._lock:
            if key not in self._key_locks:
                self._key_locks[key] = threading.Lock()
            return self._key_locks[key]

    def get(self, key: Hashable, order: Fraction, builder: Callable[[Fraction], QSeries]) -> QSeries:
        """
        Series for `key` known below `order`, built with builder(order) on a miss.

        A cached series built to a higher order is truncated rather than rebuilt.
        """
        if not self.enabled:
            return builder(order)
        with self._key_lock(key):
            cached = self._series.get(key)
            if cached is not None and cached.order >= order:
                self._hits += 1
                self._touch(key)
                return s_truncate(cached, order)
            self._misses += 1
            start = time.perf_counter()
            built = builder(order)
            self._build_seconds += time.perf_counter() - start
            if cached is None or built.order > cached.order:
                self._store(key, built)
            logger.debug("built %s to order %s", key, order)
            return s_truncate(built, min(order, built.order))

    def _touch(self, key: Hashable):
        with self._lock:
            if key in self._series:
                self._series.move_to_end(key)

    def _store(self, key: Hashable, series: QSeries):
        with self._lock:
            self._series[key] = series
            self._series.move_to_end(key)
            self._evict()

    def _evict(self):
        while len(self._series) > self.maxsize:
            old, _ = self._series.popitem(last=False)
            self._key_locks.pop(old, None)
            self._evictions += 1

    def resize(self, maxsize: int):
        if maxsize < 1:
            raise ConfigError(f"cache_size must be positive, got {maxsize}")
        with self._lock:
            self.maxsize = int(maxsize)
            self._evict()

    def clear_cache(self):
        with self._lock:
            self._series.clear()
            self._key_locks.clear()
            self._hits = self._misses = self._evictions = 0
            self._build_seconds = 0.0

    def get_stats(self) -> Dict[str, float]:
        return {
            "entries": len(self._series),
            "hits": self._hits,
            "misses": self._misses,
            "evictions": self._evictions,
            "maxsize": self.maxsize,
            "build_seconds": round(self._build_seconds, 3),
        }
