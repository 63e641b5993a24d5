import logging
import threading
from typing import Dict, Hashable, Optional

from settings.config import settings

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)


class MemoStore:
    """Shared memo table for skein reductions; reads and writes hold one lock."""

    def __init__(self, max_entries: int):
        self.max_entries = max_entries
        self._entries: Dict[Hashable, object] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable) -> Optional[object]:
        with self._lock:
            value = self._entries.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, key: Hashable, value: object) -> None:
        with self._lock:
            if len(self._entries) >= self.max_entries:
                logger.info(f"Memo store reached {self.max_entries} entries, clearing")
                self._entries.clear()
            self._entries[key] = value

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


# Global memo store
store: Optional[MemoStore] = None
_store_lock = threading.Lock()


def connect_memo_store() -> MemoStore:
    """Open the memo store when the application starts."""
    global store
    with _store_lock:
        if store is None:
            logger.info(f"Opening memo store with capacity {settings.MEMO_MAX_ENTRIES}")
            store = MemoStore(settings.MEMO_MAX_ENTRIES)
        return store


def close_memo_store() -> None:
    """Drop the memo store when the application shuts down."""
    global store
    with _store_lock:
        if store is not None:
            logger.info(f"Closing memo store ({len(store)} entries, {store.hits} hits)")
            store.clear()
            store = None


def get_memo_store() -> Optional[MemoStore]:
    """Return the memo store, opening it on first use; None when memoization is disabled."""
    if not settings.MEMO_ENABLED:
        return None
    if store is None:
        return connect_memo_store()
    return store
