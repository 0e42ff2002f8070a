"""
Pairwise GED index.

For every pair of database graphs the threshold GED up to tau_index is
stored in both graphs' entry lists. Builds run on a pool of worker threads
fed by a shared graph-id dispenser; a memory governor caps the number of
live search nodes by preempting the worker with the largest queue, whose
pair is then stored as an inexact entry (a lower bound of the true GED).
"""

import math
import struct
import threading
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Set

from src.core.domain import BuildConfig
from src.core.ged import GedSearch, SearchControl
from src.core.graph import GraphDatabase
from src.utils.logger import logger

MAGIC = b"NASSIX01"
_HEADER = struct.Struct("<8sIB")
_COUNT = struct.Struct("<I")
_ENTRY = struct.Struct("<IB")
_INEXACT_BIT = 0x80


class IndexRangeError(ValueError):
    """Neighborhood radius outside the indexed range."""
    pass


class IndexFormatError(Exception):
    """Index file is corrupt or not an index file."""
    pass


class IndexEntry(NamedTuple):
    neighbor: int
    distance: int
    exact: bool = True


@dataclass
class GedIndex:
    """Per graph, entries sorted by (distance, neighbor)."""
    tau_index: int
    entries: List[List[IndexEntry]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def neighbors(self, gid: int, t: int, exact_only: bool = False) -> Set[int]:
        """Graphs stored within distance t of gid, optionally exact entries only."""
        if not 0 <= t <= self.tau_index:
            raise IndexRangeError(f"radius {t} outside the indexed range 0..{self.tau_index}")
        found = set()
        for entry in self.entries[gid]:
            if entry.distance > t:
                break
            if entry.exact or not exact_only:
                found.add(entry.neighbor)
        return found

    def lookup(self, i: int, j: int) -> Optional[IndexEntry]:
        for entry in self.entries[i]:
            if entry.neighbor == j:
                return entry
        return None

    @property
    def entry_count(self) -> int:
        return sum(len(row) for row in self.entries)

    @property
    def inexact_count(self) -> int:
        return sum(1 for row in self.entries for e in row if not e.exact)

    @property
    def inexact_percentage(self) -> float:
        total = self.entry_count
        return 100.0 * self.inexact_count / total if total else 0.0

    def compact_size_bits(self) -> int:
        """Size if every entry were bit-packed as id, distance and exactness flag."""
        id_bits = math.ceil(math.log2(len(self.entries))) if len(self.entries) > 1 else 0
        distance_bits = math.ceil(math.log2(self.tau_index + 1))
        return self.entry_count * (id_bits + distance_bits + 1)


class MemoryGovernor:
    """
    Keeps the live search nodes of all workers under a budget.

    Checked synchronously whenever a worker publishes its queue size and
    periodically from a background thread.
    """

    def __init__(self, controls: List[SearchControl], budget: int, interval: float = 0.001):
        self.controls = controls
        self.budget = budget
        self.interval = interval
        self.preemptions = 0
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def live_nodes(self) -> int:
        return sum(c.queue_size for c in self.controls if c.active)

    def check(self, _publisher: Optional[SearchControl] = None) -> None:
        with self._lock:
            active = [c for c in self.controls if c.active]
            if not active or sum(c.queue_size for c in active) <= self.budget:
                return
            victim = max(active, key=lambda c: c.queue_size)
            if not victim.abort_requested:
                victim.request_abort()
                self.preemptions += 1
                logger.debug(f"Preempted search with {victim.queue_size} queued nodes")

    def _watch(self) -> None:
        while not self._stop.wait(self.interval):
            self.check()

    def start(self) -> None:
        self._thread = threading.Thread(target=self._watch, name='graphsift-governor', daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join()


class _IdDispenser:
    def __init__(self):
        self._next = 0
        self._lock = threading.Lock()

    def next_id(self) -> int:
        with self._lock:
            gid = self._next
            self._next += 1
            return gid


def build_index(db: GraphDatabase, cfg: BuildConfig) -> GedIndex:
    """
    Compute all pairwise threshold distances of db.

    Row i is owned by whichever worker drew id i; it computes the pairs
    (i, j > i) and appends each stored result to both rows.
    """
    n = len(db)
    tau = cfg.tau_index
    rows: List[List[IndexEntry]] = [[IndexEntry(i, 0, True)] for i in range(n)]
    row_locks = [threading.Lock() for _ in range(n)]
    dispenser = _IdDispenser()

    controls = [SearchControl() for _ in range(cfg.n_workers)]
    governor = None
    if cfg.node_budget is not None:
        governor = MemoryGovernor(controls, cfg.node_budget, cfg.poll_interval)
        for control in controls:
            control.on_publish = governor.check
        governor.start()

    def work(control: SearchControl) -> None:
        control.active = True
        try:
            while (i := dispenser.next_id()) < n:
                for j in range(i + 1, n):
                    control.reset()
                    result = GedSearch(db[i], db[j], tau, cfg.search, control).run()
                    if result.distance > tau:
                        continue
                    with row_locks[i]:
                        rows[i].append(IndexEntry(j, result.distance, result.exact))
                    with row_locks[j]:
                        rows[j].append(IndexEntry(i, result.distance, result.exact))
        finally:
            control.active = False
            control.queue_size = 0

    logger.info(f"Building index over {n} graphs (tau_index={tau}, workers={cfg.n_workers})")
    try:
        with ThreadPoolExecutor(max_workers=cfg.n_workers, thread_name_prefix='graphsift-index') as pool:
            futures = [pool.submit(work, control) for control in controls]
            for future in futures:
                future.result()
    finally:
        if governor is not None:
            governor.stop()

    for row in rows:
        row.sort(key=lambda e: (e.distance, e.neighbor))

    index = GedIndex(tau, rows)
    logger.info(f"Index built: {index.entry_count} entries, {index.inexact_percentage:.2f}% inexact")
    return index


def dump_index(index: GedIndex) -> bytes:
    buf = bytearray(_HEADER.pack(MAGIC, len(index.entries), index.tau_index))
    for row in index.entries:
        buf += _COUNT.pack(len(row))
        for entry in row:
            packed = entry.distance | (0 if entry.exact else _INEXACT_BIT)
            buf += _ENTRY.pack(entry.neighbor, packed)
    buf += _COUNT.pack(zlib.crc32(buf))
    return bytes(buf)


def parse_index(data: bytes) -> GedIndex:
    """
    Raises:
        IndexFormatError: bad magic, truncation, checksum mismatch or trailing bytes.
    """
    if len(data) < _HEADER.size + _COUNT.size:
        raise IndexFormatError("file too short to be an index")
    magic, n, tau = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise IndexFormatError(f"bad magic {magic!r}")

    body, (crc,) = data[:-_COUNT.size], _COUNT.unpack_from(data, len(data) - _COUNT.size)
    if zlib.crc32(body) != crc:
        raise IndexFormatError("checksum mismatch")

    offset = _HEADER.size
    rows: List[List[IndexEntry]] = []
    try:
        for _ in range(n):
            (count,) = _COUNT.unpack_from(body, offset)
            offset += _COUNT.size
            row = []
            for _ in range(count):
                neighbor, packed = _ENTRY.unpack_from(body, offset)
                offset += _ENTRY.size
                row.append(IndexEntry(neighbor, packed & ~_INEXACT_BIT, not packed & _INEXACT_BIT))
            rows.append(row)
    except struct.error as e:
        raise IndexFormatError(f"truncated index: {e}") from e
    if offset != len(body):
        raise IndexFormatError(f"{len(body) - offset} unexpected trailing bytes")
    return GedIndex(tau, rows)


def save_index(index: GedIndex, path: str) -> None:
    with open(path, 'wb') as f:
        f.write(dump_index(index))


def load_index(path: str) -> GedIndex:
    with open(path, 'rb') as f:
        return parse_index(f.read())
