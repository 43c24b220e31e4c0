"""On-disk store for computed phase multisets.

Binary format: magic "KLEX", a little-endian u32 format version, a u32
record count, then one record per sum.  Every integer that can be large
(phase numerators, denominators, weights) is length-prefixed and signed
little-endian, so records round-trip exactly.  Writers hold a file lock
and replace the file atomically; readers never lock.  A corrupt file is
reported and treated as empty, a version mismatch is a hard error.
"""

from __future__ import annotations

import io
import logging
import os
import random
import struct
import tempfile
from dataclasses import dataclass
from typing import Callable, Iterator

from filelock import FileLock

from klexact.arith import RationalPhase

log = logging.getLogger(__name__)

MAGIC = b"KLEX"
FORMAT_VERSION = 1

CacheKey = tuple[str, int, int, int]  # (multiplier ident, m, n, c)
Terms = dict[RationalPhase, int]


class CacheVersionError(Exception):
    """The file on disk was written by an incompatible format version."""


class CacheCorruptError(Exception):
    """The on-disk bytes cannot be parsed.

    Reads downgrade this to a warning and act on an empty cache; verify
    raises it so corruption cannot pass as a clean check.
    """


def _write_int(buf: io.BytesIO, x: int) -> None:
    raw = x.to_bytes((x.bit_length() + 8) // 8, "little", signed=True)
    buf.write(struct.pack("<I", len(raw)))
    buf.write(raw)


def _read_int(buf: io.BytesIO) -> int:
    head = buf.read(4)
    if len(head) != 4:
        raise CacheCorruptError("truncated integer header")
    (length,) = struct.unpack("<I", head)
    if length > 1 << 20:
        raise CacheCorruptError("unreasonable integer length")
    raw = buf.read(length)
    if len(raw) != length:
        raise CacheCorruptError("truncated integer body")
    return int.from_bytes(raw, "little", signed=True)


def _write_str(buf: io.BytesIO, s: str) -> None:
    raw = s.encode("utf-8")
    buf.write(struct.pack("<I", len(raw)))
    buf.write(raw)


def _read_str(buf: io.BytesIO) -> str:
    head = buf.read(4)
    if len(head) != 4:
        raise CacheCorruptError("truncated string header")
    (length,) = struct.unpack("<I", head)
    if length > 1 << 20:
        raise CacheCorruptError("unreasonable string length")
    raw = buf.read(length)
    if len(raw) != length:
        raise CacheCorruptError("truncated string body")
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CacheCorruptError("undecodable string") from exc


def _serialize(records: dict[CacheKey, Terms]) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<II", FORMAT_VERSION, len(records)))
    for key in sorted(records):
        ident, m, n, c = key
        _write_str(buf, ident)
        _write_int(buf, m)
        _write_int(buf, n)
        _write_int(buf, c)
        terms = records[key]
        buf.write(struct.pack("<I", len(terms)))
        for phase in sorted(terms, key=lambda p: p.as_fraction()):
            _write_int(buf, phase.num)
            _write_int(buf, phase.den)
            _write_int(buf, terms[phase])
    return buf.getvalue()


def _parse(data: bytes) -> dict[CacheKey, Terms]:
    buf = io.BytesIO(data)
    if buf.read(4) != MAGIC:
        raise CacheCorruptError("bad magic")
    head = buf.read(8)
    if len(head) != 8:
        raise CacheCorruptError("truncated header")
    version, count = struct.unpack("<II", head)
    if version != FORMAT_VERSION:
        raise CacheVersionError(
            f"cache format version {version}, expected {FORMAT_VERSION}"
        )
    records: dict[CacheKey, Terms] = {}
    for _ in range(count):
        ident = _read_str(buf)
        m = _read_int(buf)
        n = _read_int(buf)
        c = _read_int(buf)
        nhead = buf.read(4)
        if len(nhead) != 4:
            raise CacheCorruptError("truncated term count")
        (nterms,) = struct.unpack("<I", nhead)
        terms: Terms = {}
        for _ in range(nterms):
            num = _read_int(buf)
            den = _read_int(buf)
            weight = _read_int(buf)
            terms[RationalPhase(num, den)] = weight
        records[(ident, m, n, c)] = terms
    if buf.read(1):
        raise CacheCorruptError("trailing bytes")
    return records


@dataclass
class CacheStats:
    path: str
    records: int
    total_terms: int
    size_bytes: int
    corrupt: bool


class KloostermanCache:
    """Single-file store keyed by (multiplier ident, m, n, c)."""

    def __init__(self, path: str | os.PathLike[str]):
        self.path = os.fspath(path)
        self._lock = FileLock(self.path + ".lock")
        self._records: dict[CacheKey, Terms] | None = None
        self._mtime: float | None = None
        self._corrupt = False

    def _load(self) -> dict[CacheKey, Terms]:
        try:
            mtime = os.stat(self.path).st_mtime
        except FileNotFoundError:
            self._records, self._mtime, self._corrupt = {}, None, False
            return self._records
        if self._records is not None and mtime == self._mtime:
            return self._records
        with open(self.path, "rb") as fh:
            data = fh.read()
        try:
            self._records = _parse(data)
            self._corrupt = False
        except CacheCorruptError as exc:
            log.warning("cache file %s is corrupt (%s); treating as empty", self.path, exc)
            self._records = {}
            self._corrupt = True
        self._mtime = mtime
        return self._records

    def _flush(self, records: dict[CacheKey, Terms]) -> None:
        data = _serialize(records)
        directory = os.path.dirname(self.path) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".klexcache-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, self.path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        self._records = records
        self._mtime = os.stat(self.path).st_mtime
        self._corrupt = False

    def get(self, key: CacheKey) -> Terms | None:
        terms = self._load().get(key)
        return dict(terms) if terms is not None else None

    def put(self, key: CacheKey, terms: Terms) -> None:
        with self._lock:
            self._mtime = None  # force re-read under the lock
            records = dict(self._load())
            records[key] = dict(terms)
            self._flush(records)

    def keys(self) -> Iterator[CacheKey]:
        return iter(sorted(self._load().keys()))

    def stats(self) -> CacheStats:
        records = self._load()
        try:
            size = os.stat(self.path).st_size
        except FileNotFoundError:
            size = 0
        return CacheStats(
            path=self.path,
            records=len(records),
            total_terms=sum(len(t) for t in records.values()),
            size_bytes=size,
            corrupt=self._corrupt,
        )

    def clear(self) -> int:
        with self._lock:
            self._mtime = None
            count = len(self._load())
            self._flush({})
        return count

    def verify(
        self,
        recompute: Callable[[CacheKey], Terms | None],
        fraction: float = 0.01,
        seed: int = 0,
    ) -> tuple[int, list[CacheKey]]:
        """Recompute a deterministic sample of records; returns (checked, bad).

        A record whose key cannot be recomputed counts as bad.
        """
        records = self._load()
        if self._corrupt:
            raise CacheCorruptError(f"cache file {self.path} is corrupt")
        keys = sorted(records)
        if not keys:
            return 0, []
        k = max(1, int(len(keys) * fraction))
        sample = random.Random(seed).sample(keys, min(k, len(keys)))
        bad = []
        for key in sorted(sample):
            fresh = recompute(key)
            if fresh is None or fresh != records[key]:
                bad.append(key)
        return len(sample), bad


def default_cache_path() -> str:
    env = os.environ.get("KLEXACT_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "klexact", "sums.klex")


def open_cache(path: str | os.PathLike[str] | None = None) -> KloostermanCache:
    p = os.fspath(path) if path is not None else default_cache_path()
    directory = os.path.dirname(p)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return KloostermanCache(p)


def cache_get(key: CacheKey, path: str | os.PathLike[str] | None = None) -> Terms | None:
    return open_cache(path).get(key)


def cache_put(key: CacheKey, terms: Terms, path: str | os.PathLike[str] | None = None) -> None:
    open_cache(path).put(key, terms)
