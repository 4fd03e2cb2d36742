"""SuiteSparse Matrix Collection client: index, download cache and selection.

Cache layout is ``<cache>/<group>/<name>/<name>.mtx``, the same layout the
collection's tarballs unpack to.  The cache root defaults to
``$TAKUMLAB_CACHE`` or ``~/.cache/takumlab``.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import tarfile
import time
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional

from .matrix import MatrixMarketError, SparseMatrix, UnsupportedFormat, parse_matrix_market

log = logging.getLogger(__name__)

BASE_URL = "https://sparse.tamu.edu"
SSSTATS_URL = BASE_URL + "/files/ssstats.csv"
CACHE_ENV = "TAKUMLAB_CACHE"
INDEX_COLUMNS = ("id", "group", "name", "nnz", "field", "kind")


class CollectionError(Exception):
    pass


class NetworkError(CollectionError):
    """A download failed; retrying later may succeed."""

    def __init__(self, message: str, matrix_ids: Iterable[str] = ()):
        self.matrix_ids = sorted(matrix_ids)
        super().__init__(message)


class OfflineCacheMiss(NetworkError):
    def __init__(self, matrix_ids: Iterable[str]):
        ids = sorted(matrix_ids)
        shown = ", ".join(ids[:20]) + (f" and {len(ids) - 20} more" if len(ids) > 20 else "")
        super().__init__(
            f"offline mode: {len(ids)} matrices are not in the cache ({shown}); "
            "run once without --offline or point --cache-dir at a populated cache",
            ids,
        )


class IntegrityError(CollectionError):
    """Corrupt archive, truncated download or malformed index."""


@dataclass(frozen=True)
class IndexRecord:
    group: str
    name: str
    nnz: int
    field: str = "real"
    kind: str = ""

    @property
    def id(self) -> str:
        return f"{self.group}/{self.name}"

    def url(self, base_url: str = BASE_URL) -> str:
        return f"{base_url}/MM/{self.group}/{self.name}.tar.gz"


class CollectionIndex:
    def __init__(self, records: Iterable[IndexRecord]):
        self.records: dict[str, IndexRecord] = {}
        for rec in records:
            if rec.id in self.records:
                raise IntegrityError(f"duplicate index id {rec.id}")
            self.records[rec.id] = rec

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(sorted(self.records.values(), key=lambda r: r.id))

    @classmethod
    def read_csv(cls, stream) -> "CollectionIndex":
        reader = csv.DictReader(stream)
        if reader.fieldnames is None or not set(INDEX_COLUMNS) <= set(reader.fieldnames):
            raise IntegrityError(f"index must have columns {', '.join(INDEX_COLUMNS)}")
        records = []
        for row in reader:
            try:
                rec = IndexRecord(row["group"], row["name"], int(row["nnz"]), row["field"], row["kind"])
            except ValueError as exc:
                raise IntegrityError(f"bad index row {row}: {exc}") from None
            if rec.id != row["id"]:
                raise IntegrityError(f"index id {row['id']!r} does not match {rec.id!r}")
            records.append(rec)
        return cls(records)

    @classmethod
    def load(cls, path) -> "CollectionIndex":
        with open(path, newline="", encoding="utf-8") as fh:
            return cls.read_csv(fh)

    @classmethod
    def from_ssstats(cls, text: str) -> "CollectionIndex":
        """Convert the collection's own ``ssstats.csv`` (two header lines, no column names)."""
        lines = text.splitlines()[2:]
        records = []
        for row in csv.reader(lines):
            if not row:
                continue
            real, binary = bool(int(row[5])), bool(int(row[6]))
            fld = "pattern" if binary else ("real" if real else "complex")
            records.append(IndexRecord(row[0], row[1], int(row[4]), fld, row[11]))
        return cls(records)

    def write_csv(self, stream) -> None:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(INDEX_COLUMNS)
        for r in self:
            w.writerow((r.id, r.group, r.name, r.nnz, r.field, r.kind))


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    nnz: int
    status: str  # "included" or "excluded"
    reason: str = ""


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "takumlab")


def cache_path(cache_dir, rec: IndexRecord) -> Path:
    return Path(cache_dir) / rec.group / rec.name / f"{rec.name}.mtx"


def refresh_index(url: str = SSSTATS_URL, opener: Callable = urllib.request.urlopen) -> CollectionIndex:
    try:
        with opener(url, timeout=60) as resp:
            text = resp.read().decode("utf-8")
    except (urllib.error.URLError, OSError) as exc:
        raise NetworkError(f"cannot fetch collection index from {url}: {exc}") from None
    return CollectionIndex.from_ssstats(text)


def _download(rec: IndexRecord, dest: Path, base_url: str, opener: Callable, retries: int) -> None:
    url = rec.url(base_url)
    for attempt in range(retries + 1):
        try:
            with opener(url, timeout=120) as resp:
                payload = resp.read()
                announced = resp.headers.get("Content-Length") if hasattr(resp, "headers") else None
            break
        except (urllib.error.URLError, OSError) as exc:
            if attempt == retries:
                raise NetworkError(f"download of {rec.id} failed: {exc}", [rec.id]) from None
            time.sleep(0.5 * 2**attempt)
    if announced is not None and int(announced) != len(payload):
        raise IntegrityError(f"{rec.id}: archive is {len(payload)} bytes, server announced {announced}")
    member = f"{rec.name}/{rec.name}.mtx"
    try:
        with tarfile.open(fileobj=io.BytesIO(payload), mode="r:gz") as tar:
            fh = tar.extractfile(member)
            if fh is None:
                raise KeyError(member)
            text = fh.read()
    except (tarfile.TarError, KeyError, EOFError, OSError) as exc:
        raise IntegrityError(f"{rec.id}: corrupt archive ({exc})") from None
    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_suffix(".mtx.part")
    tmp.write_bytes(text)
    tmp.replace(dest)


def _load_one(rec, cache_dir, offline, base_url, opener, retries):
    path = cache_path(cache_dir, rec)
    if not path.exists():
        if offline:
            return rec.id, None, "missing"
        _download(rec, path, base_url, opener, retries)
    with open(path, encoding="utf-8") as fh:
        try:
            return rec.id, parse_matrix_market(fh, id=rec.id), ""
        except UnsupportedFormat as exc:
            return rec.id, None, f"unsupported: {exc}"
        except MatrixMarketError as exc:
            raise IntegrityError(f"{rec.id}: {exc}") from None


@dataclass
class FetchResult:
    matrices: list[SparseMatrix]
    manifest: list[ManifestEntry]

    def write_manifest(self, stream) -> None:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(("id", "nnz", "status", "reason"))
        for e in self.manifest:
            w.writerow((e.id, e.nnz, e.status, e.reason))


def fetch_collection(
    index: CollectionIndex,
    max_nnz: int = 50_000,
    cache_dir=None,
    offline: bool = False,
    jobs: int = 4,
    base_url: str = BASE_URL,
    opener: Optional[Callable] = None,
    retries: int = 2,
) -> FetchResult:
    """Load every real or integer matrix with at most ``max_nnz`` stored entries.

    Matrices are read from the cache when present, downloaded otherwise.
    Results and manifest are ordered by id whatever order downloads finish in.
    """
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    opener = opener or urllib.request.urlopen
    manifest: dict[str, ManifestEntry] = {}
    wanted = []
    for rec in index:
        if rec.nnz > max_nnz:
            manifest[rec.id] = ManifestEntry(rec.id, rec.nnz, "excluded", f"nnz {rec.nnz} > {max_nnz}")
        elif rec.field not in ("real", "integer"):
            manifest[rec.id] = ManifestEntry(rec.id, rec.nnz, "excluded", f"{rec.field} field")
        else:
            wanted.append(rec)

    def work(rec):
        return _load_one(rec, cache_dir, offline, base_url, opener, retries)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(work, wanted))

    missing = [mid for mid, _, note in results if note == "missing"]
    if missing:
        raise OfflineCacheMiss(missing)
    matrices = []
    by_id = {rec.id: rec for rec in wanted}
    for mid, m, note in results:
        if m is None:
            manifest[mid] = ManifestEntry(mid, by_id[mid].nnz, "excluded", note)
        else:
            matrices.append(m)
            manifest[mid] = ManifestEntry(mid, m.nnz, "included")
    matrices.sort(key=lambda m: m.id)
    log.info("%d matrices included, %d excluded", len(matrices), len(manifest) - len(matrices))
    return FetchResult(matrices, [manifest[k] for k in sorted(manifest)])


DESK_PACKAGE = "takumlab.data"


def desk_subset_dir() -> Path:
    return Path(str(resources.files(DESK_PACKAGE).joinpath("desk")))


def load_desk_subset(jobs: int = 1) -> FetchResult:
    """The pinned 20-matrix subset shipped with the package (no network needed)."""
    root = desk_subset_dir()
    index = CollectionIndex.load(root / "index.csv")
    return fetch_collection(index, cache_dir=root, offline=True, jobs=jobs)
