"""Matrix conversion benchmark: per-format relative errors, their cumulative
distributions, and the dynamic-range table of the compared formats.

Every stored entry of a matrix is rounded into each target format and back;
the relative 2-norm error of the result is computed exactly (see
:func:`takumlab.exact.rel_2norm_error`).  A format that overflows to an
infinity or NaN on any entry scores ``inf``.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import minifloat, posit, takum
from .exact import UndefinedErrorNorm, format_real, rel_2norm_error
from .formats import BENCH_FORMATS, get_format
from .matrix import SparseMatrix

log = logging.getLogger(__name__)

INF = Decimal("Infinity")


@dataclass(frozen=True, order=True)
class ErrorRecord:
    matrix_id: str
    format: str
    rel_error: Decimal


@dataclass(frozen=True)
class SkippedMatrix:
    matrix_id: str
    reason: str


class MatrixSkipped(Exception):
    def __init__(self, matrix_id: str, reason: str):
        self.skipped = SkippedMatrix(matrix_id, reason)
        super().__init__(f"{matrix_id}: {reason}")


def bench_matrix(m: SparseMatrix, formats: Sequence[str]) -> list[ErrorRecord]:
    """One :class:`ErrorRecord` per format, in the order given.

    Raises :class:`MatrixSkipped` for a matrix without nonzero entries, whose
    relative error is undefined.
    """
    if not formats:
        raise ValueError("need at least one format")
    ref = m.values()
    distinct = set(ref)
    records = []
    for name in formats:
        fmt = get_format(name)
        # matrices repeat values a lot; round each distinct one once
        rounded = {v: fmt.round(v) for v in distinct}
        try:
            err = rel_2norm_error(ref, [rounded[v] for v in ref])
        except UndefinedErrorNorm:
            raise MatrixSkipped(m.id, "all stored entries are zero") from None
        records.append(ErrorRecord(m.id, fmt.name, err))
    return records


def _bench_task(args):
    m, formats = args
    try:
        return bench_matrix(m, formats), None
    except MatrixSkipped as exc:
        return [], exc.skipped


@dataclass
class BenchResult:
    records: list[ErrorRecord]
    skipped: list[SkippedMatrix] = field(default_factory=list)
    requested: tuple[str, ...] = ()

    def for_format(self, name: str) -> list[ErrorRecord]:
        return [r for r in self.records if r.format == name]

    def formats(self) -> list[str]:
        """Formats with at least one record, in the order they were requested."""
        present = {r.format for r in self.records}
        order = list(self.requested) + sorted(present - set(self.requested))
        return [f for f in order if f in present]


def run_benchmark(
    matrices: Iterable[SparseMatrix],
    formats: Sequence[str] = BENCH_FORMATS,
    jobs: int = 1,
) -> BenchResult:
    """Benchmark every matrix; output order is (matrix_id, format) whatever ``jobs`` is."""
    formats = [get_format(f).name for f in formats]
    tasks = [(m, formats) for m in matrices]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_bench_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        outcomes = [_bench_task(t) for t in tasks]
    records = sorted(r for recs, _ in outcomes for r in recs)
    skipped = sorted((s for _, s in outcomes if s is not None), key=lambda s: s.matrix_id)
    for s in skipped:
        log.warning("skipped %s: %s", s.matrix_id, s.reason)
    return BenchResult(records, skipped, tuple(formats))


@dataclass(frozen=True)
class CdfSeries:
    format: str
    points: tuple[tuple[Fraction, Decimal], ...]

    @property
    def errors(self) -> list[Decimal]:
        return [e for _, e in self.points]


def build_cdf(records: Sequence[ErrorRecord]) -> CdfSeries:
    """Sorted errors against rank fraction: point k is ((k+1)/N, e_k)."""
    if not records:
        raise ValueError("cannot build a distribution from no records")
    names = {r.format for r in records}
    if len(names) != 1:
        raise ValueError(f"records mix formats: {sorted(names)}")
    errs = sorted(r.rel_error for r in records)
    n = len(errs)
    return CdfSeries(names.pop(), tuple((Fraction(k + 1, n), e) for k, e in enumerate(errs)))


def stability_fraction(series: CdfSeries, threshold=1) -> Fraction:
    """Share of matrices whose error is strictly below ``threshold``."""
    t = Decimal(str(threshold)) if isinstance(threshold, float) else Decimal(threshold)
    if t <= 0:
        raise ValueError("threshold must be positive")
    return Fraction(sum(1 for e in series.errors if e < t), len(series.points))


def all_cdfs(result: BenchResult) -> list[CdfSeries]:
    return [build_cdf(result.for_format(f)) for f in result.formats()]


# --- dynamic range ---------------------------------------------------------

IEEE_BY_WIDTH = {16: minifloat.FLOAT16, 32: minifloat.FLOAT32, 64: minifloat.FLOAT64}

RANGE_COLUMNS = (
    "n", "lintakum-min", "lintakum-max", "posit2-min", "posit2-max",
    "ieee-normal-min", "ieee-max", "ieee-subnormal-min",
)
FIXED_COLUMNS = ("format", "n", "min", "max", "plotted_min", "plotted_max")

# endpoints as marked in the published chart, kept next to the computed ones
PLOTTED = {
    "bfloat16": ("1.175494351e-38", "3.38953139e38"),
    "e5m2": ("6.103515625e-5", "57344.0"),
    "e4m3": ("0.016", "240"),
}


@dataclass(frozen=True)
class RangeRow:
    n: int
    takum: tuple[Fraction, Fraction]
    posit: tuple[Fraction, Fraction]
    ieee: Optional[tuple[Fraction, Fraction, Fraction]]  # (min normal, max, min subnormal)

    def cells(self, digits: int = 17) -> list[str]:
        vals = [*self.takum, *self.posit]
        out = [str(self.n)] + [format_real(v, digits) for v in vals]
        if self.ieee is None:
            out += ["", "", ""]
        else:
            out += [format_real(v, digits) for v in self.ieee]
        return out


@dataclass(frozen=True)
class FixedRow:
    format: str
    n: int
    min_normal: Fraction
    max_finite: Fraction
    plotted_min: str
    plotted_max: str

    def cells(self, digits: int = 17) -> list[str]:
        return [
            self.format, str(self.n), format_real(self.min_normal, digits),
            format_real(self.max_finite, digits), self.plotted_min, self.plotted_max,
        ]


@dataclass(frozen=True)
class RangeTable:
    rows: tuple[RangeRow, ...]
    fixed: tuple[FixedRow, ...]


def dynamic_range_table(widths: Sequence[int]) -> RangeTable:
    """Takum, posit and same-width IEEE ranges per width, plus the 8/16-bit derivatives."""
    if not widths:
        raise ValueError("need at least one width")
    rows = []
    for n in sorted(set(widths)):
        spec = IEEE_BY_WIDTH.get(n)
        ieee = None
        if spec is not None:
            sub, normal, top = minifloat.mf_dynamic_range(spec)
            ieee = (normal, top, sub)
        rows.append(RangeRow(n, takum.takum_dynamic_range(n), posit.posit_dynamic_range(n), ieee))
    fixed = []
    for spec in (minifloat.BFLOAT16, minifloat.E5M2, minifloat.E4M3):
        _, normal, top = minifloat.mf_dynamic_range(spec)
        fixed.append(FixedRow(spec.name, spec.width, normal, top, *PLOTTED[spec.name]))
    return RangeTable(tuple(rows), tuple(fixed))


# --- CSV output --------------------------------------------------------------


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def write_errors_csv(records: Iterable[ErrorRecord], stream) -> None:
    w = _writer(stream)
    w.writerow(("matrix_id", "format", "rel_error"))
    for r in records:
        w.writerow((r.matrix_id, r.format, format_real(r.rel_error)))


def write_cdf_csv(series: Iterable[CdfSeries], stream) -> None:
    w = _writer(stream)
    w.writerow(("format", "percent", "rel_error"))
    for s in series:
        for pct, err in s.points:
            w.writerow((s.format, format_real(pct), format_real(err)))


def write_skipped_csv(skipped: Iterable[SkippedMatrix], stream) -> None:
    w = _writer(stream)
    w.writerow(("matrix_id", "reason"))
    for s in skipped:
        w.writerow((s.matrix_id, s.reason))


def write_range_csv(table: RangeTable, stream) -> None:
    w = _writer(stream)
    w.writerow(RANGE_COLUMNS)
    for row in table.rows:
        w.writerow(row.cells())


def write_fixed_range_csv(table: RangeTable, stream) -> None:
    w = _writer(stream)
    w.writerow(FIXED_COLUMNS)
    for row in table.fixed:
        w.writerow(row.cells())


def read_errors_csv(stream) -> list[ErrorRecord]:
    rows = csv.DictReader(stream)
    return [ErrorRecord(r["matrix_id"], r["format"], Decimal(r["rel_error"])) for r in rows]
