"""Matrix Market reader producing exact-valued sparse matrices."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, TextIO, Union

SYMMETRIES = {"general": "general", "symmetric": "symmetric", "skew-symmetric": "skew"}


class MatrixMarketError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedFormat(MatrixMarketError):
    """Valid Matrix Market input of a kind this reader deliberately skips."""


@dataclass
class SparseMatrix:
    id: str
    rows: int
    cols: int
    entries: list[tuple[int, int, Fraction]] = field(default_factory=list)
    symmetry: str = "general"
    field: str = "real"

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def values(self) -> list[Fraction]:
        return [v for _, _, v in self.entries]

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.values()), default=Fraction(0))


def _literal(token: str, lineno: int) -> Fraction:
    try:
        x = float(token)
    except ValueError:
        raise MatrixMarketError(f"bad numeric literal {token!r}", lineno) from None
    if not math.isfinite(x):
        raise MatrixMarketError(f"non-finite entry {token!r}", lineno)
    return Fraction(x)


def _data_lines(lines: Iterable[str], start: int):
    for lineno, raw in enumerate(lines, start):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        yield lineno, text.split()


def parse_matrix_market(source: Union[TextIO, str, Iterable[str]], id: str = "") -> SparseMatrix:
    """Parse coordinate or array Matrix Market text with a real or integer field.

    Decimal literals are read as the nearest binary64 number and then kept as
    exact rationals.  Symmetric and skew-symmetric files keep their stored
    triangle; :attr:`SparseMatrix.symmetry` records how to expand it.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = iter(source)
    try:
        banner = next(lines)
    except StopIteration:
        raise MatrixMarketError("empty input", 1) from None
    tokens = banner.split()
    if len(tokens) != 5 or tokens[0] != "%%MatrixMarket":
        raise MatrixMarketError("missing %%MatrixMarket banner", 1)
    obj, layout, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise UnsupportedFormat(f"object {obj!r} is not a matrix", 1)
    if layout not in ("coordinate", "array"):
        raise MatrixMarketError(f"unknown layout {layout!r}", 1)
    if fld in ("complex", "pattern"):
        raise UnsupportedFormat(f"{fld} matrices are not supported", 1)
    if fld not in ("real", "integer"):
        raise MatrixMarketError(f"unknown field {fld!r}", 1)
    if sym not in SYMMETRIES:
        raise UnsupportedFormat(f"symmetry {sym!r} is not supported", 1)

    data = _data_lines(lines, 2)
    try:
        lineno, size = next(data)
    except StopIteration:
        raise MatrixMarketError("missing size line") from None
    expected = 3 if layout == "coordinate" else 2
    if len(size) != expected or not all(t.isdigit() for t in size):
        raise MatrixMarketError(f"size line needs {expected} nonnegative integers", lineno)
    rows, cols = int(size[0]), int(size[1])
    if rows < 1 or cols < 1:
        raise MatrixMarketError("matrix dimensions must be positive", lineno)
    m = SparseMatrix(id, rows, cols, symmetry=SYMMETRIES[sym], field="integer" if fld == "integer" else "real")

    if layout == "coordinate":
        count = int(size[2])
        for lineno, toks in data:
            if len(toks) != 3:
                raise MatrixMarketError("coordinate entry needs row, column and value", lineno)
            try:
                i, j = int(toks[0]), int(toks[1])
            except ValueError:
                raise MatrixMarketError("bad index", lineno) from None
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise MatrixMarketError(f"index ({i}, {j}) out of range", lineno)
            m.entries.append((i - 1, j - 1, _literal(toks[2], lineno)))
        if m.nnz != count:
            raise MatrixMarketError(f"header announces {count} entries, found {m.nnz}")
        return m

    positions = []
    for j in range(cols):
        first = {"general": 0, "symmetric": j, "skew": j + 1}[m.symmetry]
        positions.extend((i, j) for i in range(first, rows))
    pos = iter(positions)
    for lineno, toks in data:
        if len(toks) != 1:
            raise MatrixMarketError("array entry needs exactly one value", lineno)
        try:
            i, j = next(pos)
        except StopIteration:
            raise MatrixMarketError("more array entries than the size line allows", lineno) from None
        m.entries.append((i, j, _literal(toks[0], lineno)))
    if m.nnz != len(positions):
        raise MatrixMarketError(f"expected {len(positions)} array entries, found {m.nnz}")
    return m


def write_matrix_market(m: SparseMatrix, out: TextIO) -> None:
    """Write coordinate format with round-trip exact binary64 literals."""
    sym = {"general": "general", "symmetric": "symmetric", "skew": "skew-symmetric"}[m.symmetry]
    out.write(f"%%MatrixMarket matrix coordinate {m.field} {sym}\n")
    out.write(f"{m.rows} {m.cols} {m.nnz}\n")
    for i, j, v in m.entries:
        lit = str(int(v)) if m.field == "integer" else repr(float(v))
        out.write(f"{i + 1} {j + 1} {lit}\n")
