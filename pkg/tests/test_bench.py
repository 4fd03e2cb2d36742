import io
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

from oracles import NAR as ORACLE_NAR, mf_round, posit_value, takum_value
from takumlab import bench
from takumlab.bench import (
    ErrorRecord,
    MatrixSkipped,
    bench_matrix,
    build_cdf,
    dynamic_range_table,
    run_benchmark,
    stability_fraction,
)
from takumlab.collection import load_desk_subset
from takumlab.formats import BENCH_FORMATS
from takumlab.matrix import SparseMatrix
from takumlab.minifloat import E4M3, mf_max_finite

GOLDEN = Path(__file__).parent / "golden"
INF = Decimal("Infinity")


def _m(*values, id="t/m"):
    return SparseMatrix(id, 1, len(values), [(0, j, Fraction(v)) for j, v in enumerate(values)])


@pytest.fixture(scope="module")
def desk():
    return load_desk_subset().matrices


@pytest.fixture(scope="module")
def desk_result(desk):
    return run_benchmark(desk, BENCH_FORMATS, jobs=1)


def _csv(records):
    buf = io.StringIO()
    bench.write_errors_csv(records, buf)
    return buf.getvalue()


def test_examples():
    assert [r.rel_error for r in bench_matrix(_m(1, -1, Fraction(1, 2)), ["takum8"])] == [0]
    assert bench_matrix(_m(10**6, 1), ["e4m3"])[0].rel_error == INF
    assert all(r.rel_error == 0 for r in bench_matrix(_m(1), BENCH_FORMATS))
    with pytest.raises(ValueError):
        bench_matrix(_m(1), [])


def test_all_zero_matrix_is_skipped():
    with pytest.raises(MatrixSkipped):
        bench_matrix(_m(0, 0), ["takum8"])
    res = run_benchmark([_m(0, id="z/zero"), _m(3, id="a/three")], ["takum8"])
    assert [s.matrix_id for s in res.skipped] == ["z/zero"]
    assert [r.matrix_id for r in res.records] == ["a/three"]


def test_golden_errors_csv(desk_result):
    assert _csv(desk_result.records) == (GOLDEN / "desk_errors.csv").read_text()
    buf = io.StringIO()
    bench.write_cdf_csv(bench.all_cdfs(desk_result), buf)
    assert buf.getvalue() == (GOLDEN / "desk_cdf.csv").read_text()


def test_parallel_runs_are_byte_identical(desk, desk_result):
    again = run_benchmark(desk, BENCH_FORMATS, jobs=1)
    parallel = run_benchmark(list(reversed(desk)), BENCH_FORMATS, jobs=3)
    assert _csv(again.records) == _csv(desk_result.records) == _csv(parallel.records)


FAMILIES = [
    ("takum8", "takum16"), ("takum16", "takum32"),
    ("posit8", "posit16"), ("posit16", "posit32"),
    ("e4m3", "float16"), ("e5m2", "float16"), ("float16", "float32"), ("bfloat16", "float32"),
]


def test_width_monotonicity(desk_result):
    err = {(r.matrix_id, r.format): r.rel_error for r in desk_result.records}
    for mid in {r.matrix_id for r in desk_result.records}:
        for narrow, wide in FAMILIES:
            assert err[mid, wide] <= err[mid, narrow], (mid, narrow, wide)


def test_e4m3_infinity_only_beyond_its_range(desk, desk_result):
    by_id = {m.id: m for m in desk}
    top = mf_max_finite(E4M3)
    for r in desk_result.for_format("e4m3"):
        if r.rel_error.is_infinite():
            assert by_id[r.matrix_id].max_abs() > top


def test_tapered_formats_never_overflow(desk_result):
    for r in desk_result.records:
        if r.format.startswith(("takum", "posit")):
            assert r.rel_error.is_finite()


def _oracle_round(fmt, v):
    if fmt in ("takum8", "posit8"):
        decode = takum_value if fmt == "takum8" else posit_value
        table = [(b, decode(b, 8)) for b in range(256)]
        cands = [(b, x) for b, x in table if x != ORACLE_NAR and x != 0 and (x > 0) == (v > 0)]
        return min(cands, key=lambda t: (abs(t[1] - v), t[0] % 2))[1]
    return mf_round(fmt, float(v))


@pytest.mark.parametrize("fmt", ["takum8", "posit8", "e4m3", "e5m2", "float16", "bfloat16", "float32"])
def test_errors_agree_with_independent_pipeline(desk, desk_result, fmt):
    err = {(r.matrix_id, r.format): r.rel_error for r in desk_result.records}
    for m in desk[:8]:
        ref = m.values()
        conv = [_oracle_round(fmt, v) if v != 0 else Fraction(0) for v in ref]
        if any(not isinstance(c, Fraction) for c in conv):
            assert err[m.id, fmt].is_infinite()
            continue
        with mpmath.workdps(60):
            num = mpmath.fsum((mpmath.mpf(a.numerator) / a.denominator - mpmath.mpf(b.numerator) / b.denominator) ** 2 for a, b in zip(ref, conv))
            den = mpmath.fsum((mpmath.mpf(a.numerator) / a.denominator) ** 2 for a in ref)
            want = mpmath.sqrt(num / den)
            got = mpmath.mpf(str(err[m.id, fmt]))
            assert abs(got - want) <= want * mpmath.mpf(10) ** -30


def test_build_cdf_examples():
    recs = [ErrorRecord(str(i), "f", Decimal(e)) for i, e in enumerate(["0.1", "0.3", "0.2"])]
    s = build_cdf(recs)
    assert s.points == ((Fraction(1, 3), Decimal("0.1")), (Fraction(2, 3), Decimal("0.2")), (Fraction(1), Decimal("0.3")))
    s = build_cdf([ErrorRecord("a", "f", INF), ErrorRecord("b", "f", Decimal(1))])
    assert s.points[-1] == (Fraction(1), INF)
    assert build_cdf([ErrorRecord("a", "f", Decimal("0.5"))]).points == ((Fraction(1), Decimal("0.5")),)
    with pytest.raises(ValueError):
        build_cdf([])
    with pytest.raises(ValueError):
        build_cdf([ErrorRecord("a", "f", INF), ErrorRecord("a", "g", INF)])


def test_stability_fraction():
    s = build_cdf([ErrorRecord("a", "f", Decimal("0.5")), ErrorRecord("b", "f", Decimal("2.0"))])
    assert stability_fraction(s, 1) == Fraction(1, 2)
    assert stability_fraction(s, 1.0) == Fraction(1, 2)
    assert stability_fraction(build_cdf([ErrorRecord("a", "f", INF)]), 1) == 0
    with pytest.raises(ValueError):
        stability_fraction(s, 0)


def test_range_table():
    t = dynamic_range_table([64, 8, 16, 32])
    assert [r.n for r in t.rows] == [8, 16, 32, 64]
    row8 = t.rows[0]
    assert row8.takum == (Fraction(1, 2**239), Fraction(2**239))
    assert row8.ieee is None and row8.cells()[-3:] == ["", "", ""]
    fixed = {f.format: f for f in t.fixed}
    assert f"{float(fixed['bfloat16'].min_normal):.9e}" == "1.175494351e-38"
    assert f"{float(fixed['bfloat16'].max_finite):.8e}" == "3.38953139e+38"
    assert fixed["e5m2"].min_normal == Fraction(6103515625, 10**14)
    assert fixed["e5m2"].max_finite == 57344
    assert (fixed["e4m3"].max_finite, fixed["e4m3"].plotted_max) == (448, "240")
    with pytest.raises(ValueError):
        dynamic_range_table([])


def test_range_csv_header():
    buf = io.StringIO()
    bench.write_range_csv(dynamic_range_table([8, 16]), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(bench.RANGE_COLUMNS) and len(lines) == 3


def test_errors_csv_round_trip(desk_result):
    again = bench.read_errors_csv(io.StringIO(_csv(desk_result.records)))
    assert [(r.matrix_id, r.format) for r in again] == [(r.matrix_id, r.format) for r in desk_result.records]
    assert [r.rel_error.is_infinite() for r in again] == [r.rel_error.is_infinite() for r in desk_result.records]
