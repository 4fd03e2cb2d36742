import xml.etree.ElementTree as ET
from decimal import Decimal
from fractions import Fraction

from takumlab.bench import CdfSeries, dynamic_range_table
from takumlab.svg import INF_BAND, ZERO_BAND, _error_level, cdf_svg, log10, range_svg

NS = "{http://www.w3.org/2000/svg}"


def _series(root):
    return [p.get("data-label") for p in root.iter(NS + "polyline") if p.get("class") == "series"]


def test_range_chart_is_well_formed_with_one_series_pair_per_family():
    root = ET.fromstring(range_svg(dynamic_range_table([8, 16, 32, 64])).encode())
    labels = _series(root)
    for fam in ("takum", "posit", "IEEE 754 normal", "IEEE 754 subnormal"):
        assert f"{fam} min" in labels and f"{fam} max" in labels
    markers = {c.get("data-label") for c in root.iter(NS + "circle")}
    assert {"bfloat16 min", "e5m2 max", "e4m3 max"} <= markers


def test_cdf_chart_panels():
    s = CdfSeries("takum8", ((Fraction(1, 2), Decimal(0)), (Fraction(1), Decimal("Infinity"))))
    t = CdfSeries("e4m3", ((Fraction(1), Decimal("0.01")),))
    root = ET.fromstring(cdf_svg([("8 bit", [s, t]), ("16 bit", [s])]).encode())
    assert _series(root) == ["takum8", "e4m3", "takum8"]


def test_error_bands():
    assert _error_level(Decimal(0)) == ZERO_BAND
    assert _error_level(Decimal("Infinity")) == INF_BAND
    assert _error_level(Decimal("0.01")) == -2
    assert _error_level(Decimal("1e-30")) == ZERO_BAND


def test_log10_of_huge_fractions():
    assert round(log10(Fraction(1, 2**255)), 4) == -76.7626
    assert log10(Decimal("1000")) == 3
