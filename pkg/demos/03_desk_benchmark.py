"""
Matrix conversion benchmark on the shipped desk subset
======================================================

Convert every entry of 20 small sparse matrices to each format and measure
the relative Frobenius error.  Writes desk_cdf.svg next to the working
directory.
"""

from decimal import Decimal

from takumlab import bench, svg
from takumlab.collection import load_desk_subset
from takumlab.formats import BENCH_FORMATS

matrices = load_desk_subset().matrices
print(len(matrices), "matrices")

result = bench.run_benchmark(matrices, BENCH_FORMATS, jobs=4)

# Fraction of matrices each format converts with error below 1.
for series in bench.all_cdfs(result):
    share = bench.stability_fraction(series, Decimal(1))
    print(f"{series.format:9s} {float(share):.2f}")

# Which matrices break E4M3?
for r in result.records:
    if r.format == "e4m3" and r.rel_error.is_infinite():
        print("e4m3 overflow:", r.matrix_id)

panels = [("8 bit", [s for s in bench.all_cdfs(result) if s.format in ("takum8", "posit8", "e4m3", "e5m2")])]
with open("desk_cdf.svg", "w") as fh:
    fh.write(svg.cdf_svg(panels))
