"""
Dynamic range by width
======================

Takum range settles near 10**+-76.76 from 12 bits on, while posit and IEEE
ranges keep growing with the width.
"""

import sys

from takumlab import bench, svg

table = bench.dynamic_range_table([8, 12, 16, 32, 64])
bench.write_range_csv(table, sys.stdout)
print()

# The 8- and 16-bit floating-point derivatives.  E4M3 is listed with both
# maxima: 448 from the OFP8 encoding and 240 as some published range charts plot it.
bench.write_fixed_range_csv(table, sys.stdout)

for row in table.rows:
    lo, hi = row.takum
    print(f"takum{row.n}: log10 range {svg.log10(lo):.2f} .. {svg.log10(hi):.2f}")
