"""
Renaming AVX10.2 mnemonics
==========================

Classify legacy mnemonics, rewrite them into width-explicit names and look
at what the generalised instruction set adds.
"""

from collections import Counter

from takumlab import isa

tables = isa.default_tables()

for m in ("KANDB", "VPMOVD2M", "VADDPH", "VDIVNEPBF16", "VDPPHPS", "VAESENC"):
    c = tables.classify(m)
    print(f"{m:14s} {c.group} {c.category:15s} -> {' '.join(sorted(tables.rewrite(m))) or '(none)'}")

# The 16-bit half-precision add gains an 8-bit sibling.
print(tables.rewrite_detail("VADDPH"))

# Unknown names get a suggestion.
try:
    tables.classify("VADDPQ")
except isa.UnclassifiedMnemonic as exc:
    print(exc)

print(Counter(e.kind for e in tables.diff()))
print(len(tables.enumerate_proposed()), "proposed mnemonics")
