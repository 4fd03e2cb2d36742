"""
A tour of the three format families
===================================

Decode a few bit patterns, round a few values and watch where the formats
run out of range.  Every value printed here is exact.
"""

from fractions import Fraction

from takumlab import get_format, takum_fields, TakumBits
from takumlab.exact import format_real

# A takum pattern splits into sign, direction, regime, characteristic and
# fraction.  0x45 at 8 bits is 1.625.
x = TakumBits(8, 0x45)
print(takum_fields(x))
print(get_format("takum8").decode(0x45))

# Negation is two's complement, so the negative twin is 0xbb.
print(get_format("takum8").decode(0xBB))

# The same value in each 8-bit format.
for name in ("takum8", "posit8", "e4m3", "e5m2"):
    fmt = get_format(name)
    bits = fmt.encode(Fraction(1, 3))
    print(f"{name:7s} 1/3 -> 0x{bits:02x} = {format_real(fmt.decode(bits), 8)}")

# Large values: tapered formats saturate, IEEE formats overflow.
for name in ("takum8", "posit8", "e4m3", "e5m2"):
    print(f"{name:7s} 1e6 -> {get_format(name).round(10**6)}")

# Tiny values: takums still resolve 1e-60 at 16 bits.
t16 = get_format("takum16")
print(format_real(t16.round(Fraction(1, 10**60)), 6))
