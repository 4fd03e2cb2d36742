"""Linear takums of any width from 2 to 64 bits.

Bit layout, most significant first::

    S | D | R (3 bits) | C (r bits) | F (p bits)

with ``r = R`` if ``D`` else ``7 - R`` and ``p = max(n, 12) - 5 - r``.  Patterns
shorter than 12 bits are zero-extended to 12 bits before the fields are read,
so a decoder never has to look past the top 12 bits to find the fraction.

A positive pattern has the value ``(1 + F / 2**p) * 2**c`` with the
characteristic ``c = 2**r - 1 + C`` (``D = 1``) or ``c = -2**(r+1) + 1 + C``
(``D = 0``).  Negative values are two's complements of positive ones, which
makes the signed-integer order of the patterns the order of their values.
"""

from __future__ import annotations

import functools

from dataclasses import dataclass
from fractions import Fraction

from .exact import NAR, ZERO, ExtendedReal, Special, dyadic, floor_log2, scaled_floor, pow2, to_exact

MIN_WIDTH = 2
MAX_WIDTH = 64
DECODE_WINDOW = 12


def _check_width(width: int) -> None:
    if not MIN_WIDTH <= width <= MAX_WIDTH:
        raise ValueError(f"takum width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {width}")


@dataclass(frozen=True, order=False)
class TakumBits:
    width: int
    bits: int

    def __post_init__(self):
        _check_width(self.width)
        if not 0 <= self.bits < 1 << self.width:
            raise ValueError(f"bits 0x{self.bits:x} do not fit in {self.width} bits")

    def __str__(self) -> str:
        digits = (self.width + 3) // 4
        return f"takum{self.width}(0x{self.bits:0{digits}x})"

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    @property
    def is_nar(self) -> bool:
        return self.bits == 1 << (self.width - 1)

    @property
    def signed(self) -> int:
        """The pattern read as a two's-complement integer."""
        if self.bits >> (self.width - 1):
            return self.bits - (1 << self.width)
        return self.bits


@dataclass(frozen=True)
class DecodedTakum:
    """Raw field breakdown of one pattern (for the sign bit as stored)."""

    sign: int
    direction: int
    regime: int
    characteristic_bits: int
    fraction_bits: int
    r: int
    p: int
    characteristic: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.fraction_bits, 1 << self.p)


def takum_fields(x: TakumBits) -> DecodedTakum:
    ext = max(x.width, DECODE_WINDOW)
    b = x.bits << (ext - x.width)
    s = b >> (ext - 1) & 1
    d = b >> (ext - 2) & 1
    regime = b >> (ext - 5) & 0b111
    r = regime if d else 7 - regime
    p = ext - 5 - r
    cbits = b >> p & ((1 << r) - 1)
    fbits = b & ((1 << p) - 1)
    c = (1 << r) - 1 + cbits if d else -(1 << (r + 1)) + 1 + cbits
    return DecodedTakum(s, d, regime, cbits, fbits, r, p, c)


def takum_decode(x: TakumBits) -> ExtendedReal:
    if x.bits == 0:
        return ZERO
    if x.is_nar:
        return NAR
    if x.bits >> (x.width - 1):
        return -takum_decode(takum_negate(x))
    fields = takum_fields(x)
    return dyadic((1 << fields.p) | fields.fraction_bits, fields.characteristic - fields.p)


def takum_negate(x: TakumBits) -> TakumBits:
    return TakumBits(x.width, -x.bits & ((1 << x.width) - 1))


def takum_compare(a: TakumBits, b: TakumBits) -> int:
    """Three-way comparison (-1, 0, 1) of two takums of equal width.

    NaR is the most negative pattern and so orders below every value.
    """
    if a.width != b.width:
        raise ValueError(f"cannot compare takums of widths {a.width} and {b.width}")
    sa, sb = a.signed, b.signed
    return (sa > sb) - (sa < sb)


def max_pattern(width: int) -> TakumBits:
    return TakumBits(width, (1 << (width - 1)) - 1)


def min_pattern(width: int) -> TakumBits:
    return TakumBits(width, 1)


def takum_dynamic_range(width: int) -> tuple[Fraction, Fraction]:
    """Lower and upper end of the dynamic range at ``width`` bits.

    The upper end is the largest finite value.  Below 12 bits the lower end
    is the smallest positive value.  From 12 bits on it is the characteristic
    floor ``2**-255``: the smallest positive value is ``2**-254`` at 12 bits
    and ``(1 + 2**-(width-12)) * 2**-255`` beyond, tending to that floor (the
    pattern for ``2**-255`` itself is taken by zero).
    """
    _check_width(width)
    if width >= DECODE_WINDOW:
        return pow2(-255), takum_decode(max_pattern(width))
    return takum_decode(min_pattern(width)), takum_decode(max_pattern(width))


def _truncated_pattern(v: Fraction, width: int) -> int:
    """Pattern whose value is the largest takum <= v, for v strictly inside the range."""
    c = floor_log2(v)
    if c >= 0:
        r = (c + 1).bit_length() - 1
        cbits = c - (1 << r) + 1
        head = 0b01000 | r
    else:
        r = (-c).bit_length() - 1
        cbits = c + (1 << (r + 1)) - 1
        head = 0b00000 | (7 - r)
    q = max(width - 5 - r, 0)
    frac = scaled_floor(v, q - c) - (1 << q)
    full = ((head << r | cbits) << q) | frac
    length = 5 + r + q
    return full >> (length - width)


@functools.lru_cache(maxsize=None)
def _extremes(width: int) -> tuple[Fraction, Fraction]:
    return takum_decode(min_pattern(width)), takum_decode(max_pattern(width))


def takum_encode(v, width: int) -> TakumBits:
    """Nearest takum to ``v``; ties go to the even pattern, out-of-range values saturate."""
    _check_width(width)
    v = to_exact(v)
    if isinstance(v, Special):
        return TakumBits(width, 1 << (width - 1))
    if v == 0:
        return TakumBits(width, 0)
    if v < 0:
        return takum_negate(takum_encode(-v, width))
    lo_val, hi_val = _extremes(width)
    if v >= hi_val:
        return max_pattern(width)
    if v <= lo_val:
        return min_pattern(width)
    lo = _truncated_pattern(v, width)
    below = takum_decode(TakumBits(width, lo))
    if below == v:
        return TakumBits(width, lo)
    above = takum_decode(TakumBits(width, lo + 1))
    gap_lo, gap_hi = v - below, above - v
    if gap_lo < gap_hi or (gap_lo == gap_hi and lo % 2 == 0):
        return TakumBits(width, lo)
    return TakumBits(width, lo + 1)
