"""Standard posits (two exponent bits, ``useed = 16``).

After the sign bit comes a run-length coded regime ``k``, then up to two
exponent bits ``e`` (missing ones read as zero) and the fraction ``f``; a
positive pattern is worth ``(1 + f) * 2**(4k + e)``.  As with takums, all-zero
is zero, the sign-only pattern is NaR and negation is two's complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import NAR, ZERO, ExtendedReal, Special, dyadic, floor_log2, scaled_floor, pow2, to_exact

ES = 2


@dataclass(frozen=True)
class PositBits:
    width: int
    bits: int

    def __post_init__(self):
        if not 2 <= self.width <= 64:
            raise ValueError(f"posit width must be in [2, 64], got {self.width}")
        if not 0 <= self.bits < 1 << self.width:
            raise ValueError(f"bits 0x{self.bits:x} do not fit in {self.width} bits")

    def __str__(self) -> str:
        return f"posit{self.width}(0x{self.bits:0{(self.width + 3) // 4}x})"

    @property
    def is_nar(self) -> bool:
        return self.bits == 1 << (self.width - 1)

    @property
    def signed(self) -> int:
        if self.bits >> (self.width - 1):
            return self.bits - (1 << self.width)
        return self.bits


def posit_negate(x: PositBits) -> PositBits:
    return PositBits(x.width, -x.bits & ((1 << x.width) - 1))


def posit_fields(x: PositBits) -> tuple[int, int, int, int]:
    """``(k, e, fraction_bits, fraction_length)`` of a positive pattern."""
    n = x.width
    body = x.bits & ((1 << (n - 1)) - 1)
    avail = n - 1
    lead = body >> (avail - 1) & 1
    run = 0
    while run < avail and (body >> (avail - 1 - run) & 1) == lead:
        run += 1
    k = run - 1 if lead else -run
    rest = max(avail - run - 1, 0)
    tail = body & ((1 << rest) - 1)
    if rest >= ES:
        e = tail >> (rest - ES)
        flen = rest - ES
        fbits = tail & ((1 << flen) - 1)
    else:
        e = tail << (ES - rest)
        flen, fbits = 0, 0
    return k, e, fbits, flen


def posit_decode(x: PositBits) -> ExtendedReal:
    if x.bits == 0:
        return ZERO
    if x.is_nar:
        return NAR
    if x.bits >> (x.width - 1):
        return -posit_decode(posit_negate(x))
    k, e, fbits, flen = posit_fields(x)
    return dyadic((1 << flen) | fbits, 4 * k + e - flen)


def posit_dynamic_range(width: int) -> tuple[Fraction, Fraction]:
    if not 2 <= width <= 64:
        raise ValueError(f"posit width must be in [2, 64], got {width}")
    return pow2(-4 * (width - 2)), pow2(4 * (width - 2))


def _truncated_pattern(v: Fraction, width: int) -> int:
    c = floor_log2(v)
    k, e = c >> 2, c & 3
    if k >= 0:
        regime, rlen = ((1 << (k + 1)) - 1) << 1, k + 2
    else:
        regime, rlen = 1, -k + 1
    q = max(width - 1 - rlen - ES, 0)
    frac = scaled_floor(v, q - c) - (1 << q)
    body = ((regime << ES | e) << q) | frac
    length = rlen + ES + q
    return body >> (length - (width - 1))


def posit_encode(v, width: int) -> PositBits:
    """Nearest posit to ``v`` (ties to the even pattern), saturating at both ends."""
    v = to_exact(v)
    if isinstance(v, Special):
        return PositBits(width, 1 << (width - 1))
    if v == 0:
        return PositBits(width, 0)
    if v < 0:
        return posit_negate(posit_encode(-v, width))
    lo_val, hi_val = posit_dynamic_range(width)
    if v >= hi_val:
        return PositBits(width, (1 << (width - 1)) - 1)
    if v <= lo_val:
        return PositBits(width, 1)
    lo = _truncated_pattern(v, width)
    below = posit_decode(PositBits(width, lo))
    if below == v:
        return PositBits(width, lo)
    above = posit_decode(PositBits(width, lo + 1))
    if v - below < above - v or (v - below == above - v and lo % 2 == 0):
        return PositBits(width, lo)
    return PositBits(width, lo + 1)
