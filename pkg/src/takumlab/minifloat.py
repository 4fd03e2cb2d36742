"""IEEE 754-style binary formats with arbitrary exponent and fraction widths.

Covers the standard interchange formats and the low-precision derivatives
(bfloat16, OFP8 E4M3/E5M2) through :class:`MiniFloatSpec` presets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .exact import NAR, NEG_INF, POS_INF, ZERO, ExtendedReal, Special, floor_log2, pow2, to_exact


class NanPolicy(enum.Enum):
    IEEE = "ieee_all_payloads"
    # only S.1111.111 is NaN, every other top-exponent pattern is finite (OFP8 E4M3)
    SINGLE_PATTERN = "single_pattern_e4m3"
    NONE = "none"


@dataclass(frozen=True)
class MiniFloatSpec:
    name: str
    exp_bits: int
    frac_bits: int
    bias: int
    has_inf: bool = True
    nan_policy: NanPolicy = NanPolicy.IEEE

    def __post_init__(self):
        if self.exp_bits < 2 or self.frac_bits < 0:
            raise ValueError("need exp_bits >= 2 and frac_bits >= 0")
        if self.width > 64:
            raise ValueError(f"{self.name}: {self.width} bits exceed 64")
        if self.nan_policy is NanPolicy.IEEE and self.frac_bits == 0:
            raise ValueError("IEEE NaNs need at least one fraction bit")

    @property
    def width(self) -> int:
        return 1 + self.exp_bits + self.frac_bits

    @property
    def exp_max(self) -> int:
        return (1 << self.exp_bits) - 1

    @property
    def emin(self) -> int:
        return 1 - self.bias

    @property
    def max_finite_bits(self) -> int:
        m_all = (1 << self.frac_bits) - 1
        if self.has_inf:
            return (self.exp_max - 1) << self.frac_bits | m_all
        if self.nan_policy is NanPolicy.SINGLE_PATTERN:
            return self.exp_max << self.frac_bits | (m_all - 1)
        return self.exp_max << self.frac_bits | m_all

    def nan_bits(self, negative: bool = False) -> int:
        sign = int(negative) << (self.width - 1)
        if self.nan_policy is NanPolicy.IEEE:
            return sign | self.exp_max << self.frac_bits | 1 << (self.frac_bits - 1)
        if self.nan_policy is NanPolicy.SINGLE_PATTERN:
            return sign | (1 << (self.width - 1)) - 1
        raise ValueError(f"{self.name} has no NaN encoding")

    def inf_bits(self, negative: bool = False) -> int:
        if not self.has_inf:
            raise ValueError(f"{self.name} has no infinities")
        return int(negative) << (self.width - 1) | self.exp_max << self.frac_bits


FLOAT16 = MiniFloatSpec("float16", 5, 10, 15)
BFLOAT16 = MiniFloatSpec("bfloat16", 8, 7, 127)
FLOAT32 = MiniFloatSpec("float32", 8, 23, 127)
FLOAT64 = MiniFloatSpec("float64", 11, 52, 1023)
E5M2 = MiniFloatSpec("e5m2", 5, 2, 15)
E4M3 = MiniFloatSpec("e4m3", 4, 3, 7, has_inf=False, nan_policy=NanPolicy.SINGLE_PATTERN)

PRESETS = {s.name: s for s in (FLOAT16, BFLOAT16, FLOAT32, FLOAT64, E5M2, E4M3)}


@dataclass(frozen=True)
class MiniFloatBits:
    spec: MiniFloatSpec
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 1 << self.spec.width:
            raise ValueError(f"bits 0x{self.bits:x} do not fit {self.spec.name}")

    def __str__(self) -> str:
        return f"{self.spec.name}(0x{self.bits:0{(self.spec.width + 3) // 4}x})"

    def fields(self) -> tuple[int, int, int]:
        s = self.spec
        return (
            self.bits >> (s.width - 1),
            self.bits >> s.frac_bits & s.exp_max,
            self.bits & ((1 << s.frac_bits) - 1),
        )

    @property
    def is_nan(self) -> bool:
        return mf_decode(self) is NAR


def mf_decode(x: MiniFloatBits) -> ExtendedReal:
    spec = x.spec
    sign, e, m = x.fields()
    if e == spec.exp_max:
        if spec.nan_policy is NanPolicy.IEEE:
            if m == 0 and spec.has_inf:
                return NEG_INF if sign else POS_INF
            return NAR
        if spec.nan_policy is NanPolicy.SINGLE_PATTERN and m == (1 << spec.frac_bits) - 1:
            return NAR
    if e == 0:
        mag = Fraction(m, 1 << spec.frac_bits) * pow2(spec.emin)
    else:
        mag = (1 + Fraction(m, 1 << spec.frac_bits)) * pow2(e - spec.bias)
    return -mag if sign else mag


def mf_max_finite(spec: MiniFloatSpec) -> Fraction:
    return mf_decode(MiniFloatBits(spec, spec.max_finite_bits))


def mf_dynamic_range(spec: MiniFloatSpec) -> tuple[Fraction, Fraction, Fraction]:
    """``(min_subnormal, min_normal, max_finite)``."""
    min_normal = pow2(spec.emin)
    min_sub = pow2(spec.emin - spec.frac_bits) if spec.frac_bits else min_normal
    return min_sub, min_normal, mf_max_finite(spec)


def _round_half_even(q: Fraction) -> int:
    n, r = divmod(q.numerator, q.denominator)
    twice = 2 * r
    if twice > q.denominator or (twice == q.denominator and n % 2):
        n += 1
    return n


def mf_encode(v, spec: MiniFloatSpec) -> MiniFloatBits:
    """Round to nearest, ties to even, over normals and subnormals.

    Results above the largest finite value become infinity, or NaN for formats
    without infinities.  Magnitudes that round to zero keep their sign.
    """
    v = to_exact(v)
    top = spec.width - 1
    if v is NAR:
        return MiniFloatBits(spec, spec.nan_bits())
    if isinstance(v, Special):
        neg = v is NEG_INF
        if spec.has_inf:
            return MiniFloatBits(spec, spec.inf_bits(neg))
        return MiniFloatBits(spec, spec.nan_bits(neg))
    if v == 0:
        return MiniFloatBits(spec, 0)
    neg = v < 0
    a = -v if neg else v
    sign = int(neg) << top
    e = max(floor_log2(a), spec.emin)
    mant = _round_half_even(a / pow2(e - spec.frac_bits))
    if mant == 1 << (spec.frac_bits + 1):
        e += 1
        mant >>= 1
    rounded = mant * pow2(e - spec.frac_bits)
    if rounded > mf_max_finite(spec):
        if spec.has_inf:
            return MiniFloatBits(spec, spec.inf_bits(neg))
        if spec.nan_policy is NanPolicy.NONE:
            return MiniFloatBits(spec, sign | spec.max_finite_bits)
        return MiniFloatBits(spec, spec.nan_bits(neg))
    if mant < 1 << spec.frac_bits:
        # subnormal or zero; only reachable with e == emin
        return MiniFloatBits(spec, sign | mant)
    biased = e + spec.bias
    return MiniFloatBits(spec, sign | biased << spec.frac_bits | (mant - (1 << spec.frac_bits)))
