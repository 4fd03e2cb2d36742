"""Number-format laboratory: linear takums, posits and IEEE-style mini-floats.

The format modules convert between bit patterns and exact values
(:mod:`fractions`-based, see :mod:`takumlab.exact`).  On top of them sit a
sparse-matrix conversion benchmark (:mod:`takumlab.bench`) and a rewriter for
AVX10.2 instruction mnemonics (:mod:`takumlab.isa`).
"""

from .exact import NAR, NEG_INF, POS_INF, ZERO, ExtendedReal, Special, rel_2norm_error
from .formats import BENCH_FORMATS, FORMATS, Format, get_format
from .minifloat import MiniFloatBits, MiniFloatSpec, mf_decode, mf_dynamic_range, mf_encode
from .posit import PositBits, posit_decode, posit_dynamic_range, posit_encode, posit_negate
from .takum import (
    TakumBits,
    takum_compare,
    takum_decode,
    takum_dynamic_range,
    takum_encode,
    takum_fields,
    takum_negate,
)

__version__ = "0.1.0"

__all__ = [
    "NAR", "NEG_INF", "POS_INF", "ZERO", "ExtendedReal", "Special", "rel_2norm_error",
    "BENCH_FORMATS", "FORMATS", "Format", "get_format",
    "MiniFloatBits", "MiniFloatSpec", "mf_decode", "mf_dynamic_range", "mf_encode",
    "PositBits", "posit_decode", "posit_dynamic_range", "posit_encode", "posit_negate",
    "TakumBits", "takum_compare", "takum_decode", "takum_dynamic_range", "takum_encode",
    "takum_fields", "takum_negate",
]
