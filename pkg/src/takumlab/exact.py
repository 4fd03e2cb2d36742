"""Exact value domain shared by every format codec.

Finite values are :class:`fractions.Fraction` instances (zero included), the
non-finite ones are members of :class:`Special`.  Every decoder in the package
returns one of these, so conversions and error sums never lose information.
"""

from __future__ import annotations

import enum
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Union


class Special(enum.Enum):
    NAR = "nar"
    POS_INF = "inf"
    NEG_INF = "-inf"

    def __neg__(self) -> "Special":
        if self is Special.POS_INF:
            return Special.NEG_INF
        if self is Special.NEG_INF:
            return Special.POS_INF
        return self

    def __repr__(self) -> str:
        return f"Special.{self.name}"


NAR = Special.NAR
POS_INF = Special.POS_INF
NEG_INF = Special.NEG_INF
ZERO = Fraction(0)

ExtendedReal = Union[Fraction, Special]

#: significant digits carried by square roots in the error computation
SQRT_DIGITS = 40


class UndefinedErrorNorm(ZeroDivisionError):
    """The reference has no nonzero entry, so a relative error is undefined."""


def to_exact(x) -> ExtendedReal:
    """Convert ``int``, ``float``, ``str``, ``Fraction`` or ``Special`` to an exact value.

    Strings go through binary64 (``float``) first, the same way decimal
    literals are read from matrix files.  NaN maps to NaR.
    """
    if isinstance(x, Special):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        x = float(x)
    if isinstance(x, float):
        if math.isnan(x):
            return NAR
        if math.isinf(x):
            return POS_INF if x > 0 else NEG_INF
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact value")


def is_finite(v: ExtendedReal) -> bool:
    return isinstance(v, Fraction)


def neg(v: ExtendedReal) -> ExtendedReal:
    return -v


def floor_log2(q: Fraction) -> int:
    """Largest integer ``e`` with ``2**e <= q`` for a positive rational ``q``."""
    if q <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    n, d = q.numerator, q.denominator
    e = n.bit_length() - d.bit_length()
    # now 2**(e-1) < q < 2**(e+1)
    if e >= 0:
        if n < d << e:
            e -= 1
    elif n << -e < d:
        e -= 1
    return e


def pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def dyadic(m: int, e: int) -> Fraction:
    """``m * 2**e`` built with a single constructor call."""
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def scaled_floor(q: Fraction, shift: int) -> int:
    """``floor(q * 2**shift)`` in integer arithmetic."""
    if shift >= 0:
        return (q.numerator << shift) // q.denominator
    return q.numerator // (q.denominator << -shift)


def sqrt_decimal(q: Fraction, digits: int = SQRT_DIGITS) -> Decimal:
    """Square root of a nonnegative rational, truncated to ``digits`` significant digits."""
    if q < 0:
        raise ValueError("square root of a negative value")
    if q == 0:
        return Decimal(0)
    n, d = q.numerator, q.denominator
    # choose k so that n * 100**k // d carries at least 2*digits digits
    k = max(0, digits - (len(str(n)) - len(str(d))) // 2 + 1)
    root = math.isqrt(n * 10 ** (2 * k) // d)
    with localcontext() as ctx:
        ctx.prec = max(digits, len(str(root))) + 5
        value = Decimal(root).scaleb(-k)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = "ROUND_DOWN"
        return +value


def rel_2norm_error(reference, converted: Iterable[ExtendedReal]) -> Decimal:
    """Relative Euclidean error of ``converted`` against ``reference``.

    ``reference`` is a :class:`~takumlab.matrix.SparseMatrix` or an iterable of
    exact values, paired positionally with ``converted``.  The sums are exact;
    only the final square root is rounded (to :data:`SQRT_DIGITS` digits).
    Any non-finite converted value yields ``Decimal('Infinity')``.
    """
    ref = list(reference.values() if hasattr(reference, "values") else reference)
    conv = list(converted)
    if len(ref) != len(conv):
        raise ValueError(f"expected {len(ref)} converted values, got {len(conv)}")
    if any(not is_finite(a) for a in ref):
        raise ValueError("reference values must be finite")
    if any(not is_finite(b) for b in conv):
        return Decimal("Infinity")
    den = sum((a * a for a in ref), ZERO)
    if den == 0:
        raise UndefinedErrorNorm("reference has no nonzero entry")
    num = sum(((a - b) ** 2 for a, b in zip(ref, conv)), ZERO)
    return sqrt_decimal(num / den)


def format_real(v, digits: int = 17) -> str:
    """Render a value for CSV output: ``inf``/``-inf``/``nar`` or ``digits`` significant digits."""
    if isinstance(v, Special):
        return v.value
    if isinstance(v, Decimal):
        if v.is_infinite():
            return "inf" if v > 0 else "-inf"
        if v.is_nan():
            return "nar"
        return _format_fraction(Fraction(v), digits)
    if isinstance(v, Fraction):
        return _format_fraction(v, digits)
    if isinstance(v, float):
        if math.isnan(v):
            return "nar"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{digits - 1}e}"
    return format_real(to_exact(v), digits)


def _format_fraction(q: Fraction, digits: int) -> str:
    if q == 0:
        return f"{0:.{digits - 1}e}"
    sign = "-" if q < 0 else ""
    q = abs(q)
    e10 = _log10_floor(q)
    m = round(q * Fraction(10) ** (digits - 1 - e10))  # ties to even
    if m == 10**digits:
        e10 += 1
        m //= 10
    s = str(m)
    return f"{sign}{s[0]}.{s[1:]}e{e10:+03d}"


def _log10_floor(q: Fraction) -> int:
    # math.log10 accepts arbitrarily large ints; the loops fix rounding slop
    e = math.floor(math.log10(q.numerator) - math.log10(q.denominator))
    while Fraction(10) ** e > q:
        e -= 1
    while Fraction(10) ** (e + 1) <= q:
        e += 1
    return e
