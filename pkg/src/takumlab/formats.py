"""Name-keyed registry of every number format the benchmark can convert into."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import minifloat, posit, takum
from .exact import ExtendedReal


@dataclass(frozen=True)
class Format:
    name: str
    family: str
    width: int
    encode: Callable[[object], int]
    decode: Callable[[int], ExtendedReal]

    def round(self, v) -> ExtendedReal:
        """Value after a round trip through this format."""
        return self.decode(self.encode(v))

    def table(self) -> list[tuple[int, ExtendedReal]]:
        """Every (pattern, value) pair; only sensible for narrow formats."""
        return [(b, self.decode(b)) for b in range(1 << self.width)]


def _takum(width: int) -> Format:
    return Format(
        f"takum{width}",
        "takum",
        width,
        lambda v: takum.takum_encode(v, width).bits,
        lambda b: takum.takum_decode(takum.TakumBits(width, b)),
    )


def _posit(width: int) -> Format:
    return Format(
        f"posit{width}",
        "posit",
        width,
        lambda v: posit.posit_encode(v, width).bits,
        lambda b: posit.posit_decode(posit.PositBits(width, b)),
    )


def _minifloat(spec: minifloat.MiniFloatSpec) -> Format:
    return Format(
        spec.name,
        "ieee",
        spec.width,
        lambda v: minifloat.mf_encode(v, spec).bits,
        lambda b: minifloat.mf_decode(minifloat.MiniFloatBits(spec, b)),
    )


FORMATS: dict[str, Format] = {}
for _w in (8, 16, 32, 64):
    FORMATS[f"takum{_w}"] = _takum(_w)
for _w in (8, 16, 32, 64):
    FORMATS[f"posit{_w}"] = _posit(_w)
for _spec in minifloat.PRESETS.values():
    FORMATS[_spec.name] = _minifloat(_spec)

#: formats of the conversion benchmark, grouped by bit width as in its three panels
BENCH_FORMATS = (
    "takum8", "posit8", "e4m3", "e5m2",
    "takum16", "posit16", "float16", "bfloat16",
    "takum32", "posit32", "float32",
)


def get_format(name: str) -> Format:
    try:
        return FORMATS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown format {name!r}; known: {', '.join(FORMATS)}") from None
