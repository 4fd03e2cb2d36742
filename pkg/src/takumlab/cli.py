"""Command-line entry point: ``takumlab {inspect,range,bench,isa}``.

Exit codes: 0 success, 1 usage error, 2 data or table integrity error,
3 network error (including an offline run against a cold cache).
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from . import bench, collection, isa, minifloat, posit, svg, takum
from .exact import NAR, NEG_INF, POS_INF, Special, format_real
from .formats import BENCH_FORMATS, FORMATS, get_format
from .matrix import MatrixMarketError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NETWORK = 0, 1, 2, 3
ALLOWED_WIDTHS = (8, 16, 32, 64)

log = logging.getLogger("takumlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def _output(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _widths(text: str) -> list[int]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    if not items:
        raise UsageError("width list is empty")
    try:
        widths = [int(t) for t in items]
    except ValueError:
        raise UsageError(f"bad width list {text!r}") from None
    bad = sorted(set(widths) - set(ALLOWED_WIDTHS))
    if bad:
        raise UsageError(f"widths must be among {ALLOWED_WIDTHS}, got {bad}")
    return sorted(set(widths))


# --- inspect -------------------------------------------------------------


def _bitstr(value: int, n: int) -> str:
    return format(value, f"0{n}b") if n > 0 else "∅"


def _value_text(v) -> str:
    if isinstance(v, Special):
        return {NAR: "NaR", POS_INF: "inf", NEG_INF: "-inf"}[v]
    s = str(v)
    return s if len(s) <= 40 else format_real(v)


def describe(fmt_name: str, bits: int) -> list[str]:
    """Field breakdown of one pattern; the first line is the summary."""
    fmt = get_format(fmt_name)
    value = fmt.decode(bits)
    n = fmt.width
    if fmt.family == "ieee":
        spec = minifloat.PRESETS[fmt.name]
        if value is NAR:
            return ["NaN"]
        s, e, m = minifloat.MiniFloatBits(spec, bits).fields()
        if value == 0:
            return ["zero" if not s else "zero (negative)"]
        head = f"S={s} E={_bitstr(e, spec.exp_bits)} M={_bitstr(m, spec.frac_bits)}"
        if value in (POS_INF, NEG_INF):
            return [f"{head} {_value_text(value)}"]
    else:
        if bits == 0:
            return ["zero"]
        if bits == 1 << (n - 1):
            return ["NaR"]
        if fmt.family == "takum":
            f = takum.takum_fields(takum.TakumBits(n, bits))
            # the fraction field is shown without trailing zeros, so an exact
            # power of two prints F=∅
            frac = _bitstr(f.fraction_bits, f.p).rstrip("0") or "∅" if f.p else "∅"
            head = (
                f"S={f.sign} D={f.direction} R={_bitstr(f.regime, 3)} "
                f"C={_bitstr(f.characteristic_bits, f.r)} F={frac}"
            )
        else:
            x = posit.PositBits(n, bits)
            s = bits >> (n - 1)
            k, e, fbits, flen = posit.posit_fields(posit.posit_negate(x) if s else x)
            frac = _bitstr(fbits, flen).rstrip("0") or "∅" if flen else "∅"
            head = f"S={s} k={k} E={_bitstr(e, posit.ES)} F={frac}"
    lines = [f"{head} value={_value_text(value)}"]
    if isinstance(value, Fraction):
        lines.append(f"decimal={format_real(value)}")
        back = fmt.encode(value)
        lines.append(f"round-trip {'ok' if back == bits else f'MISMATCH 0x{back:x}'}")
    return lines


def _parse_input(text: str, width: int):
    """``0x..``/``0b..`` are bit patterns; anything else is a decimal value."""
    t = text.strip().lower()
    try:
        if t.startswith(("0x", "0b")):
            bits = int(t, 0)
            if not 0 <= bits < 1 << width:
                raise UsageError(f"{text} does not fit in {width} bits")
            return bits, None
    except ValueError:
        raise UsageError(f"bad bit pattern {text!r}") from None
    if t in ("nan", "nar"):
        return None, NAR
    if t in ("inf", "+inf", "-inf"):
        return None, NEG_INF if t.startswith("-") else POS_INF
    try:
        return None, Fraction(Decimal(text))
    except (InvalidOperation, ValueError):
        raise UsageError(f"cannot read {text!r} as bits or a number") from None


def cmd_inspect(args) -> int:
    spec = args.spec
    if len(spec) == 3:
        name, value_text = f"{spec[0]}{spec[1]}", spec[2]
    elif len(spec) == 2:
        name, value_text = spec
    else:
        raise UsageError("expected FORMAT [WIDTH] VALUE, e.g. 'takum 8 0x40' or 'e4m3 0x7F'")
    try:
        fmt = get_format(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    bits, value = _parse_input(value_text, fmt.width)
    if bits is None:
        bits = fmt.encode(value)
        digits = (fmt.width + 3) // 4
        print(f"{fmt.name}: {value_text} rounds to 0x{bits:0{digits}x}")
    for line in describe(fmt.name, bits):
        print(line)
    return EXIT_OK


# --- range -----------------------------------------------------------------


def cmd_range(args) -> int:
    table = bench.dynamic_range_table(_widths(args.widths))
    with _output(args.out) as fh:
        bench.write_range_csv(table, fh)
    if args.fixed_out:
        with _output(args.fixed_out) as fh:
            bench.write_fixed_range_csv(table, fh)
    if args.svg:
        Path(args.svg).write_text(svg.range_svg(table), encoding="utf-8")
    return EXIT_OK


# --- bench -----------------------------------------------------------------


def _select_formats(args) -> list[str]:
    names = [f.strip() for f in args.formats.split(",") if f.strip()] if args.formats else list(BENCH_FORMATS)
    try:
        names = [get_format(f).name for f in names]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if args.widths:
        keep = set(_widths(args.widths))
        names = [f for f in names if FORMATS[f].width in keep]
    if not names:
        raise UsageError("no formats selected")
    return names


def _load_matrices(args) -> collection.FetchResult:
    if args.source == "desk":
        return collection.load_desk_subset(jobs=args.jobs)
    cache = Path(args.cache_dir) if args.cache_dir else collection.default_cache_dir()
    if args.index:
        index = collection.CollectionIndex.load(args.index)
    else:
        cached = cache / "index.csv"
        if cached.exists():
            index = collection.CollectionIndex.load(cached)
        elif args.offline:
            raise collection.NetworkError(
                f"offline mode: no cached collection index at {cached}; "
                "run once without --offline or pass --index"
            )
        else:
            index = collection.refresh_index()
            cache.mkdir(parents=True, exist_ok=True)
            with open(cached, "w", newline="", encoding="utf-8") as fh:
                index.write_csv(fh)
    return collection.fetch_collection(
        index, max_nnz=args.max_nnz, cache_dir=cache, offline=args.offline, jobs=args.jobs
    )


def cmd_bench(args) -> int:
    if args.threshold <= 0:
        raise UsageError("--threshold must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    formats = _select_formats(args)
    fetched = _load_matrices(args)
    result = bench.run_benchmark(fetched.matrices, formats, jobs=args.jobs)
    cdfs = bench.all_cdfs(result) if result.records else []
    threshold = Decimal(str(args.threshold))

    out = sys.stdout
    out.write("format,width,matrices,stability\n")
    for s in cdfs:
        frac = bench.stability_fraction(s, threshold)
        out.write(f"{s.format},{FORMATS[s.format].width},{len(s.points)},{format_real(Fraction(frac))}\n")

    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        with _output(d / "errors.csv") as fh:
            bench.write_errors_csv(result.records, fh)
        with _output(d / "cdf.csv") as fh:
            bench.write_cdf_csv(cdfs, fh)
        with _output(d / "skipped.csv") as fh:
            bench.write_skipped_csv(result.skipped, fh)
        with _output(d / "manifest.csv") as fh:
            fetched.write_manifest(fh)
    if args.svg:
        panels = []
        for w in sorted({FORMATS[s.format].width for s in cdfs}):
            panels.append((f"{w} bit", [s for s in cdfs if FORMATS[s.format].width == w]))
        Path(args.svg).write_text(svg.cdf_svg(panels), encoding="utf-8")
    return EXIT_OK


# --- isa -------------------------------------------------------------------


def cmd_isa(args) -> int:
    tables = isa.IsaTables.load(args.groups, args.list)
    names = [m.strip().upper() for m in args.mnemonics]
    with _output(args.out) as out:
        if args.action == "classify":
            rows = [tables.classify(m) for m in (names or tables.legacy)]
            isa.tables.write_classification_csv(rows, out)
        elif args.action == "rewrite":
            for m in names or tables.legacy:
                r = tables.rewrite_detail(m)
                if r.targets:
                    out.write(f"{m} -> {' '.join(sorted(r.direct) + sorted(r.generalised))}\n")
                else:
                    out.write(f"{m} -> (none: {r.reason})\n")
        elif args.action == "enumerate":
            if args.legacy:
                items = [m for m in tables.legacy if not names or tables.classify(m).group in names]
            elif names:
                items = sorted(set().union(*(tables.groups[g].proposed_language for g in names if g in tables.groups)))
                unknown = [g for g in names if g not in tables.groups]
                if unknown:
                    raise UsageError(f"unknown group(s): {', '.join(unknown)}")
            else:
                items = tables.enumerate_proposed()
            out.writelines(m + "\n" for m in items)
        elif args.action == "diff":
            entries = tables.diff()
            if args.csv:
                isa.tables.write_diff_csv(entries, out)
            else:
                out.write(isa.tables.diff_text(entries))
        elif args.action == "stats":
            listing = tables.enumerate_legacy()
            out.write(f"total {listing.total}\n")
            for c in isa.CATEGORIES:
                out.write(f"{c} {listing.counts[c]}\n")
            out.write(f"proposed {len(tables.proposed)}\n")
            problems = tables.validate()
            for p in problems:
                out.write(f"problem: {p}\n")
            if problems:
                return EXIT_DATA
    return EXIT_OK


# --- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="takumlab", description="Takum, posit and mini-float tooling.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("inspect", help="decode one bit pattern or round one value")
    q.add_argument("spec", nargs="+", metavar="ARG", help="FORMAT [WIDTH] BITS-OR-VALUE")
    q.set_defaults(func=cmd_inspect)

    q = sub.add_parser("range", help="dynamic-range table (CSV, optional SVG)")
    q.add_argument("--widths", default="8,16,32,64")
    q.add_argument("--out", help="range CSV path (default stdout)")
    q.add_argument("--fixed-out", help="CSV for the fixed-width 8/16-bit formats")
    q.add_argument("--svg", help="write a log-scale chart here")
    q.set_defaults(func=cmd_range)

    q = sub.add_parser("bench", help="matrix conversion benchmark")
    src = q.add_mutually_exclusive_group()
    src.add_argument("--desk", dest="source", action="store_const", const="desk",
                     help="pinned 20-matrix subset shipped with the package (default)")
    src.add_argument("--collection", dest="source", action="store_const", const="collection",
                     help="SuiteSparse selection, downloaded into the cache")
    q.set_defaults(source="desk")
    q.add_argument("--index", help="index CSV to use instead of the collection's own")
    q.add_argument("--formats", help=f"comma list (default {','.join(BENCH_FORMATS)})")
    q.add_argument("--widths", help="keep only formats of these widths")
    q.add_argument("--max-nnz", type=int, default=50_000)
    q.add_argument("--cache-dir", help=f"matrix cache (default ${collection.CACHE_ENV} or ~/.cache/takumlab)")
    q.add_argument("--offline", action="store_true", help="never touch the network")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--threshold", type=float, default=1.0)
    q.add_argument("--out", help="directory for errors/cdf/skipped/manifest CSVs")
    q.add_argument("--svg", help="write the CDF panels here")
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("isa", help="AVX10.2 mnemonic classification and renaming")
    q.add_argument("action", choices=("classify", "rewrite", "enumerate", "diff", "stats"))
    q.add_argument("mnemonics", nargs="*", help="mnemonics, or group ids for enumerate")
    q.add_argument("--legacy", action="store_true", help="enumerate the legacy list instead")
    q.add_argument("--csv", action="store_true", help="diff as CSV")
    q.add_argument("--groups", help="alternative group table")
    q.add_argument("--list", help="alternative legacy mnemonic list")
    q.add_argument("--out")
    q.set_defaults(func=cmd_isa)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # positionals after an option (``isa enumerate --legacy M01``) end up here
    if extra and args.command == "isa" and not any(e.startswith("-") for e in extra):
        args.mnemonics += extra
    elif extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"takumlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except collection.NetworkError as exc:
        print(f"takumlab: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except (collection.IntegrityError, isa.IsaError, MatrixMarketError) as exc:
        print(f"takumlab: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
