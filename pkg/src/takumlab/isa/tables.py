"""Instruction group tables: classification, rewriting and enumeration.

The shipped data are two files.  ``avx10_2.txt`` is the curated legacy
mnemonic list and is the source of truth for counts; ``groups.ini`` holds,
per group, the legacy and proposed patterns and the ordered rewrite rules.
Patterns act as classifiers only, since several of them accept strings that
are not real instructions.
"""

from __future__ import annotations

import configparser
import csv
import difflib
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from .patterns import UnsupportedPattern, expand_pattern

CATEGORIES = ("bitwise", "mask", "integer", "floating_point", "cryptographic")
WIDTHS = (8, 16, 32, 64, 128, 256)
BANNED_SUBSTRINGS = ("BF16", "HF8", "BF8", "PH")
# "NE" marks the bfloat16 no-exceptions forms (VADDNEPBF16, VCVTNE2PS2BF16);
# a bare substring test would also hit AFFINE
NE_MARKER = re.compile(r"NE(2?P|BF)")
MNEMONIC = re.compile(r"[A-Z0-9]+")

_PLACEHOLDER = re.compile(r"\{(=\d+|\w+(?::\w+)?)\}")
_SLOT = "\0"


class IsaError(Exception):
    pass


class UnclassifiedMnemonic(IsaError):
    def __init__(self, mnemonic: str, nearest: list[tuple[str, str]]):
        self.mnemonic, self.nearest = mnemonic, nearest
        hint = ", ".join(f"{g} ({ex})" for g, ex in nearest) or "none"
        super().__init__(f"{mnemonic!r} matches no group pattern; nearest groups: {hint}")


class TableIntegrityError(IsaError):
    pass


@dataclass(frozen=True)
class Rule:
    regex: re.Pattern
    templates: tuple[str, ...]
    reason: str = ""

    def render(self, m: re.Match, maps: dict, slot: bool = False) -> list[str]:
        """Expand every template; with ``slot`` the width slot is left as a marker."""
        groups = m.groupdict()
        out = []
        for t in self.templates:
            holders = list(_PLACEHOLDER.finditer(t))
            width_slots = [h for h in holders if h.group(1).startswith("=") or ":" in h.group(1)]
            last = width_slots[-1] if width_slots else None

            def sub(h, last=last):
                if slot and last is not None and h.start() == last.start():
                    return _SLOT
                key = h.group(1)
                if key.startswith("="):
                    return key[1:]
                name, _, mapname = key.partition(":")
                value = groups[name] or ""
                if not mapname:
                    return value
                try:
                    return maps[mapname][value]
                except KeyError:
                    raise TableIntegrityError(f"map {mapname!r} has no entry for {value!r}") from None

            out.append(_PLACEHOLDER.sub(sub, t))
        return out


@dataclass(frozen=True)
class GroupDef:
    id: str
    category: str
    legacy_pattern: str
    proposed_pattern: str
    generalise: bool
    rules: tuple[Rule, ...]

    @cached_property
    def legacy_re(self) -> re.Pattern:
        return re.compile(self.legacy_pattern)

    @cached_property
    def proposed_re(self) -> re.Pattern:
        return re.compile(self.proposed_pattern)

    @cached_property
    def proposed_language(self) -> frozenset[str]:
        try:
            return frozenset(expand_pattern(self.proposed_pattern))
        except UnsupportedPattern as exc:
            raise TableIntegrityError(f"{self.id}: proposed pattern is not finite: {exc}") from None

    def match_rule(self, mnemonic: str) -> tuple[Rule, re.Match]:
        for rule in self.rules:
            m = rule.regex.fullmatch(mnemonic)
            if m:
                return rule, m
        raise TableIntegrityError(f"{self.id}: no rewrite rule accepts {mnemonic}")


@dataclass(frozen=True)
class Classification:
    mnemonic: str
    group: str
    category: str
    form: str  # "legacy" or "proposed"


@dataclass(frozen=True)
class Rewrite:
    mnemonic: str
    group: str
    direct: frozenset[str]
    generalised: frozenset[str]
    reason: str = ""

    @property
    def targets(self) -> frozenset[str]:
        return self.direct | self.generalised


@dataclass(frozen=True)
class LegacyListing:
    mnemonics: tuple[str, ...]
    counts: dict[str, int]

    @property
    def total(self) -> int:
        return len(self.mnemonics)


@dataclass(frozen=True, order=True)
class DiffEntry:
    kind: str  # renamed, unchanged, generalised, removed, added
    legacy: str
    proposed: str
    group: str
    note: str = ""


def _parse_rules(gid: str, text: str) -> tuple[Rule, ...]:
    rules = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lhs, sep, rhs = line.partition(" -> ")
        if not sep:
            raise TableIntegrityError(f"{gid}: rewrite rule without '->': {line!r}")
        try:
            regex = re.compile(lhs.strip())
        except re.error as exc:
            raise TableIntegrityError(f"{gid}: bad rule pattern {lhs!r}: {exc}") from None
        rhs = rhs.strip()
        if rhs.startswith("-"):
            rules.append(Rule(regex, (), rhs[1:].strip()))
        else:
            rules.append(Rule(regex, tuple(t.strip() for t in rhs.split(","))))
    if not rules:
        raise TableIntegrityError(f"{gid}: no rewrite rules")
    return tuple(rules)


def parse_groups(text: str) -> tuple[dict[str, GroupDef], dict[str, dict[str, str]]]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise TableIntegrityError(f"group table is malformed: {exc}") from None
    maps = {}
    if cp.has_section("maps"):
        for name, spec in cp["maps"].items():
            maps[name] = dict(item.partition(":")[::2] for item in spec.split())
    groups = {}
    for gid in cp.sections():
        if gid == "maps":
            continue
        sec = cp[gid]
        try:
            category = sec["category"]
            g = GroupDef(
                gid, category, sec["legacy"].strip(), sec["proposed"].strip(),
                sec.getboolean("generalise", False), _parse_rules(gid, sec["rewrite"]),
            )
        except KeyError as exc:
            raise TableIntegrityError(f"{gid}: missing key {exc}") from None
        if category not in CATEGORIES:
            raise TableIntegrityError(f"{gid}: unknown category {category!r}")
        groups[gid] = g
    return groups, maps


def parse_mnemonic_list(text: str) -> list[str]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not MNEMONIC.fullmatch(line):
            raise TableIntegrityError(f"line {n}: {line!r} is not a mnemonic")
        out.append(line)
    dupes = [m for m, c in Counter(out).items() if c > 1]
    if dupes:
        raise TableIntegrityError(f"duplicate mnemonics: {', '.join(sorted(dupes))}")
    return out


class IsaTables:
    """Loaded group table plus legacy list.  Immutable after construction."""

    def __init__(self, groups: dict[str, GroupDef], maps: dict, legacy: Iterable[str]):
        self.groups = groups
        self.maps = maps
        self.legacy = tuple(legacy)
        self._by_group = {}
        for m in self.legacy:
            self._by_group.setdefault(self.classify(m).group, []).append(m)
        self._direct_by_stem = self._direct_stems()

    @classmethod
    def load(cls, groups_path=None, list_path=None) -> "IsaTables":
        data = resources.files(__package__).joinpath("data")
        try:
            gtext = Path(groups_path).read_text("utf-8") if groups_path else data.joinpath("groups.ini").read_text("utf-8")
            ltext = Path(list_path).read_text("utf-8") if list_path else data.joinpath("avx10_2.txt").read_text("utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise TableIntegrityError(f"cannot read instruction tables: {exc}") from None
        groups, maps = parse_groups(gtext)
        return cls(groups, maps, parse_mnemonic_list(ltext))

    # --- classification -------------------------------------------------

    def classify(self, mnemonic: str) -> Classification:
        if not MNEMONIC.fullmatch(mnemonic):
            raise UnclassifiedMnemonic(mnemonic, [])
        hits = [g for g in self.groups.values() if g.legacy_re.fullmatch(mnemonic)]
        if len(hits) > 1:
            raise TableIntegrityError(f"{mnemonic} matches several groups: {', '.join(g.id for g in hits)}")
        if hits:
            g = hits[0]
            return Classification(mnemonic, g.id, g.category, "legacy")
        hits = [g for g in self.groups.values() if g.proposed_re.fullmatch(mnemonic)]
        if len({g.proposed_pattern for g in hits}) > 1:
            raise TableIntegrityError(f"{mnemonic} matches several proposed patterns: {', '.join(g.id for g in hits)}")
        if hits:
            # groups sharing one proposed pattern; report the first
            g = hits[0]
            return Classification(mnemonic, g.id, g.category, "proposed")
        raise UnclassifiedMnemonic(mnemonic, self._nearest(mnemonic))

    def _nearest(self, mnemonic: str, n: int = 3) -> list[tuple[str, str]]:
        owner = {}
        for g in self.groups.values():
            for m in self._by_group.get(g.id, ()):
                owner.setdefault(m, g.id)
            for m in g.proposed_language:
                owner.setdefault(m, g.id)
        out, seen = [], set()
        for cand in difflib.get_close_matches(mnemonic, list(owner), n=20, cutoff=0.5):
            if owner[cand] not in seen:
                seen.add(owner[cand])
                out.append((owner[cand], cand))
            if len(out) == n:
                break
        return out

    # --- rewriting -------------------------------------------------------

    def _direct_stems(self) -> dict[str, set[str]]:
        stems: dict[str, set[str]] = {}
        for m in self.legacy:
            g = self.groups[self.classify(m).group]
            if not g.generalise or self.is_proposed(m):
                continue
            rule, match = g.match_rule(m)
            for stem, direct in zip(rule.render(match, self.maps, slot=True), rule.render(match, self.maps)):
                stems.setdefault(stem, set()).add(direct)
        return stems

    @cached_property
    def proposed(self) -> frozenset[str]:
        return frozenset().union(*(g.proposed_language for g in self.groups.values()))

    def is_proposed(self, mnemonic: str) -> bool:
        return mnemonic in self.proposed

    def rewrite_detail(self, mnemonic: str) -> Rewrite:
        c = self.classify(mnemonic)
        if self.is_proposed(mnemonic):
            return Rewrite(mnemonic, c.group, frozenset([mnemonic]), frozenset())
        g = self.groups[c.group]
        rule, match = g.match_rule(mnemonic)
        direct = frozenset(rule.render(match, self.maps))
        extra: set[str] = set()
        if g.generalise:
            for stem in rule.render(match, self.maps, slot=True):
                if _SLOT not in stem:
                    continue
                widths = {stem.replace(_SLOT, str(w)) for w in WIDTHS} & g.proposed_language
                extra |= widths - self._direct_by_stem.get(stem, set()) - direct
        return Rewrite(mnemonic, g.id, direct, frozenset(extra), rule.reason)

    def rewrite(self, mnemonic: str) -> frozenset[str]:
        return self.rewrite_detail(mnemonic).targets

    # --- enumeration -----------------------------------------------------

    def enumerate_legacy(self) -> LegacyListing:
        counts = Counter(self.classify(m).category for m in self.legacy)
        return LegacyListing(self.legacy, {c: counts.get(c, 0) for c in CATEGORIES})

    def enumerate_proposed(self) -> list[str]:
        return sorted(self.proposed)

    def group_members(self, gid: str) -> list[str]:
        return list(self._by_group.get(gid, ()))

    def diff(self) -> list[DiffEntry]:
        entries = []
        reached = set()
        for m in self.legacy:
            r = self.rewrite_detail(m)
            if not r.targets:
                entries.append(DiffEntry("removed", m, "", r.group, r.reason))
            for t in sorted(r.direct):
                entries.append(DiffEntry("unchanged" if t == m else "renamed", m, t, r.group))
            for t in sorted(r.generalised):
                entries.append(DiffEntry("generalised", m, t, r.group))
            reached |= r.targets
        for t in sorted(self.proposed - reached):
            entries.append(DiffEntry("added", "", t, self.classify(t).group))
        return entries

    # --- checks ----------------------------------------------------------

    def validate(self) -> list[str]:
        """Every violated table property, as human-readable lines (empty when sound)."""
        problems = []
        listing = self.enumerate_legacy()
        proposed = self.proposed
        for m in self.legacy:
            try:
                targets = self.rewrite(m)
            except IsaError as exc:
                problems.append(str(exc))
                continue
            if not targets <= proposed:
                problems.append(f"{m} rewrites outside the proposed set: {sorted(targets - proposed)}")
        for p in sorted(proposed):
            if self.rewrite(p) != {p}:
                problems.append(f"{p} is not a fixed point of rewrite")
            bad = [s for s in BANNED_SUBSTRINGS if s in p]
            if bad or NE_MARKER.search(p):
                problems.append(f"{p} keeps a special-format marker")
        if sum(listing.counts.values()) != listing.total:
            problems.append("category counts do not add up")
        return problems


def write_classification_csv(rows: Iterable[Classification], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(("mnemonic", "group", "category"))
    for c in rows:
        w.writerow((c.mnemonic, c.group, c.category))


def write_diff_csv(entries: Iterable[DiffEntry], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(("kind", "legacy", "proposed", "group", "note"))
    for e in entries:
        w.writerow((e.kind, e.legacy, e.proposed, e.group, e.note))


def diff_text(entries: list[DiffEntry]) -> str:
    counts = Counter(e.kind for e in entries)
    lines = [
        "kind counts: " + ", ".join(f"{k} {counts[k]}" for k in ("renamed", "unchanged", "generalised", "removed", "added")),
        "",
    ]
    removed = [e for e in entries if e.kind == "removed"]
    if removed:
        lines.append("removed (no proposed counterpart):")
        lines += [f"  {e.group} {e.legacy}: {e.note}" for e in removed]
        lines.append("")
    added = [e for e in entries if e.kind == "added"]
    if added:
        lines.append("added (not reached from any legacy instruction):")
        by_group: dict[str, list[str]] = {}
        for e in added:
            by_group.setdefault(e.group, []).append(e.proposed)
        lines += [f"  {g}: {' '.join(ms)}" for g, ms in sorted(by_group.items())]
    return "\n".join(lines).rstrip() + "\n"


@lru_cache(maxsize=1)
def default_tables() -> IsaTables:
    return IsaTables.load()


def classify(mnemonic: str) -> Classification:
    return default_tables().classify(mnemonic)


def rewrite(mnemonic: str) -> frozenset[str]:
    return default_tables().rewrite(mnemonic)


def enumerate_legacy() -> LegacyListing:
    return default_tables().enumerate_legacy()


def enumerate_proposed() -> list[str]:
    return default_tables().enumerate_proposed()


def expand_group(gid: str, which: str = "proposed") -> list[str]:
    g = default_tables().groups[gid]
    return expand_pattern(g.proposed_pattern if which == "proposed" else g.legacy_pattern)


def nearest_groups(mnemonic: str) -> list[tuple[str, str]]:
    return default_tables()._nearest(mnemonic)

