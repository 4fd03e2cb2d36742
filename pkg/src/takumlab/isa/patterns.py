"""Expansion of finite regular expressions into their full language.

Only the fragment used by the instruction tables is accepted: literal
characters, alternation ``|``, grouping ``(...)`` and the optional marker
``?``.  Anything that could make the language infinite or hard to enumerate
(``*``, ``+``, ``{m,n}``, character classes, ``.``) is rejected.
"""

from __future__ import annotations

_UNSUPPORTED = set("*+{}[].\\^$")


class UnsupportedPattern(ValueError):
    pass


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else None

    def alternation(self) -> set[str]:
        out = self.sequence()
        while self.peek() == "|":
            self.i += 1
            out |= self.sequence()
        return out

    def sequence(self) -> set[str]:
        out = {""}
        while (ch := self.peek()) is not None and ch not in "|)":
            atom = self.atom()
            if self.peek() == "?":
                self.i += 1
                atom = atom | {""}
            out = {a + b for a in out for b in atom}
        return out

    def atom(self) -> set[str]:
        ch = self.peek()
        if ch in _UNSUPPORTED:
            raise UnsupportedPattern(f"operator {ch!r} at offset {self.i} of {self.s!r} is not supported")
        if ch == "?":
            raise UnsupportedPattern(f"'?' without operand at offset {self.i} of {self.s!r}")
        if ch == "(":
            self.i += 1
            if self.peek() == "?":
                raise UnsupportedPattern(f"group extension at offset {self.i} of {self.s!r}")
            inner = self.alternation()
            if self.peek() != ")":
                raise UnsupportedPattern(f"unbalanced '(' in {self.s!r}")
            self.i += 1
            return inner
        self.i += 1
        return {ch}


def expand_pattern(pattern: str) -> list[str]:
    """The sorted, de-duplicated language of ``pattern``.

    >>> expand_pattern("A(B|C)?")
    ['A', 'AB', 'AC']
    """
    p = _Parser(pattern)
    lang = p.alternation()
    if p.peek() is not None:
        raise UnsupportedPattern(f"unbalanced ')' at offset {p.i} of {pattern!r}")
    return sorted(lang)
