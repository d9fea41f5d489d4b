"""Groups whose elements decorate tree edges.

A finite group is given by element names and a multiplication table; the
identity is detected from the table.  The free group is handled formally on
reduced words (lower case letter = generator, upper case = inverse).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]  # table[a][b] = index of a*b

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise ValueError("group element names must be distinct")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table must be square of size |G|")
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise ValueError("multiplication table rows must be permutations")
        self.identity_index  # validates

    @property
    def identity_index(self) -> int:
        n = len(self.elements)
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                return e
        raise ValueError("multiplication table has no identity")

    @property
    def identity(self) -> str:
        return self.elements[self.identity_index]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g: str) -> int:
        try:
            return self.elements.index(g)
        except ValueError:
            raise ValueError(f"unknown group element {g!r}") from None

    def mul(self, a: str, b: str) -> str:
        return self.elements[self.table[self.index(a)][self.index(b)]]

    def inv(self, a: str) -> str:
        i, e = self.index(a), self.identity_index
        for x in range(len(self.elements)):
            if self.table[i][x] == e:
                return self.elements[x]
        raise ValueError(f"{a!r} has no inverse")

    def normalize(self, g: str | None) -> str | None:
        """None stands for the identity in tree decorations."""
        if g is None or g == self.identity:
            return None
        self.index(g)
        return g

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        els = tuple(str(e) for e in data["elements"])
        # entries may be indices or element names
        idx = {e: k for k, e in enumerate(els)}
        table = tuple(tuple(x if isinstance(x, int) else idx[str(x)] for x in r) for r in data["table"])
        return cls(els, table)

    @classmethod
    def load(cls, path: str | Path) -> "FiniteGroup":
        return cls.from_json(json.loads(Path(path).read_text()))


def trivial_group() -> FiniteGroup:
    return FiniteGroup(("1",), ((0,),))


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with elements named 1, a, a2, ..., a(n-1)."""
    names = tuple("1" if k == 0 else ("a" if k == 1 else f"a{k}") for k in range(n))
    return FiniteGroup(names, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


class FreeGroup:
    """Free group on letters a, b, ...; elements are reduced words, '1' is the identity."""

    def __init__(self, k: int):
        if not 1 <= k <= 26:
            raise ValueError("free group rank must be in 1..26")
        self.k = k
        self.letters = "abcdefghijklmnopqrstuvwxyz"[:k]

    identity = "1"

    def _check(self, w: str) -> str:
        if w in ("", "1"):
            return ""
        for c in w:
            if c.lower() not in self.letters:
                raise ValueError(f"{w!r} is not a word in {self.letters}")
        return w

    def reduce(self, w: str) -> str:
        out: list[str] = []
        for c in self._check(w):
            if out and out[-1] == c.swapcase():
                out.pop()
            else:
                out.append(c)
        return "".join(out) or "1"

    def mul(self, a: str, b: str) -> str:
        return self.reduce(self._check(a) + self._check(b))

    def inv(self, a: str) -> str:
        return self.reduce(self._check(a)[::-1].swapcase())

    def normalize(self, g: str | None) -> str | None:
        if g is None:
            return None
        r = self.reduce(g)
        return None if r == "1" else r
