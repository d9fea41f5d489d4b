"""Signed forests: integer combinations of framed trees and twisted trees.

Framed entries are merged only when the trees are isomorphic as oriented
trees; antisymmetry is a relation of the tree groups, not a normalisation, so
``<(1,2),3>`` and ``<(2,1),3>`` stay separate entries.  Twisted entries are
merged up to re-orientation of the body, because the twisting number of a
Whitney disk does not depend on its orientation.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .trees import (
    TreeSyntaxError,
    TwistedTree,
    UnrootedTree,
    canonical_tree,
    labels,
    order,
    parse_tree,
    print_tree,
    symmetric_body,
    twisted_key,
)


class ForestError(ValueError):
    pass


@dataclass(frozen=True)
class SignedForest:
    m: int
    framed: tuple[tuple[UnrootedTree, int], ...] = ()
    twisted: tuple[tuple[TwistedTree, int], ...] = field(default=())

    @classmethod
    def build(
        cls,
        m: int,
        framed: Iterable[tuple[int, UnrootedTree]] = (),
        twisted: Iterable[tuple[int, TwistedTree]] = (),
    ) -> "SignedForest":
        fr: dict[str, list] = {}
        for c, t in framed:
            if not isinstance(t, UnrootedTree):
                raise ForestError(f"framed entry must be an unrooted tree, got {t!r}")
            _check_labels(t, m)
            slot = fr.setdefault(t.key, [t, 0])
            slot[1] += c
        tw: dict[str, list] = {}
        for c, t in twisted:
            if not isinstance(t, TwistedTree):
                raise ForestError(f"twisted entry must be a twisted tree, got {t!r}")
            _check_labels(t, m)
            slot = tw.setdefault(twisted_key(t.body), [t, 0])
            slot[1] += c
        return cls(
            m,
            tuple((canonical_tree(fr[k][0]), fr[k][1]) for k in sorted(fr) if fr[k][1]),
            tuple(
                (TwistedTree(symmetric_body(tw[k][0].body)), tw[k][1])
                for k in sorted(tw)
                if tw[k][1]
            ),
        )

    @classmethod
    def empty(cls, m: int) -> "SignedForest":
        return cls(m)

    def entries(self):
        """(coefficient, tree) pairs, framed first."""
        return [(c, t) for t, c in self.framed] + [(c, t) for t, c in self.twisted]

    def coefficient(self, t) -> int:
        if isinstance(t, TwistedTree):
            k = twisted_key(t.body)
            return sum(c for s, c in self.twisted if twisted_key(s.body) == k)
        return sum(c for s, c in self.framed if s == t)

    def __bool__(self) -> bool:
        return bool(self.framed or self.twisted)

    def __add__(self, other: "SignedForest") -> "SignedForest":
        return forest_add(self, other)

    def __neg__(self) -> "SignedForest":
        return self.scale(-1)

    def __sub__(self, other: "SignedForest") -> "SignedForest":
        return forest_add(self, -other)

    def scale(self, k: int) -> "SignedForest":
        return SignedForest.build(
            self.m, [(k * c, t) for t, c in self.framed], [(k * c, t) for t, c in self.twisted]
        )

    def __str__(self) -> str:
        return print_forest(self)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "framed": [{"coef": c, "tree": print_tree(t)} for t, c in self.framed],
            "twisted": [{"coef": c, "tree": print_tree(t)} for t, c in self.twisted],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SignedForest":
        if not isinstance(data, dict) or "m" not in data:
            raise ForestError("forest JSON needs an 'm' field")
        m = int(data["m"])
        fr, tw = [], []
        for e in data.get("framed", []):
            t = parse_tree(e["tree"], m)
            if not isinstance(t, UnrootedTree):
                raise ForestError(f"framed entry {e['tree']!r} is not an unrooted tree")
            fr.append((int(e["coef"]), t))
        for e in data.get("twisted", []):
            t = parse_tree(e["tree"], m)
            if not isinstance(t, TwistedTree):
                raise ForestError(f"twisted entry {e['tree']!r} is not a twisted tree")
            tw.append((int(e["coef"]), t))
        return cls.build(m, fr, tw)


def _check_labels(t, m: int) -> None:
    for i in labels(t):
        if not 1 <= i <= m:
            raise ForestError(f"label {i} of {print_tree(t)} out of range 1..{m}")


def forest_add(f: SignedForest, g: SignedForest) -> SignedForest:
    if f.m != g.m:
        raise ForestError(f"cannot add forests with m={f.m} and m={g.m}")
    return SignedForest.build(
        f.m,
        [(c, t) for t, c in f.framed + g.framed],
        [(c, t) for t, c in f.twisted + g.twisted],
    )


def single(m: int, t, coef: int = 1) -> SignedForest:
    if isinstance(t, TwistedTree):
        return SignedForest.build(m, twisted=[(coef, t)])
    return SignedForest.build(m, framed=[(coef, t)])


# ---------------------------------------------------------------------------
# literals

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*)?\s*")


def parse_forest(text: str, m: int) -> SignedForest:
    """Parse a signed sum such as ``"+2*<(1,2),3> -1*(1,1)^inf"``."""
    fr, tw = [], []
    pos = 0
    text = text.strip()
    if text in ("", "0"):
        return SignedForest.empty(m)
    while pos < len(text):
        mo = _TERM.match(text, pos)
        sign = -1 if mo.group(1) == "-" else 1
        coef = sign * int(mo.group(2)) if mo.group(2) else sign
        start = mo.end()
        end = _tree_end(text, start)
        piece = text[start:end]
        try:
            t = parse_tree(piece, m)
        except TreeSyntaxError as e:
            raise TreeSyntaxError(str(e).split(" in ")[0], start + e.pos, text) from None
        if isinstance(t, UnrootedTree):
            fr.append((coef, t))
        elif isinstance(t, TwistedTree):
            tw.append((coef, t))
        else:
            raise TreeSyntaxError("forest terms must be unrooted or twisted trees", start, text)
        pos = end
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos < len(text) and text[pos] not in "+-":
            raise TreeSyntaxError(f"expected '+' or '-', got {text[pos]!r}", pos, text)
    return SignedForest.build(m, fr, tw)


def _tree_end(text: str, start: int) -> int:
    depth = 0
    i = start
    while i < len(text):
        ch = text[i]
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
        elif ch in "+-" and depth == 0:
            break
        i += 1
    return len(text[:i].rstrip()) if i < len(text) else i


def print_forest(f: SignedForest) -> str:
    parts = [f"{c:+d}*{print_tree(t)}" for c, t in f.entries()]
    return " ".join(parts) if parts else "0"


def load_forest(spec: str, m: int | None) -> SignedForest:
    """A forest literal, or ``@path`` to a forest JSON file."""
    if spec.startswith("@"):
        data = json.loads(Path(spec[1:]).read_text())
        f = SignedForest.from_json(data)
        if m is not None and f.m != m:
            raise ForestError(f"forest file has m={f.m} but --m {m} was given")
        return f
    if m is None:
        raise ForestError("--m is required with a forest literal")
    return parse_forest(spec, m)


# ---------------------------------------------------------------------------
# order predicates


def is_order_n_twisted(f: SignedForest, n: int) -> bool:
    return all(order(t) >= n for t, _ in f.framed) and all(
        2 * order(t) >= n for t, _ in f.twisted
    )


def is_order_n_framed(f: SignedForest, n: int) -> bool:
    return not f.twisted and all(order(t) >= n for t, _ in f.framed)


def is_non_repeating(t) -> bool:
    ls = labels(t)
    return len(set(ls)) == len(ls)


def is_non_repeating_order_n(f: SignedForest, n: int) -> bool:
    return all(order(t) >= n for t, _ in f.framed if is_non_repeating(t))


def tau_n_extract(f: SignedForest, n: int) -> SignedForest:
    """The order n framed trees and order n/2 twisted trees of f."""
    for t, c in f.framed:
        if order(t) < n:
            raise ForestError(f"entry {c:+d}*{print_tree(t)} has order {order(t)} < {n}")
    for t, c in f.twisted:
        if 2 * order(t) < n:
            raise ForestError(f"entry {c:+d}*{print_tree(t)} has order {order(t)} < {n}/2")
    return SignedForest(
        f.m,
        tuple((t, c) for t, c in f.framed if order(t) == n),
        tuple((t, c) for t, c in f.twisted if 2 * order(t) == n),
    )
