"""Finitely presented abelian groups over the integers.

A :class:`Presentation` is a list of generator keys and sparse relation rows.
:func:`quotient_structure` first removes generators that some relation
solves with a unit coefficient (sparse Tietze moves), then runs a dense Smith
normal form on what is left.  Everything is exact Python integer arithmetic.

>>> p = Presentation(["a", "b"], [{0: 2}, {0: 1, 1: 3}])
>>> s = quotient_structure(p)
>>> s.rank, s.torsion
(0, [6])
>>> class_of(p, [0, 2]).torsion
(2,)
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Vector = Mapping[int, int]


class DimensionError(ValueError):
    pass


class NotWellDefined(ValueError):
    def __init__(self, index: int):
        super().__init__(f"map is not well-defined: relator {index} is not sent to zero")
        self.index = index


# ---------------------------------------------------------------------------
# dense Smith normal form


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]], want_u: bool = True, want_v: bool = True,
                      want_vinv: bool = False):
    """Return (U, D, V) with U*A*V = D diagonal, d1 | d2 | ..., U and V unimodular.

    With ``want_vinv`` the inverse of V is returned as a fourth entry.  Pivots
    are chosen of minimal absolute value.
    """
    r = len(A)
    c = len(A[0]) if r else 0
    D = [list(map(int, row)) for row in A]
    U = _identity(r) if want_u else None
    V = _identity(c) if want_v else None
    Vi = _identity(c) if want_vinv else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row dst += q * row src
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        if U is not None:
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
        if Vi is not None:
            # inverse of the column operation acts on rows of V^-1
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                row = D[i]
                for j in range(t, c):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            done = True
            for i in range(t + 1, r):
                if D[i][t]:
                    q = D[i][t] // p
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, c):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, r) if any(D[i][j] % p for j in range(t + 1, c))), None
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < r and t < c and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
    out = (U, D, V)
    return out + (Vi,) if want_vinv else out


def diagonal(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def mat_mul(A, B):
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def determinant(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    M = [list(map(int, r)) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# small integer linear algebra on top of SNF


def left_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A basis of {x : x M = 0}; saturated since it is made of rows of a unimodular U."""
    if not M:
        return []
    U, D, _ = smith_normal_form(M, want_v=False)
    rank = sum(1 for d in diagonal(D) if d)
    return [list(row) for row in U[rank:]]


def row_lattice_basis(R: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A basis of the lattice spanned by the rows of R."""
    if not R:
        return []
    _, D, _, Vi = smith_normal_form(R, want_u=False, want_v=False, want_vinv=True)
    return [[d * x for x in Vi[i]] for i, d in enumerate(diagonal(D)) if d]


def solve_left(M: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """An integer x with x M = b, or None."""
    if not M:
        return [] if not any(b) else None
    U, D, V = smith_normal_form(M)
    bv = [sum(b[k] * V[k][j] for k in range(len(b))) for j in range(len(V[0]))]
    diag = diagonal(D)
    y = [0] * len(M)
    for i, d in enumerate(diag):
        if d:
            if bv[i] % d:
                return None
            y[i] = bv[i] // d
    for j in range(len(diag), len(bv)):
        if bv[j]:
            return None
    for i, d in enumerate(diag):
        if not d and bv[i]:
            return None
    return [sum(y[i] * U[i][k] for i in range(len(M))) for k in range(len(M))]


# ---------------------------------------------------------------------------
# presentations


def _as_sparse(row, n: int | None = None) -> dict[int, int]:
    if isinstance(row, Mapping):
        out = {int(k): int(v) for k, v in row.items() if v}
    else:
        if n is not None and len(row) != n:
            raise DimensionError(f"row has length {len(row)}, expected {n}")
        out = {i: int(v) for i, v in enumerate(row) if v}
    if n is not None:
        for k in out:
            if not 0 <= k < n:
                raise DimensionError(f"column {k} out of range for {n} generators")
    return out


class Presentation:
    """Generators (unique keys) and relation rows stored as sparse dicts."""

    def __init__(self, generators: Iterable, relations: Iterable = (), kinds: Iterable[str] | None = None):
        self.generators = list(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator keys must be unique")
        self.index = {g: i for i, g in enumerate(self.generators)}
        n = len(self.generators)
        self.relations = [_as_sparse(r, n) for r in relations]
        self.kinds = list(kinds) if kinds is not None else ["rel"] * len(self.relations)
        if len(self.kinds) != len(self.relations):
            raise ValueError("one kind per relation required")
        self._structure: GroupStructure | None = None
        self._tracked: GroupStructure | None = None

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def vector(self, terms: Mapping) -> dict[int, int]:
        """Generator-key -> coefficient mapping to a sparse coordinate vector."""
        out: dict[int, int] = {}
        for k, c in terms.items():
            if k not in self.index:
                raise KeyError(f"unknown generator {k!r}")
            i = self.index[k]
            out[i] = out.get(i, 0) + c
        return {i: c for i, c in out.items() if c}

    def matrix(self) -> list[list[int]]:
        n = self.ngens
        return [[r.get(j, 0) for j in range(n)] for r in self.relations]

    def to_json(self) -> dict:
        return {"generators": [str(g) for g in self.generators], "relations": self.matrix()}

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        return cls(data["generators"], data.get("relations", []))

    def structure(self, track: bool = False) -> "GroupStructure":
        if track:
            if self._tracked is None:
                self._tracked = _compute_structure(self, track=True)
                if self._structure is None:
                    self._structure = self._tracked
            return self._tracked
        if self._structure is None:
            self._structure = _compute_structure(self, track=False)
        return self._structure


@dataclass(frozen=True)
class ElementCoords:
    torsion: tuple[int, ...]
    free: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.torsion) and not any(self.free)

    def flat(self) -> list[int]:
        return list(self.torsion) + list(self.free)

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "orders": list(self.orders), "free": list(self.free)}


@dataclass
class GroupStructure:
    rank: int
    torsion: list[int]
    ngens: int
    pivots: list = field(repr=False, default_factory=list)
    res_cols: list[int] = field(repr=False, default_factory=list)
    diag: list[int] = field(repr=False, default_factory=list)
    V: list = field(repr=False, default_factory=list)
    Vinv: list = field(repr=False, default_factory=list)
    U: list | None = field(repr=False, default=None)
    res_prov: list | None = field(repr=False, default=None)

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def orders(self) -> list[int]:
        """Orders of the SNF basis elements: torsion first, then 0 for free ones."""
        return list(self.torsion) + [0] * self.rank

    def _slots(self) -> tuple[list[int], list[int]]:
        ntor = [i for i, d in enumerate(self.diag) if d >= 2]
        free = [i for i in range(len(self.res_cols)) if i >= len(self.diag) or self.diag[i] == 0]
        return ntor, free

    def lifts(self) -> list[dict[int, int]]:
        """Generator vectors representing the SNF basis (same order as ``orders``)."""
        ntor, free = self._slots()
        out = []
        for i in ntor + free:
            out.append({self.res_cols[k]: x for k, x in enumerate(self.Vinv[i]) if x})
        return out

    def reduce(self, v: Mapping[int, int], cert: dict | None = None) -> dict[int, int]:
        """Eliminate pivot columns; optionally accumulate the relator combination used."""
        v = dict(v)
        for c, u, row, prov in self.pivots:
            x = v.get(c)
            if not x:
                continue
            f = x * u
            for k, val in row.items():
                nv = v.get(k, 0) - f * val
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            if cert is not None:
                for k, val in prov.items():
                    nv = cert.get(k, 0) + f * val
                    if nv:
                        cert[k] = nv
                    else:
                        cert.pop(k, None)
        return v

    def coords(self, v: Mapping[int, int]) -> ElementCoords:
        r = self.reduce(v)
        pos = {c: k for k, c in enumerate(self.res_cols)}
        x = [0] * len(self.res_cols)
        for c, val in r.items():
            x[pos[c]] = val
        z = [sum(x[k] * self.V[k][j] for k in range(len(x)) if x[k]) for j in range(len(x))]
        ntor, free = self._slots()
        return ElementCoords(
            tuple(z[i] % self.diag[i] for i in ntor),
            tuple(z[i] for i in free),
            tuple(self.diag[i] for i in ntor),
        )


def _compute_structure(p: Presentation, track: bool) -> GroupStructure:
    n = p.ngens
    rows: dict[int, dict[int, int]] = {}
    prov: dict[int, dict[int, int]] = {}
    colidx: dict[int, set[int]] = {}
    for rid, r in enumerate(p.relations):
        if not r:
            continue
        rows[rid] = dict(r)
        if track:
            prov[rid] = {rid: 1}
        for c in r:
            colidx.setdefault(c, set()).add(rid)
    heap = [(len(r), rid) for rid, r in rows.items()]
    heapq.heapify(heap)
    pivots = []
    while heap:
        ln, rid = heapq.heappop(heap)
        row = rows.get(rid)
        if row is None or len(row) != ln:
            continue
        units = [c for c, v in row.items() if v == 1 or v == -1]
        if not units:
            continue
        c = min(units, key=lambda k: (len(colidx[k]), k))
        u = row[c]
        del rows[rid]
        for k in row:
            colidx[k].discard(rid)
        rprov = prov.pop(rid, None) if track else None
        pivots.append((c, u, row, rprov if track else {}))
        for other in sorted(colidx[c]):
            orow = rows[other]
            f = orow[c] * u
            for k, val in row.items():
                nv = orow.get(k, 0) - f * val
                if nv:
                    if k not in orow:
                        colidx.setdefault(k, set()).add(other)
                    orow[k] = nv
                elif k in orow:
                    del orow[k]
                    colidx[k].discard(other)
            if track:
                op = prov[other]
                for k, val in rprov.items():
                    nv = op.get(k, 0) - f * val
                    if nv:
                        op[k] = nv
                    else:
                        op.pop(k, None)
            if orow:
                heapq.heappush(heap, (len(orow), other))
            else:
                del rows[other]
                prov.pop(other, None)
    pivot_cols = {c for c, *_ in pivots}
    res_cols = [c for c in range(n) if c not in pivot_cols]
    pos = {c: k for k, c in enumerate(res_cols)}
    # drop duplicate residual rows (up to sign) before densifying
    res_rows, res_prov, seen = [], [], set()
    for rid in sorted(rows):
        r = rows[rid]
        key = tuple(sorted(r.items()))
        neg = tuple(sorted((k, -v) for k, v in r.items()))
        if key in seen or neg in seen:
            continue
        seen.add(key)
        res_rows.append([0] * len(res_cols))
        for k, val in r.items():
            res_rows[-1][pos[k]] = val
        if track:
            res_prov.append(prov[rid])
    k = len(res_cols)
    if res_rows and k:
        U, D, V, Vi = smith_normal_form(res_rows, want_u=track, want_vinv=True)
        diag = diagonal(D)
    else:
        U, V, Vi = ([] if track else None), _identity(k), _identity(k)
        diag = []
    rank = k - sum(1 for d in diag if d)
    torsion = [d for d in diag if d >= 2]
    return GroupStructure(
        rank, torsion, n, pivots, res_cols, diag, V, Vi, U, res_prov if track else None
    )


def quotient_structure(p: Presentation) -> GroupStructure:
    return p.structure()


def _check_vector(p: Presentation, v) -> dict[int, int]:
    return _as_sparse(v, p.ngens)


def class_of(p: Presentation, v) -> ElementCoords:
    return p.structure().coords(_check_vector(p, v))


def is_zero(p: Presentation, v) -> bool:
    return class_of(p, v).is_zero


def certify_membership(p: Presentation, v) -> dict[int, int] | None:
    """Relator combination {row index: coefficient} summing to v, or None if v is nonzero."""
    target = _check_vector(p, v)
    s = p.structure(track=True)
    cert: dict[int, int] = {}
    r = s.reduce(target, cert)
    pos = {c: k for k, c in enumerate(s.res_cols)}
    x = [0] * len(s.res_cols)
    for c, val in r.items():
        x[pos[c]] = val
    z = [sum(x[k] * s.V[k][j] for k in range(len(x)) if x[k]) for j in range(len(x))]
    y = []
    for i, d in enumerate(s.diag):
        if d == 0:
            if z[i]:
                return None
            y.append(0)
        else:
            if z[i] % d:
                return None
            y.append(z[i] // d)
    if any(z[len(s.diag):]):
        return None
    nres = len(s.res_prov or [])
    y += [0] * (nres - len(y))
    for kk in range(nres):
        w = sum(y[i] * s.U[i][kk] for i in range(nres) if y[i])
        if not w:
            continue
        for rid, val in s.res_prov[kk].items():
            nv = cert.get(rid, 0) + w * val
            if nv:
                cert[rid] = nv
            else:
                cert.pop(rid, None)
    if combination(p, cert) != target:
        raise AssertionError("certificate failed verification")
    return dict(sorted(cert.items()))


def combination(p: Presentation, cert: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for rid, c in cert.items():
        for k, v in p.relations[rid].items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass
class SubgroupReport:
    rank: int
    torsion: list[int]
    generators: list[dict[int, int]]

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


@dataclass
class HomResult:
    src: GroupStructure
    dst: GroupStructure
    matrix: list[list[int]]
    kernel: SubgroupReport
    image: SubgroupReport
    injective: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective

    def to_json(self) -> dict:
        return {
            "source": self.src.to_json(),
            "target": self.dst.to_json(),
            "kernel": self.kernel.to_json(),
            "image": self.image.to_json(),
            "injective": self.injective,
            "surjective": self.surjective,
        }


def _apply(images: Sequence[Mapping[int, int]], v: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for g, c in v.items():
        for k, x in images[g].items():
            out[k] = out.get(k, 0) + c * x
    return {k: x for k, x in out.items() if x}


def induced_hom(src: Presentation, dst: Presentation, images, check: bool = True) -> HomResult:
    """The map on quotients given by generator images (one dst vector per src generator)."""
    if len(images) != src.ngens:
        raise DimensionError(f"need {src.ngens} images, got {len(images)}")
    ims = [_as_sparse(r, dst.ngens) for r in images]
    if check:
        for idx, rel in enumerate(src.relations):
            if not is_zero(dst, _apply(ims, rel)):
                raise NotWellDefined(idx)
    S, T = src.structure(), dst.structure()
    a, b = S.orders, T.orders
    lifts = S.lifts()
    M = [T.coords(_apply(ims, lift)).flat() for lift in lifts]
    s, t = len(a), len(b)
    B = [[b[j] if k == j else 0 for k in range(t)] for j in range(t) if b[j]]
    stacked = M + B
    if t:
        K = [row[:s] for row in left_kernel(stacked)]
    else:
        K = [[int(i == j) for j in range(s)] for i in range(s)]
    Kb = row_lattice_basis(K, s) if K else []
    # kernel = K / span(a_i e_i)
    rels = []
    for i, ai in enumerate(a):
        if ai:
            e = [ai if j == i else 0 for j in range(s)]
            x = solve_left(Kb, e)
            assert x is not None, "relation lattice must lie in the kernel"
            rels.append(x)
    kernel = _sub_report(Kb, rels, lifts, s)
    # image = Z^s / K
    img = _quotient_report(Kb, s)
    surj = True
    if t:
        _, D, _ = smith_normal_form(stacked, want_u=False, want_v=False) if stacked else (None, [], None)
        dg = diagonal(D) if stacked else []
        surj = len([d for d in dg if d]) == t and all(d == 1 for d in dg if d)
    return HomResult(S, T, M, kernel, img, kernel.is_trivial, surj)


def _sub_report(Kb, rels, lifts, s) -> SubgroupReport:
    k = len(Kb)
    if k == 0:
        return SubgroupReport(0, [], [])
    if rels:
        U, D, V, Vi = smith_normal_form(rels, want_u=False, want_vinv=True)
        diag = diagonal(D)
    else:
        Vi, diag = _identity(k), []
    gens, torsion, rank = [], [], 0
    for i in range(k):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            continue
        if d:
            torsion.append(d)
        else:
            rank += 1
        coeff = [sum(Vi[i][r] * Kb[r][j] for r in range(k)) for j in range(s)]
        vec: dict[int, int] = {}
        for j, cj in enumerate(coeff):
            for g, x in lifts[j].items():
                vec[g] = vec.get(g, 0) + cj * x
        gens.append({g: x for g, x in vec.items() if x})
    return SubgroupReport(rank, torsion, gens)


def _quotient_report(Kb, s) -> SubgroupReport:
    if not Kb:
        return SubgroupReport(s, [], [])
    _, D, _ = smith_normal_form(Kb, want_u=False, want_v=False)
    diag = diagonal(D)
    nz = [d for d in diag if d]
    return SubgroupReport(s - len(nz), [d for d in nz if d >= 2], [])
