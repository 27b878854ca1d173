"""Exact rational linear algebra over finite graded bases.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator).  Everything here is immutable after construction.

Sign convention
---------------
Every Koszul sign in the package comes from :func:`koszul_sign`: moving a
graded symbol of degree ``p`` past one of degree ``q`` costs ``(-1)**(p*q)``.
For tensor products of maps this gives

    (f (x) g)(x (x) y) = (-1)**(|g|*|x|) f(x) (x) g(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

ExactScalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class InputError(ValueError):
    """Malformed input: dimension mismatch, bad basis, bad file."""


class InvariantError(ValueError):
    """A structural invariant (d^2 = 0, degree homogeneity, ...) fails."""


def to_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of rearranging graded symbols.

    ``degrees[i]`` is the degree of the i-th symbol in the original word;
    the new word is ``[old[order[0]], old[order[1]], ...]``.
    """
    sign = 1
    order = list(order)
    for a in range(len(order)):
        da = degrees[order[a]] & 1
        if not da:
            continue
        for b in range(a + 1, len(order)):
            if order[b] < order[a] and degrees[order[b]] & 1:
                sign = -sign
    return sign


def permutation_sign(order: Sequence[int]) -> int:
    return koszul_sign([1] * len(order), order)


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space given by an ordered named basis."""

    basis: tuple[tuple[str, int], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        basis = tuple((str(n), int(d)) for n, d in self.basis)
        object.__setattr__(self, "basis", basis)
        names = [n for n, _ in basis]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate basis names in {names}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def from_degrees(cls, degrees: Iterable[int], prefix: str = "e") -> "GradedSpace":
        return cls(tuple((f"{prefix}{i}", d) for i, d in enumerate(degrees)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.basis]

    @property
    def degrees(self) -> list[int]:
        return [d for _, d in self.basis]

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown basis element {name!r}") from None

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def indices_in_degree(self, degree: int) -> list[int]:
        return [i for i, (_, d) in enumerate(self.basis) if d == degree]

    def shift(self, k: int) -> "GradedSpace":
        return GradedSpace(tuple((n, d + k) for n, d in self.basis))

    def tensor(self, other: "GradedSpace") -> "GradedSpace":
        return GradedSpace(tuple((f"{a}|{b}", da + db)
                                 for a, da in self.basis for b, db in other.basis))


@dataclass(frozen=True)
class LinearMap:
    """Degree-homogeneous linear map stored sparsely.

    ``entries[(t, s)]`` is the coefficient of target basis element ``t`` in
    the image of source basis element ``s``.
    """

    source: GradedSpace
    target: GradedSpace
    degree: int
    entries: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        clean = {}
        for (t, s), v in self.entries.items():
            v = to_scalar(v)
            if v == 0:
                continue
            if not (0 <= t < self.target.dim and 0 <= s < self.source.dim):
                raise InputError(f"entry {(t, s)} out of range")
            if self.target.degree(t) - self.source.degree(s) != self.degree:
                raise InvariantError(
                    f"entry {(t, s)} connects degrees {self.source.degree(s)} -> "
                    f"{self.target.degree(t)}, map degree is {self.degree}")
            clean[(t, s)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {})

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, {(i, i): ONE for i in range(space.dim)})

    @classmethod
    def from_dense(cls, source, target, degree, rows):
        entries = {}
        for t, row in enumerate(rows):
            for s, v in enumerate(row):
                if v:
                    entries[(t, s)] = to_scalar(v)
        return cls(source, target, degree, entries)

    @property
    def shape(self):
        return (self.target.dim, self.source.dim)

    def to_dense(self) -> list[list[Fraction]]:
        rows = [[ZERO] * self.source.dim for _ in range(self.target.dim)]
        for (t, s), v in self.entries.items():
            rows[t][s] = v
        return rows

    def column(self, s: int) -> dict[int, Fraction]:
        return {t: v for (t, ss), v in self.entries.items() if ss == s}

    def apply(self, vector: Sequence) -> list[Fraction]:
        if len(vector) != self.source.dim:
            raise InputError(f"vector of length {len(vector)} for source of dim {self.source.dim}")
        out = [ZERO] * self.target.dim
        for (t, s), v in self.entries.items():
            if vector[s]:
                out[t] += v * vector[s]
        return out

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self o other``."""
        if other.target != self.source:
            raise InputError("composition of maps with mismatched spaces")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (m, s), v in other.entries.items():
            by_row.setdefault(m, []).append((s, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (t, m), v in self.entries.items():
            for s, w in by_row.get(m, ()):
                out[(t, s)] = out.get((t, s), ZERO) + v * w
        return LinearMap(other.source, self.target, self.degree + other.degree, out)

    def _check_same(self, other):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            if self.entries and other.entries:
                raise InputError("adding maps with different signatures")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check_same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, ZERO) + v
        deg = self.degree if self.entries else other.degree
        return LinearMap(self.source, self.target, deg, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LinearMap":
        c = to_scalar(c)
        return LinearMap(self.source, self.target, self.degree,
                         {k: c * v for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __hash__(self):
        return hash((self.source, self.target, self.degree, frozenset(self.entries.items())))


@dataclass(frozen=True)
class ChainComplex:
    """Finite graded space with a square-zero differential of degree +-1."""

    space: GradedSpace
    differential: LinearMap
    diff_degree: int = 1

    def __post_init__(self):
        d = self.differential
        if d.source != self.space or d.target != self.space:
            raise InputError("differential must be an endomorphism of the space")
        if self.diff_degree not in (1, -1):
            raise InputError("diff_degree must be +1 or -1")
        if d.entries and d.degree != self.diff_degree:
            raise InvariantError(f"differential has degree {d.degree}, expected {self.diff_degree}")
        if not d.compose(d).is_zero():
            raise InvariantError("differential does not square to zero")

    @classmethod
    def zero_differential(cls, space, diff_degree=1):
        return cls(space, LinearMap.zero(space, space, diff_degree), diff_degree)

    def shift(self, k: int) -> "ChainComplex":
        sp = self.space.shift(k)
        d = LinearMap(sp, sp, self.diff_degree, self.differential.entries)
        return ChainComplex(sp, d, self.diff_degree)


# ---------------------------------------------------------------- elimination

def _row_reduce(rows: list[dict[int, Fraction]], rhs: list[Fraction] | None = None):
    """Forward elimination in place, pivots taken column by column.

    Returns the list of (row index, pivot column).  Among the candidate rows
    for a column the one with the smallest index wins, so the result depends
    only on the input ordering.
    """
    n = len(rows)
    used = [False] * n
    pivots = []
    cols = sorted({c for r in rows for c in r})
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    for c in cols:
        cands = [i for i in col_rows.get(c, ()) if not used[i] and rows[i].get(c)]
        if not cands:
            continue
        p = min(cands)
        used[p] = True
        prow = rows[p]
        inv = 1 / prow[c]
        for k in list(prow):
            prow[k] *= inv
        if rhs is not None:
            rhs[p] *= inv
        pivots.append((p, c))
        for i in cands:
            if i == p:
                continue
            row = rows[i]
            f = row[c]
            for k, v in prow.items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    if k not in row:
                        col_rows.setdefault(k, set()).add(i)
                    row[k] = nv
                else:
                    row.pop(k, None)
            if rhs is not None:
                rhs[i] -= f * rhs[p]
    return pivots


def _rows_of(m: LinearMap) -> list[dict[int, Fraction]]:
    rows: list[dict[int, Fraction]] = [dict() for _ in range(m.target.dim)]
    for (t, s), v in m.entries.items():
        rows[t][s] = v
    return rows


def rank(m: LinearMap) -> int:
    return len(_row_reduce(_rows_of(m)))


def solve_linear(m: LinearMap, target_vector: Sequence) -> list[Fraction] | None:
    """Deterministic solution of ``m(v) = b`` or None when inconsistent.

    Free variables are set to zero; the pivot for each column is the first
    available row, columns scanned in basis order.
    """
    if len(target_vector) != m.target.dim:
        raise InputError(f"vector of length {len(target_vector)} for target of dim {m.target.dim}")
    rows = _rows_of(m)
    rhs = [to_scalar(x) for x in target_vector]
    pivots = _row_reduce(rows, rhs)
    pivot_rows = {p for p, _ in pivots}
    if any(rhs[i] != 0 for i in range(len(rows)) if i not in pivot_rows):
        return None
    x = [ZERO] * m.source.dim
    for p, c in sorted(pivots, key=lambda pc: -pc[1]):
        val = rhs[p]
        for k, v in rows[p].items():
            if k != c:
                val -= v * x[k]
        x[c] = val
    return x


def kernel_basis(m: LinearMap, columns: Sequence[int] | None = None) -> list[list[Fraction]]:
    """Basis of the kernel restricted to the given source columns."""
    cols = list(range(m.source.dim)) if columns is None else list(columns)
    colset = set(cols)
    rows: list[dict[int, Fraction]] = [dict() for _ in range(m.target.dim)]
    for (t, s), v in m.entries.items():
        if s in colset:
            rows[t][s] = v
    pivots = _row_reduce(rows)
    pivot_of = {c: p for p, c in pivots}
    basis = []
    for free in cols:
        if free in pivot_of:
            continue
        x = [ZERO] * m.source.dim
        x[free] = ONE
        for c in sorted(pivot_of, reverse=True):
            p = pivot_of[c]
            val = ZERO
            for k, v in rows[p].items():
                if k != c:
                    val -= v * x[k]
            x[c] = val
        basis.append(x)
    return basis


def homology(complex: ChainComplex, degree: int) -> tuple[int, list[list[Fraction]]]:
    """Betti number in ``degree`` and cycles spanning a complement of boundaries."""
    sp = complex.space
    d = complex.differential
    here = sp.indices_in_degree(degree)
    before = sp.indices_in_degree(degree - complex.diff_degree)
    cycles = kernel_basis(d, here)
    boundaries = [d.column(s) for s in before]
    # greedy extension: reduce boundaries first, then keep cycles that add rank
    rows: list[dict[int, Fraction]] = [dict(b) for b in boundaries if b]
    base_rank = len(_row_reduce([dict(r) for r in rows]))
    reps = []
    current = [dict(r) for r in rows]
    cur_rank = base_rank
    for z in cycles:
        zd = {i: v for i, v in enumerate(z) if v}
        trial = [dict(r) for r in current] + [zd]
        r = len(_row_reduce(trial))
        if r > cur_rank:
            current.append(zd)
            cur_rank = r
            reps.append(z)
    return cur_rank - base_rank, reps


def tensor_index(idx: Sequence[int], dim: int) -> int:
    out = 0
    for i in idx:
        out = out * dim + i
    return out


def koszul_tensor(f: LinearMap, g: LinearMap) -> LinearMap:
    """``f (x) g`` on the lexicographically ordered tensor bases."""
    src = f.source.tensor(g.source)
    tgt = f.target.tensor(g.target)
    gd = g.source.dim
    gt = g.target.dim
    out = {}
    for (t1, s1), v1 in f.entries.items():
        sign = -1 if (g.degree * f.source.degree(s1)) & 1 else 1
        for (t2, s2), v2 in g.entries.items():
            out[(t1 * gt + t2, s1 * gd + s2)] = sign * v1 * v2
    return LinearMap(src, tgt, f.degree + g.degree, out)
