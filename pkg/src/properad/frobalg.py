"""Finite-dimensional graded commutative Frobenius algebras.

These stand in for the cohomology ring of a closed oriented n-manifold.
The algebra is given by structure constants, a degree-zero unit and a
pairing of degree -n; the coproduct is recovered from the pairing.

Pairing on a tensor square::

    <<x (x) y, b (x) c>> = (-1)**(|y|*|b|) <x, b> <y, c>
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Mapping

from . import frob
from . import graphcore as gc
from .endprop import MultiMap, evaluate_graph, tensor_tuples
from .exactalg import (ZERO, GradedSpace, InputError, InvariantError, LinearMap,
                       rank, solve_linear, to_scalar)

SHIPPED_ALGEBRAS = ("pt", "s2", "s3", "t2", "cp2")


class StructureError(InvariantError):
    """The algebra data violates a Frobenius algebra axiom."""


def _sgn(p: int) -> int:
    return -1 if p & 1 else 1


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebraData:
    space: GradedSpace
    n: int
    mult: Mapping[tuple[int, int], Mapping[int, Fraction]]  # (a, b) -> {c: coefficient}
    unit: int
    pairing: Mapping[tuple[int, int], Fraction]
    name: str = "algebra"
    _checked: bool = field(default=False, repr=False)

    def __post_init__(self):
        mult = {}
        for key, row in self.mult.items():
            clean = {c: to_scalar(v) for c, v in row.items() if to_scalar(v)}
            if clean:
                mult[tuple(key)] = clean
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "pairing",
                           {tuple(k): to_scalar(v) for k, v in self.pairing.items() if to_scalar(v)})
        self.validate()

    # ------------------------------------------------------------ basics
    @property
    def dim(self) -> int:
        return self.space.dim

    def deg(self, i: int) -> int:
        return self.space.degree(i)

    def product(self, a: int, b: int) -> dict[int, Fraction]:
        return self.mult.get((a, b), {})

    def pair(self, a: int, b: int) -> Fraction:
        return self.pairing.get((a, b), ZERO)

    def multiply_vectors(self, x, y) -> list[Fraction]:
        out = [ZERO] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for c, v in self.product(a, b).items():
                    out[c] += xa * yb * v
        return out

    def validate(self):
        d = self.dim
        deg = self.space.degrees
        if not 0 <= self.unit < d or deg[self.unit] != 0:
            raise StructureError("unit must be a degree-0 basis element")
        for (a, b), row in self.mult.items():
            for c in row:
                if deg[c] != deg[a] + deg[b]:
                    raise StructureError(f"product {a}*{b} -> {c} is not degree 0")
        for (a, b), v in self.pairing.items():
            if deg[a] + deg[b] != self.n:
                raise StructureError(f"pairing <{a},{b}> does not have degree -n")
        for a in range(d):
            e = [ZERO] * d
            e[a] = Fraction(1)
            u = [ZERO] * d
            u[self.unit] = Fraction(1)
            if self.multiply_vectors(u, e) != e or self.multiply_vectors(e, u) != e:
                raise StructureError(f"unit is not two-sided on basis element {a}")
        for a, b in itertools.product(range(d), repeat=2):
            s = _sgn(deg[a] * deg[b])
            ab = self.product(a, b)
            ba = self.product(b, a)
            for c in set(ab) | set(ba):
                if ab.get(c, ZERO) != s * ba.get(c, ZERO):
                    raise StructureError(f"not graded-commutative on ({a},{b})")
        for a, b, c in itertools.product(range(d), repeat=3):
            e = lambda i: [Fraction(int(t == i)) for t in range(d)]
            left = self.multiply_vectors(self.multiply_vectors(e(a), e(b)), e(c))
            right = self.multiply_vectors(e(a), self.multiply_vectors(e(b), e(c)))
            if left != right:
                raise StructureError(f"not associative on ({a},{b},{c})")
        P = self.pairing_matrix()
        if rank(P) != d:
            raise StructureError("pairing is degenerate")
        for a, b, c in itertools.product(range(d), repeat=3):
            lhs = sum((v * self.pair(x, c) for x, v in self.product(a, b).items()), ZERO)
            rhs = sum((v * self.pair(a, x) for x, v in self.product(b, c).items()), ZERO)
            if lhs != rhs:
                raise StructureError(f"pairing not invariant on ({a},{b},{c})")

    def pairing_matrix(self) -> LinearMap:
        sp = GradedSpace.from_degrees([0] * self.dim)
        return LinearMap(sp, sp, 0, dict(self.pairing))

    # ---------------------------------------------------------- operations
    @cached_property
    def mult_map(self) -> MultiMap:
        ent = {}
        for (a, b), row in self.mult.items():
            for c, v in row.items():
                ent[((c,), (a, b))] = v
        return MultiMap.from_tuples(self.space, 2, 1, 0, ent)

    @cached_property
    def unit_map(self) -> MultiMap:
        return MultiMap.from_tuples(self.space, 0, 1, 0, {((self.unit,), ()): Fraction(1)})

    @cached_property
    def counit_map(self) -> MultiMap:
        """Capping with the fundamental class: x -> <1, x>."""
        ent = {((), (a,)): self.pair(self.unit, a) for a in range(self.dim) if self.pair(self.unit, a)}
        return MultiMap.from_tuples(self.space, 1, 0, -self.n, ent)

    @cached_property
    def coproduct(self) -> MultiMap:
        return coproduct_from_pairing(self)

    def generator_map(self, name: str) -> MultiMap:
        return {"mu": self.mult_map, "eta": self.unit_map,
                "delta": self.coproduct, "eps": self.counit_map}[name]

    def top_coefficient(self, vector) -> Fraction:
        """Coefficient extracted by the counit (pairing with the unit)."""
        return sum((self.pair(self.unit, a) * x for a, x in enumerate(vector) if x), ZERO)

    def euler_characteristic(self) -> int:
        return sum(_sgn(d) for d in self.space.degrees)


def coproduct_from_pairing(A: FrobeniusAlgebraData) -> MultiMap:
    """The (1,2) map determined by <<Delta(a), b (x) c>> = <a, b*c>."""
    d = A.dim
    deg = A.space.degrees
    pairs = list(itertools.product(range(d), repeat=2))
    # M[(b,c),(p,q)] = <<e_p (x) e_q, e_b (x) e_c>>
    entries = {}
    for r, (b, c) in enumerate(pairs):
        for col, (p, q) in enumerate(pairs):
            v = A.pair(p, b) * A.pair(q, c)
            if v:
                entries[(r, col)] = _sgn(deg[q] * deg[b]) * v
    flat = GradedSpace.from_degrees([0] * len(pairs))
    M = LinearMap(flat, flat, 0, entries)
    ent = {}
    for a in range(d):
        rhs = []
        for b, c in pairs:
            rhs.append(sum((v * A.pair(a, x) for x, v in A.product(b, c).items()), ZERO))
        sol = solve_linear(M, rhs)
        if sol is None:
            raise StructureError("pairing is degenerate")
        for col, v in enumerate(sol):
            if v:
                ent[(pairs[col], (a,))] = v
    return MultiMap.from_tuples(A.space, 1, 2, A.n, ent)


def check_pairing_duality(A: FrobeniusAlgebraData) -> bool:
    delta = A.coproduct.tuples()
    deg = A.space.degrees
    for a, b, c in itertools.product(range(A.dim), repeat=3):
        lhs = ZERO
        for ((x, y), (src,)), v in delta.items():
            if src == a:
                lhs += v * _sgn(deg[y] * deg[b]) * A.pair(x, b) * A.pair(y, c)
        rhs = sum((v * A.pair(a, x) for x, v in A.product(b, c).items()), ZERO)
        if lhs != rhs:
            return False
    return True


# -------------------------------------------------------- genus operations

def canonical_realization(j: int, k: int, g: int) -> gc.DirectedGraph:
    """Generator graph for (j, k, g): multiply all inputs, g handles, then split.

    Left-bracketed products, then g copies of mu o delta, then left-branching
    coproducts.
    """
    if j <= 0 or k <= 0:
        raise ValueError("canonical realizations exist for j, k > 0")
    verts = []
    edges = []
    ins = []
    # product chain
    cur = None  # out-port carrying the running value
    if j == 1:
        pending_in = True
    else:
        pending_in = False
        verts.append(("mu", 2, 1))
        ins += [(0, 0), (0, 1)]
        cur = (0, 0)
        for _ in range(j - 2):
            v = len(verts)
            verts.append(("mu", 2, 1))
            edges.append((cur, (v, 0)))
            ins.append((v, 1))
            cur = (v, 0)

    def feed(v, port):
        nonlocal cur, pending_in
        if pending_in:
            ins.append((v, port))
            pending_in = False
        else:
            edges.append((cur, (v, port)))

    for _ in range(g):
        dv = len(verts)
        verts.append(("delta", 1, 2))
        feed(dv, 0)
        mv = len(verts)
        verts.append(("mu", 2, 1))
        edges.append(((dv, 0), (mv, 0)))
        edges.append(((dv, 1), (mv, 1)))
        cur = (mv, 0)
    outs = []
    if k == 1:
        if pending_in:
            raise ValueError("(1,1,0) is the properadic unit, not a generator graph")
        outs.append(cur)
    else:
        dv = len(verts)
        verts.append(("delta", 1, 2))
        feed(dv, 0)
        tail = [(dv, 1)]
        cur = (dv, 0)
        for _ in range(k - 2):
            v = len(verts)
            verts.append(("delta", 1, 2))
            edges.append((cur, (v, 0)))
            tail.insert(0, (v, 1))
            cur = (v, 0)
        outs = [cur] + tail
    return gc.DirectedGraph(tuple(verts), tuple(edges), tuple(ins), tuple(outs))


def evaluate_generator_graph(g: gc.DirectedGraph, images: Mapping[str, MultiMap], space) -> MultiMap:
    return evaluate_graph(g, [images[d] for d, _, _ in g.vertices], space)


def genus_operation(A: FrobeniusAlgebraData, j: int, k: int, g: int) -> MultiMap:
    if j == 1 and k == 1 and g == 0:
        return MultiMap.identity(A.space)
    graph = canonical_realization(j, k, g)
    return evaluate_generator_graph(graph, {n: A.generator_map(n) for n in frob.GENERATORS}, A.space)


def realizing_graphs(j: int, k: int, g: int, max_vertices: int = 5) -> list[gc.DirectedGraph]:
    """Generator graphs (mu and delta only) with up to max_vertices vertices realizing (j,k,g)."""
    out = []
    for s in frob.generator_shapes(max_vertices):
        if any(lab not in {(2, 1, 0), (1, 2, 0)} for lab in s.labels):
            continue
        if (s.n_inputs(), s.n_outputs(), s.genus()) == (j, k, g):
            out.append(frob.shape_to_graph(s))
    return out


def realization_variants(g: gc.DirectedGraph):
    """All leg orderings of ``g`` (operations are symmetric, so all must agree)."""
    for sigma in itertools.permutations(range(g.n_inputs)):
        for tau in itertools.permutations(range(g.n_outputs)):
            yield sigma, tau, g.permute_legs(sigma, tau)


def euler_check(A: FrobeniusAlgebraData) -> int:
    """Top-class coefficient of the genus-one (1,1) operation on the unit.

    Raises StructureError unless it equals the alternating sum of the
    graded dimensions.
    """
    handle = genus_operation(A, 1, 1, 1)
    image = [ZERO] * A.dim
    for ((c,), (a,)), v in handle.tuples().items():
        if a == A.unit:
            image[c] += v
    # the handle operator is multiplication by this element
    top = A.top_coefficient(image)
    chi = A.euler_characteristic()
    if top != chi:
        raise StructureError(f"genus-one operation gives {top}, Euler characteristic is {chi}")
    return chi


# ------------------------------------------------------------- duality

def dualize(A: FrobeniusAlgebraData) -> FrobeniusAlgebraData:
    """Frobenius structure on the dual space.

    Basis: dual basis e_a^* placed in degree n - |e_a|.  The product is the
    transpose of the coproduct, the pairing the inverse of the pairing, the
    unit the counit.
    """
    d = A.dim
    n = A.n
    deg = A.space.degrees
    space = GradedSpace(tuple((f"{name}*", n - dg) for name, dg in A.space.basis))
    delta = A.coproduct.tuples()
    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    for ((p, q), (a,)), v in delta.items():
        # (e_p^* . e_q^*)(e_a) = <e_p^* (x) e_q^*, Delta e_a>, shifted back to degree zero
        mult.setdefault((p, q), {})
        mult[(p, q)][a] = mult[(p, q)].get(a, ZERO) + v * _sgn(deg[q] * (n + deg[p]))
    # inverse transpose, so that the duality map is an isometry
    pairing = {(b, a): v for (a, b), v in _inverse(A.pairing_matrix()).items()}
    # unit of the dual is the counit: e^* with <1, e> != 0
    unit_vec = [A.pair(A.unit, a) for a in range(d)]
    nz = [a for a, v in enumerate(unit_vec) if v]
    if len(nz) != 1 or unit_vec[nz[0]] != 1:
        raise StructureError("dual unit is not a basis element; rescale the pairing")
    return FrobeniusAlgebraData(space, n, mult, nz[0], pairing, name=f"{A.name}*")


def duality_check(A: FrobeniusAlgebraData, max_arity: int = 4, max_genus: int = 2) -> list[tuple[int, int, int]]:
    """Components (j, k, g) where the duality map fails to intertwine; empty on success."""
    D = dualize(A)
    D.validate()
    theta = duality_map(A)
    bad = []
    for j in range(1, max_arity):
        for k in range(1, max_arity - j + 1):
            for g in range(max_genus + 1):
                if transport(genus_operation(A, j, k, g), theta, D.space) != genus_operation(D, j, k, g):
                    bad.append((j, k, g))
    return bad


def _inverse(P: LinearMap) -> dict[tuple[int, int], Fraction]:
    d = P.source.dim
    out = {}
    for col in range(d):
        e = [Fraction(int(i == col)) for i in range(d)]
        sol = solve_linear(P, e)
        if sol is None:
            raise StructureError("pairing is degenerate")
        for row, v in enumerate(sol):
            if v:
                out[(row, col)] = v
    return out


def duality_map(A: FrobeniusAlgebraData) -> LinearMap:
    """Poincare duality iso A -> A*: e_a -> <e_a, ->, degree preserving after the shift."""
    dual = GradedSpace(tuple((f"{name}*", A.n - dg) for name, dg in A.space.basis))
    # <e_a, -> = sum_b <e_a, e_b> e_b^*, which lives in degree n - |e_b| = |e_a|
    return LinearMap(A.space, dual, 0, {(b, a): v for (a, b), v in A.pairing.items()})


def transport(f: MultiMap, theta: LinearMap, target_space: GradedSpace) -> MultiMap:
    """theta^(x)k o f o (theta^-1)^(x)j for a degree-0 iso theta."""
    d = f.space.dim
    inv = _inverse(theta)  # (row, col) of theta^{-1}
    th = {}
    for (t, s), v in theta.entries.items():
        th.setdefault(s, []).append((t, v))
    thinv = {}
    for (t, s), v in inv.items():
        thinv.setdefault(s, []).append((t, v))
    res: dict = {}
    by_in: dict = {}
    for (o, i), v in f.tuples().items():
        by_in.setdefault(i, []).append((o, v))
    for y in tensor_tuples(d, f.j):
        acc = {(): Fraction(1)}
        for b in y:
            nxt = {}
            for word, c in acc.items():
                for a, w in thinv.get(b, ()):
                    nxt[word + (a,)] = nxt.get(word + (a,), ZERO) + c * w
            acc = nxt
        for x, c in acc.items():
            for o, v in by_in.get(x, ()):
                acc2 = {(): c * v}
                for a in o:
                    nxt = {}
                    for word, cc in acc2.items():
                        for t, w in th.get(a, ()):
                            nxt[word + (t,)] = nxt.get(word + (t,), ZERO) + cc * w
                    acc2 = nxt
                for word, cc in acc2.items():
                    res[(word, y)] = res.get((word, y), ZERO) + cc
    return MultiMap.from_tuples(target_space, f.j, f.k, f.degree, res)


# ------------------------------------------------------------ file format

def parse_algebra(text: str, name: str = "algebra") -> FrobeniusAlgebraData:
    """Parse the line-oriented algebra format.

    ::

        n 2
        basis 1:0 v:2
        unit 1
        mult 1 v v 1        # e_1 * e_v = 1 e_v
        pair 1 v 1
    """
    n = None
    basis = None
    unit = None
    mult_lines = []
    pair_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "n":
            n = int(rest[0])
        elif head == "name":
            name = rest[0]
        elif head == "basis":
            basis = []
            for tok in rest:
                nm, dg = tok.rsplit(":", 1)
                basis.append((nm, int(dg)))
        elif head == "unit":
            unit = rest[0]
        elif head == "mult":
            if len(rest) != 4:
                raise InputError(f"mult needs 'a b c coefficient': {line!r}")
            mult_lines.append(rest)
        elif head == "pair":
            if len(rest) != 3:
                raise InputError(f"pair needs 'a b coefficient': {line!r}")
            pair_lines.append(rest)
        else:
            raise InputError(f"unknown record {head!r}")
    if n is None or basis is None or unit is None:
        raise InputError("algebra file needs n, basis and unit records")
    space = GradedSpace(tuple(basis))
    mult: dict = {}
    for a, b, c, v in mult_lines:
        key = (space.index(a), space.index(b))
        mult.setdefault(key, {})
        mult[key][space.index(c)] = mult[key].get(space.index(c), ZERO) + to_scalar(v)
    pairing = {(space.index(a), space.index(b)): to_scalar(v) for a, b, v in pair_lines}
    return FrobeniusAlgebraData(space, n, mult, space.index(unit), pairing, name=name)


def load_algebra(name_or_path: str) -> FrobeniusAlgebraData:
    """Load a shipped algebra by name (``s2``, ``t2`` ...) or a file path."""
    if name_or_path in SHIPPED_ALGEBRAS:
        text = resources.files("properad.data").joinpath(f"{name_or_path}.alg").read_text()
        return parse_algebra(text, name=name_or_path)
    with open(name_or_path) as fh:
        return parse_algebra(fh.read(), name=name_or_path)
