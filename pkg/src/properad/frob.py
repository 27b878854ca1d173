"""The Frobenius properad of degree n.

For j, k > 0 the component Frob(j, k) is one-dimensional in each degree
(k - 1 + g) * n, g = 0, 1, 2, ...; composition is the canonical isomorphism
and adds genus by the loop count of the grafting graph.  Basis elements are
:class:`FrobBasisElement` values; generator-decorated graphs use the vertex
names ``mu`` (2,1), ``eta`` (0,1), ``delta`` (1,2) and ``eps`` (1,0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import graphcore as gc
from .exactalg import permutation_sign
from .graphcore import CompositionError, DirectedGraph, ResourceError

# name -> (inputs, outputs, degree in units of n)
GENERATORS = {
    "mu": (2, 1, 0),
    "eta": (0, 1, 0),
    "delta": (1, 2, 1),
    "eps": (1, 0, -1),
}
GENERATOR_ARITIES = {name: (a, b) for name, (a, b, _) in GENERATORS.items()}

MAX_REDUCE_VERTICES = 5


def frob_degree(j: int, k: int, g: int, n: int) -> int:
    if j <= 0 or k <= 0:
        raise ValueError("frob_degree is defined for j, k > 0; boundary components store their degree")
    return (k - 1) * n + g * n


def stated_degrees(j: int, k: int, n: int) -> list[int]:
    """Degrees in which the component is nonzero, boundary cases as tabulated."""
    if j == 0 and k == 0:
        return []
    if j == 0:
        return [i * n for i in range(k + 1)]
    if k == 0:
        return [-i * n for i in range(j, -1, -1)]
    raise ValueError("positive arity components are infinite; use frob_degree")


def basis_in_degree(j: int, k: int, degree: int, n: int) -> list["FrobBasisElement"]:
    """Basis of Frob(j, k) in one degree; empty or a single element."""
    if j <= 0 or k <= 0:
        raise ValueError("basis_in_degree is defined for j, k > 0")
    if n == 0:
        raise ValueError("n = 0 puts every genus in degree 0; the component is not finite there")
    g, rem = divmod(degree - (k - 1) * n, n)
    if rem or g < 0:
        return []
    return [FrobBasisElement(j, k, g, n)]


@dataclass(frozen=True, order=True)
class FrobBasisElement:
    j: int
    k: int
    g: int
    n: int
    degree: int = field(default=None, compare=False)

    def __post_init__(self):
        if self.j < 0 or self.k < 0 or self.g < 0:
            raise ValueError(f"negative arity or genus in {(self.j, self.k, self.g)}")
        if self.j == 0 and self.k == 0:
            raise CompositionError("Frob(0,0) is not part of the properad")
        deg = (self.k - 1 + self.g) * self.n
        if self.degree is None:
            object.__setattr__(self, "degree", deg)
        elif self.degree != deg:
            raise ValueError(f"degree {self.degree} inconsistent with genus {self.g}")

    @property
    def is_boundary(self) -> bool:
        return self.j == 0 or self.k == 0

    @property
    def in_stated_range(self) -> bool:
        if not self.is_boundary:
            return True
        return self.degree in stated_degrees(self.j, self.k, self.n)

    def __str__(self):
        return f"({self.j},{self.k},g={self.g},deg={self.degree})"


def identity(n: int) -> FrobBasisElement:
    return FrobBasisElement(1, 1, 0, n)


def generator_element(name: str, n: int) -> FrobBasisElement:
    a, b, _ = GENERATORS[name]
    return FrobBasisElement(a, b, 0, n)


def frob_partial(upper: FrobBasisElement, lower: FrobBasisElement, m: int) -> FrobBasisElement:
    """Compose along ``m`` edges from outputs of ``upper`` into inputs of ``lower``."""
    if upper.n != lower.n:
        raise CompositionError("elements of different degree parameters")
    if not (1 <= m <= min(upper.k, lower.j)):
        raise CompositionError(f"cannot join {m} edges from {upper} into {lower}")
    return FrobBasisElement(upper.j + lower.j - m, upper.k + lower.k - m,
                            upper.g + lower.g + m - 1, upper.n)


def frob_compose(uppers: Sequence[FrobBasisElement], lower: FrobBasisElement) -> FrobBasisElement:
    """Graft every output of the uppers into the inputs of ``lower``."""
    if not uppers:
        raise CompositionError("need at least one upper element")
    ks = sum(u.k for u in uppers)
    if ks != lower.j:
        raise CompositionError(f"uppers have {ks} outputs, lower has {lower.j} inputs")
    if any(u.n != lower.n for u in uppers):
        raise CompositionError("elements of different degree parameters")
    r = len(uppers)
    return FrobBasisElement(sum(u.j for u in uppers), lower.k,
                            sum(u.g for u in uppers) + lower.g + ks - r, lower.n)


def frob_sym_sign(x: FrobBasisElement, sigma: Sequence[int], tau: Sequence[int]) -> int:
    """Character by which (sigma, tau) acts on the basis element.

    Inputs act trivially.  Outputs pick up the sign of tau for odd n, the
    graded co-commutativity of a degree-n coproduct.
    """
    if len(sigma) != x.j or len(tau) != x.k:
        raise ValueError("permutation sizes do not match arities")
    if x.n % 2 == 0:
        return 1
    return permutation_sign(tau)


# ---------------------------------------------------------- normal forms

def decorate(g: DirectedGraph, n: int) -> DirectedGraph:
    """Replace generator names by basis elements."""
    verts = []
    for dec, a, b in g.vertices:
        if isinstance(dec, FrobBasisElement):
            el = dec
        else:
            if dec not in GENERATORS:
                raise gc.GraphError(f"unknown generator {dec!r}")
            el = generator_element(dec, n)
        if (el.j, el.k) != (a, b):
            raise gc.GraphError(f"vertex {dec} declared with arity ({a},{b}), expected ({el.j},{el.k})")
        verts.append((el, a, b))
    return DirectedGraph(tuple(verts), g.edges, g.input_legs, g.output_legs)


def _pair_compose(g: DirectedGraph, a: int, b: int) -> FrobBasisElement:
    m = g.adjacency()[(a, b)]
    return frob_partial(g.vertices[a][0], g.vertices[b][0], m)


def reduce_to_normal_form(g: DirectedGraph, n: int) -> FrobBasisElement:
    """Evaluate a generator-decorated graph in Frob.

    Contracts the lexicographically first admissible vertex pair until one
    vertex remains.  Closed graphs (no legs) raise CompositionError.
    """
    if g.n_inputs == 0 and g.n_outputs == 0:
        raise CompositionError("closed graph: Frob(0,0) is not part of the properad")
    h = decorate(g, n)
    while h.n_vertices > 1:
        a, b = gc.contractible_pairs(h)[0]
        h = gc.contract(h, a, b, _pair_compose(h, a, b))
    return h.vertices[0][0]


def all_reduction_results(g: DirectedGraph, n: int) -> set[FrobBasisElement]:
    """Normal forms reached by every possible contraction order."""
    if g.n_inputs == 0 and g.n_outputs == 0:
        raise CompositionError("closed graph: Frob(0,0) is not part of the properad")
    memo: dict[str, frozenset] = {}

    def walk(h: DirectedGraph) -> frozenset:
        if h.n_vertices == 1:
            return frozenset([h.vertices[0][0]])
        key = gc.canonical_form(h).serialize()
        if key in memo:
            return memo[key]
        out = set()
        for a, b in gc.contractible_pairs(h):
            out |= walk(gc.contract(h, a, b, _pair_compose(h, a, b)))
        memo[key] = frozenset(out)
        return memo[key]

    return set(walk(decorate(g, n)))


# ---------------------------------------------------- multigraph shapes

@dataclass(frozen=True)
class Shape:
    """Port-free view of a decorated graph: decorations plus edge multiplicities.

    Symmetric decorations make port positions irrelevant for evaluation in
    Frob, so exhaustive audits run on shapes.
    """

    labels: tuple  # (j, k, g) per vertex
    edges: tuple  # sorted ((u, v), m) with m > 0

    def n_inputs(self) -> int:
        inc = [0] * len(self.labels)
        for (_, v), m in self.edges:
            inc[v] += m
        return sum(lab[0] - inc[i] for i, lab in enumerate(self.labels))

    def n_outputs(self) -> int:
        out = [0] * len(self.labels)
        for (u, _), m in self.edges:
            out[u] += m
        return sum(lab[1] - out[i] for i, lab in enumerate(self.labels))

    def genus(self) -> int:
        return sum(m for _, m in self.edges) - len(self.labels) + 1


def _shape_key(labels, edges):
    nv = len(labels)
    best = None
    for perm in itertools.permutations(range(nv)):
        lab = [None] * nv
        for v in range(nv):
            lab[perm[v]] = labels[v]
        e = tuple(sorted(((perm[u], perm[v]), m) for (u, v), m in edges))
        key = (tuple(lab), e)
        if best is None or key < best:
            best = key
    return best


def canonical_shape(s: Shape) -> Shape:
    labels, edges = _shape_key(s.labels, s.edges)
    return Shape(labels, edges)


def _shape_has_other_path(edges, a, b):
    succ: dict[int, set[int]] = {}
    for (u, v), _ in edges:
        succ.setdefault(u, set()).add(v)
    stack = [w for w in succ.get(a, ()) if w != b]
    seen = set(stack)
    while stack:
        v = stack.pop()
        if v == b:
            return True
        for w in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def shape_contract(s: Shape, a: int, b: int) -> Shape:
    mult = dict(s.edges)
    m = mult[(a, b)]
    ja, ka, ga = s.labels[a]
    jb, kb, gb = s.labels[b]
    merged = (ja + jb - m, ka + kb - m, ga + gb + m - 1)
    keep = [v for v in range(len(s.labels)) if v not in (a, b)]
    index = {v: i + 1 for i, v in enumerate(keep)}
    index[a] = index[b] = 0
    labels = (merged,) + tuple(s.labels[v] for v in keep)
    new: dict[tuple[int, int], int] = {}
    for (u, v), mm in s.edges:
        if (u, v) == (a, b):
            continue
        key = (index[u], index[v])
        new[key] = new.get(key, 0) + mm
    return Shape(labels, tuple(sorted(new.items())))


def shape_reductions(s: Shape) -> frozenset:
    """Set of (j, k, g) reached over all contraction orders."""
    return _shape_reductions(canonical_shape(s))


@lru_cache(maxsize=None)
def _shape_reductions(s: Shape) -> frozenset:
    if len(s.labels) == 1:
        return frozenset([s.labels[0]])
    out = set()
    for (a, b), _ in s.edges:
        if _shape_has_other_path(s.edges, a, b):
            continue
        out |= _shape_reductions(canonical_shape(shape_contract(s, a, b)))
    return frozenset(out)


def _acyclic(nv, edges) -> bool:
    indeg = [0] * nv
    succ: list[list[int]] = [[] for _ in range(nv)]
    for (u, v), _ in edges:
        succ[u].append(v)
        indeg[v] += 1
    ready = [v for v in range(nv) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == nv


def generator_shapes(max_vertices: int) -> list[Shape]:
    """Every connected acyclic generator-decorated shape with up to max_vertices vertices."""
    if max_vertices > MAX_REDUCE_VERTICES:
        raise ResourceError(f"max_vertices={max_vertices} exceeds the bound {MAX_REDUCE_VERTICES}")
    gens = sorted((a, b, 0) for a, b, _ in GENERATORS.values())
    found = set()
    for nv in range(1, max_vertices + 1):
        for labels in itertools.combinations_with_replacement(gens, nv):
            pairs = [(u, v) for u in range(nv) for v in range(nv) if u != v]
            out_cap = [lab[1] for lab in labels]
            in_cap = [lab[0] for lab in labels]

            def rec(i, edges):
                if i == len(pairs):
                    if nv > 1 and not gc._connected(nv, [p for p, _ in edges]):
                        return
                    if not _acyclic(nv, edges):
                        return
                    found.add(Shape(*_shape_key(labels, tuple(edges))))
                    return
                u, v = pairs[i]
                rec(i + 1, edges)
                for m in range(1, min(out_cap[u], in_cap[v]) + 1):
                    out_cap[u] -= m
                    in_cap[v] -= m
                    rec(i + 1, edges + [((u, v), m)])
                    out_cap[u] += m
                    in_cap[v] += m

            rec(0, [])
    return sorted(found, key=lambda s: (len(s.labels), s.labels, s.edges))


def shape_to_graph(s: Shape, names: dict | None = None) -> DirectedGraph:
    """A port-level realization of a shape (ports filled in vertex order)."""
    names = names or {(a, b, 0): name for name, (a, b, _) in GENERATORS.items()}
    next_in = [0] * len(s.labels)
    next_out = [0] * len(s.labels)
    edges = []
    for (u, v), m in s.edges:
        for _ in range(m):
            edges.append(((u, next_out[u]), (v, next_in[v])))
            next_out[u] += 1
            next_in[v] += 1
    ins = [(v, p) for v, lab in enumerate(s.labels) for p in range(next_in[v], lab[0])]
    outs = [(v, p) for v, lab in enumerate(s.labels) for p in range(next_out[v], lab[1])]
    verts = tuple((names.get(lab, lab), lab[0], lab[1]) for lab in s.labels)
    return DirectedGraph(verts, tuple(edges), tuple(ins), tuple(outs))


# --------------------------------------------------------- presentation

def _attach_below(g: DirectedGraph, leg: int, gen: str) -> DirectedGraph:
    """Feed output leg ``leg`` into in-port 0 of a new generator vertex."""
    a, b, _ = GENERATORS[gen]
    v = g.n_vertices
    verts = g.vertices + ((gen, a, b),)
    edges = g.edges + ((g.output_legs[leg], (v, 0)),)
    ins = g.input_legs + tuple((v, p) for p in range(1, a))
    outs = g.output_legs[:leg] + tuple((v, p) for p in range(b)) + g.output_legs[leg + 1:]
    return DirectedGraph(verts, edges, ins, outs)


def _attach_above(g: DirectedGraph, leg: int, gen: str) -> DirectedGraph:
    """Feed input leg ``leg`` from out-port 0 of a new generator vertex."""
    a, b, _ = GENERATORS[gen]
    v = g.n_vertices
    verts = g.vertices + ((gen, a, b),)
    edges = g.edges + (((v, 0), g.input_legs[leg]),)
    ins = g.input_legs[:leg] + tuple((v, p) for p in range(a)) + g.input_legs[leg + 1:]
    outs = g.output_legs + tuple((v, p) for p in range(1, b))
    return DirectedGraph(verts, edges, ins, outs)


def relation_instances() -> list[tuple[str, DirectedGraph, object]]:
    """(name, lhs, rhs) for each defining relation; rhs is a graph or ``"id"``."""
    G = DirectedGraph
    mu_mu_left = G((("mu", 2, 1), ("mu", 2, 1)), (((0, 0), (1, 0)),), ((0, 0), (0, 1), (1, 1)), ((1, 0),))
    mu_mu_right = G((("mu", 2, 1), ("mu", 2, 1)), (((0, 0), (1, 1)),), ((1, 0), (0, 0), (0, 1)), ((1, 0),))
    mu = gc.corolla("mu", 2, 1)
    mu_swapped = mu.permute_legs(sigma=(1, 0))
    d_d_left = G((("delta", 1, 2), ("delta", 1, 2)), (((0, 0), (1, 0)),), ((0, 0),), ((1, 0), (1, 1), (0, 1)))
    d_d_right = G((("delta", 1, 2), ("delta", 1, 2)), (((0, 1), (1, 0)),), ((0, 0),), ((0, 0), (1, 0), (1, 1)))
    delta = gc.corolla("delta", 1, 2)
    delta_swapped = delta.permute_legs(tau=(1, 0))
    unit_left = G((("eta", 0, 1), ("mu", 2, 1)), (((0, 0), (1, 0)),), ((1, 1),), ((1, 0),))
    unit_right = G((("eta", 0, 1), ("mu", 2, 1)), (((0, 0), (1, 1)),), ((1, 0),), ((1, 0),))
    counit_left = G((("delta", 1, 2), ("eps", 1, 0)), (((0, 0), (1, 0)),), ((0, 0),), ((0, 1),))
    counit_right = G((("delta", 1, 2), ("eps", 1, 0)), (((0, 1), (1, 0)),), ((0, 0),), ((0, 0),))
    frob_mid = G((("mu", 2, 1), ("delta", 1, 2)), (((0, 0), (1, 0)),), ((0, 0), (0, 1)), ((1, 0), (1, 1)))
    # (mu (x) 1) o (1 (x) delta) and (1 (x) mu) o (delta (x) 1)
    frob_left = G((("delta", 1, 2), ("mu", 2, 1)), (((0, 0), (1, 1)),), ((1, 0), (0, 0)), ((1, 0), (0, 1)))
    frob_right = G((("delta", 1, 2), ("mu", 2, 1)), (((0, 1), (1, 0)),), ((0, 0), (1, 1)), ((0, 0), (1, 0)))
    return [
        ("associativity", mu_mu_left, mu_mu_right),
        ("commutativity", mu, mu_swapped),
        ("left unit", unit_left, "id"),
        ("right unit", unit_right, "id"),
        ("coassociativity", d_d_left, d_d_right),
        ("cocommutativity", delta, delta_swapped),
        ("left counit", counit_left, "id"),
        ("right counit", counit_right, "id"),
        ("frobenius left", frob_mid, frob_left),
        ("frobenius right", frob_mid, frob_right),
    ]


@dataclass
class PresentationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _contexts(lhs, rhs, budget):
    """Yield (lhs, rhs) with identical generator contexts attached to the legs."""
    yield lhs, rhs
    if budget <= 0:
        return
    frontier = [(lhs, rhs)]
    for _ in range(budget):
        nxt = []
        for left, right in frontier:
            for leg in range(left.n_outputs):
                for gen in GENERATORS:
                    if GENERATORS[gen][0] >= 1:
                        nxt.append((_attach_below(left, leg, gen), _attach_below(right, leg, gen)))
            for leg in range(left.n_inputs):
                for gen in GENERATORS:
                    if GENERATORS[gen][1] >= 1:
                        nxt.append((_attach_above(left, leg, gen), _attach_above(right, leg, gen)))
        for pair in nxt:
            yield pair
        frontier = nxt


def verify_presentation(max_vertices: int = 4, n: int = 2) -> PresentationReport:
    """Check that both sides of every relation instance agree in Frob."""
    if max_vertices > MAX_REDUCE_VERTICES:
        raise ResourceError(f"max_vertices={max_vertices} exceeds the bound {MAX_REDUCE_VERTICES}")
    report = PresentationReport()
    for name, lhs, rhs in relation_instances():
        if rhs == "id":
            # unit laws: the graph must act as the identity wherever it is inserted
            if lhs.n_vertices > max_vertices:
                continue
            got = reduce_to_normal_form(lhs, n)
            report.checked += 1
            if got != identity(n):
                report.failures.append((name, lhs.serialize(), str(got), str(identity(n))))
            continue
        budget = max_vertices - max(lhs.n_vertices, rhs.n_vertices)
        if budget < 0:
            continue
        for left, right in _contexts(lhs, rhs, budget):
            if left.n_inputs == 0 and left.n_outputs == 0:
                continue
            a = reduce_to_normal_form(left, n)
            b = reduce_to_normal_form(right, n)
            report.checked += 1
            if a != b:
                report.failures.append((name, left.serialize(), str(a), str(b)))
    return report


@dataclass
class ConfluenceReport:
    shapes: int = 0
    closed_skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def confluence_audit(max_vertices: int = 5) -> ConfluenceReport:
    """Every reduction order of every generator shape yields one normal form.

    The unique normal form must also carry the loop genus of the shape.
    """
    report = ConfluenceReport()
    for s in generator_shapes(max_vertices):
        if s.n_inputs() == 0 and s.n_outputs() == 0:
            report.closed_skipped += 1
            continue
        report.shapes += 1
        results = shape_reductions(s)
        expected = (s.n_inputs(), s.n_outputs(), s.genus())
        if results != {expected}:
            report.failures.append((s, sorted(results), expected))
    return report
