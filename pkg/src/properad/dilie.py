"""Lie di-algebras with module compatibility.

Covers semisimple Lie algebras with the cobracket obtained by transposing the
bracket through the Killing form, the relation checks, the tree components
of the diLie dioperad, and the structure on A (x) g for a Frobenius algebra A.

The relations are written once, as small decorated graphs, and used both to
present the dioperad and to test concrete data by evaluation in End(V).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from importlib import resources
from typing import Mapping, Sequence

from .endprop import MultiMap, evaluate_graph, sym_act
from .exactalg import (ZERO, GradedSpace, InputError, InvariantError, LinearMap, permutation_sign,
                       rank, solve_linear, to_scalar)
from .frobalg import FrobeniusAlgebraData
from .graphcore import DirectedGraph, ResourceError, enumerate_graphs
from .obstruct import run_resolution, target_from_algebra

SHIPPED_LIE = ("sl2", "so3", "heisenberg3")
MAX_HADAMARD_ARITY = 5

BRACKET = "br"
COBRACKET = "co"
ARITIES = {BRACKET: (2, 1), COBRACKET: (1, 2)}


class NotSemisimpleError(InvariantError):
    """The Killing form is degenerate."""


# ------------------------------------------------------------- Lie algebras

@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    names: tuple[str, ...]
    constants: Mapping[tuple[int, int], Mapping[int, Fraction]]  # [e_i, e_j] = sum c e_k
    name: str = "lie"

    def __post_init__(self):
        clean = {}
        for key, row in self.constants.items():
            r = {k: to_scalar(v) for k, v in row.items() if to_scalar(v)}
            if r:
                clean[tuple(key)] = r
        object.__setattr__(self, "constants", clean)
        d = self.dim
        for i, j in itertools.product(range(d), repeat=2):
            a, b = self.c(i, j), self.c(j, i)
            for k in set(a) | set(b):
                if a.get(k, ZERO) != -b.get(k, ZERO):
                    raise InvariantError(f"bracket not antisymmetric on ({self.names[i]},{self.names[j]})")
        for x, y, z in itertools.product(range(d), repeat=3):
            if any(self._jacobi(x, y, z)):
                raise InvariantError(f"Jacobi fails on ({self.names[x]},{self.names[y]},{self.names[z]})")

    @property
    def dim(self) -> int:
        return len(self.names)

    def c(self, i: int, j: int) -> Mapping[int, Fraction]:
        return self.constants.get((i, j), {})

    def bracket_vec(self, u, v) -> list[Fraction]:
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    if vj:
                        for k, c in self.c(i, j).items():
                            out[k] += ui * vj * c
        return out

    def _e(self, i):
        return [Fraction(int(t == i)) for t in range(self.dim)]

    def _jacobi(self, x, y, z):
        e = self._e
        a = self.bracket_vec(e(x), self.bracket_vec(e(y), e(z)))
        b = self.bracket_vec(e(y), self.bracket_vec(e(z), e(x)))
        c = self.bracket_vec(e(z), self.bracket_vec(e(x), e(y)))
        return [p + q + r for p, q, r in zip(a, b, c)]


def parse_lie(text: str, name: str = "lie") -> LieAlgebraData:
    """Line format: ``names e f h`` then ``bracket e f h 1`` for [e,f] = 1 h.

    The antisymmetric partner of each bracket line is implied.
    """
    names = None
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "name":
            name = rest[0]
        elif head == "names":
            names = tuple(rest)
        elif head == "dim":
            continue
        elif head == "bracket" and len(rest) == 4:
            lines.append(rest)
        else:
            raise InputError(f"cannot parse Lie record {line!r}")
    if names is None:
        raise InputError("Lie algebra file needs a names record")
    ix = {nm: i for i, nm in enumerate(names)}
    try:
        consts: dict = {}
        given = set()
        for a, b, c, v in lines:
            i, j, k = ix[a], ix[b], ix[c]
            consts.setdefault((i, j), {})
            consts[(i, j)][k] = consts[(i, j)].get(k, ZERO) + to_scalar(v)
            given.add((i, j, k))
        for (i, j, k) in list(given):
            if (j, i, k) not in given:
                consts.setdefault((j, i), {})
                consts[(j, i)][k] = -consts[(i, j)][k]
    except KeyError as exc:
        raise InputError(f"unknown basis element {exc}") from None
    return LieAlgebraData(names, consts, name=name)


def load_lie(name_or_path: str) -> LieAlgebraData:
    if name_or_path in SHIPPED_LIE:
        text = resources.files("properad.data").joinpath(f"{name_or_path}.lie").read_text()
        return parse_lie(text, name=name_or_path)
    with open(name_or_path) as fh:
        return parse_lie(fh.read(), name=name_or_path)


def killing_form(L: LieAlgebraData) -> list[list[Fraction]]:
    """K[a][b] = trace(ad_a o ad_b); invariance is checked before returning."""
    d = L.dim
    K = [[ZERO] * d for _ in range(d)]
    for a, b in itertools.product(range(d), repeat=2):
        s = ZERO
        for i in range(d):
            for j, cij in L.c(a, i).items():
                s += cij * L.c(b, j).get(i, ZERO)
        K[a][b] = s
    for a, b, c in itertools.product(range(d), repeat=3):
        lhs = sum((v * K[x][c] for x, v in L.c(a, b).items()), ZERO)
        rhs = sum((v * K[a][x] for x, v in L.c(b, c).items()), ZERO)
        if lhs != rhs:
            raise InvariantError("Killing form is not invariant")
    return K


def _matrix_inverse(K: list[list[Fraction]]) -> list[list[Fraction]] | None:
    d = len(K)
    sp = GradedSpace.from_degrees([0] * d)
    M = LinearMap(sp, sp, 0, {(i, j): K[i][j] for i in range(d) for j in range(d) if K[i][j]})
    if rank(M) < d:
        return None
    inv = [[ZERO] * d for _ in range(d)]
    for col in range(d):
        sol = solve_linear(M, [Fraction(int(i == col)) for i in range(d)])
        for row in range(d):
            inv[row][col] = sol[row]
    return inv


# ------------------------------------------------------------- diLie data

@dataclass(frozen=True, eq=False)
class DiLieData:
    space: GradedSpace
    bracket: MultiMap
    cobracket: MultiMap
    n: int
    name: str = "dilie"

    def __post_init__(self):
        if (self.bracket.j, self.bracket.k, self.bracket.degree) != (2, 1, 0):
            raise InputError("bracket must be a degree-0 (2,1) map")
        if (self.cobracket.j, self.cobracket.k) != (1, 2):
            raise InputError("cobracket must be a (1,2) map")
        if self.cobracket.entries and self.cobracket.degree != self.n:
            raise InputError(f"cobracket has degree {self.cobracket.degree}, expected {self.n}")


def cobracket_from_killing(L: LieAlgebraData) -> DiLieData:
    """Raise both outputs and lower the input of the bracket with the Killing form."""
    K = killing_form(L)
    Kinv = _matrix_inverse(K)
    if Kinv is None:
        raise NotSemisimpleError(f"Killing form degenerate for {L.name}; the algebra is not semisimple")
    d = L.dim
    space = GradedSpace(tuple((nm, 0) for nm in L.names))
    # lowered constants: c_ab^(k) = sum_c K[k][c] c[a][b][c]
    low = {}
    for (a, b), row in L.constants.items():
        for k in range(d):
            s = sum((v * K[k][c] for c, v in row.items()), ZERO)
            if s:
                low[(a, b, k)] = s
    cob = {}
    for (a, b, k), s in low.items():
        for i in range(d):
            if not Kinv[i][a]:
                continue
            for j in range(d):
                if Kinv[j][b]:
                    key = ((i, j), (k,))
                    cob[key] = cob.get(key, ZERO) + Kinv[i][a] * Kinv[j][b] * s
    return DiLieData(space, lie_bracket_map(L, space), MultiMap.from_tuples(space, 1, 2, 0, cob), 0,
                     name=f"{L.name}+killing")


def lie_bracket_map(L: LieAlgebraData, space: GradedSpace | None = None) -> MultiMap:
    space = space or GradedSpace(tuple((nm, 0) for nm in L.names))
    ent = {((k,), (i, j)): v for (i, j), row in L.constants.items() for k, v in row.items()}
    return MultiMap.from_tuples(space, 2, 1, 0, ent)


# ------------------------------------------------------------- relations

def _g(verts, edges, ins, outs) -> DirectedGraph:
    return DirectedGraph(tuple((d, *ARITIES[d]) for d in verts), tuple(edges), tuple(ins), tuple(outs))


def relation_graphs() -> dict[str, list[tuple[int, DirectedGraph]]]:
    """Relations as signed sums of graphs; the vertex order is the tensor word.

    Jacobi: cyclic sum of [[x,y],z].  Co-Jacobi: cyclic sum over outputs of
    (delta (x) 1) delta.  Compatibility: delta([x,y]) = x . delta(y), where x
    acts on the tensor square by derivation through the bracket.
    """
    nested = _g([BRACKET, BRACKET], [((0, 0), (1, 0))], [(0, 0), (0, 1), (1, 1)], [(1, 0)])
    jac = [(1, nested.permute_legs(s, (0,))) for s in ((0, 1, 2), (1, 2, 0), (2, 0, 1))]
    conested = _g([COBRACKET, COBRACKET], [((0, 0), (1, 0))], [(0, 0)], [(1, 0), (1, 1), (0, 1)])
    cojac = [(1, conested.permute_legs((0,), t)) for t in ((0, 1, 2), (1, 2, 0), (2, 0, 1))]
    t0 = _g([BRACKET, COBRACKET], [((0, 0), (1, 0))], [(0, 0), (0, 1)], [(1, 0), (1, 1)])
    t1 = _g([COBRACKET, BRACKET], [((0, 0), (1, 1))], [(1, 0), (0, 0)], [(1, 0), (0, 1)])
    t2 = _g([COBRACKET, BRACKET], [((0, 1), (1, 1))], [(1, 0), (0, 0)], [(0, 0), (1, 0)])
    compat = [(1, t0), (-1, t1), (-1, t2)]
    return {"jacobi": jac, "cojacobi": cojac, "compatibility": compat}


def _evaluate(terms, maps: Mapping[str, MultiMap], space) -> MultiMap:
    acc = None
    for c, g in terms:
        val = evaluate_graph(g, [maps[d] for d, _, _ in g.vertices], space).scale(c)
        acc = val if acc is None else acc + val
    return acc


@dataclass
class DiLieReport:
    defects: dict = field(default_factory=dict)  # relation -> MultiMap defect
    info: dict = field(default_factory=dict)

    def max_defect(self, name: str | None = None) -> Fraction:
        items = [self.defects[name]] if name else self.defects.values()
        return max((abs(v) for m in items for v in m.entries.values()), default=ZERO)

    @property
    def ok(self) -> bool:
        return all(m.is_zero() for m in self.defects.values())

    def failures(self) -> list[str]:
        return [k for k, m in self.defects.items() if not m.is_zero()]


def dilie_relations_check(D: DiLieData) -> DiLieReport:
    """Defect of every relation, evaluated exactly on V."""
    sp = D.space
    maps = {BRACKET: D.bracket, COBRACKET: D.cobracket}
    rep = DiLieReport()
    rep.defects["antisymmetry"] = D.bracket + sym_act((1, 0), D.bracket, (0,))
    sgn = -1 if D.n % 2 == 0 else 1  # tau delta = (-1)^(n+1) delta
    rep.defects["coantisymmetry"] = sym_act((0,), D.cobracket, (1, 0)) - D.cobracket.scale(sgn)
    for name, terms in relation_graphs().items():
        rep.defects[name] = _evaluate(terms, maps, sp)
    # the cocycle form, reported for comparison only
    t0, t1, t2 = (g for _, g in relation_graphs()["compatibility"])
    x_dy = _evaluate([(1, t1), (1, t2)], maps, sp)
    cocycle = _evaluate([(1, t0)], maps, sp) - x_dy + sym_act((1, 0), x_dy, (0, 1))
    rep.info["cocycle_form_defect"] = max((abs(v) for v in cocycle.entries.values()), default=ZERO)
    return rep


# ---------------------------------------------------------- tensor action

def tensor_action(A: FrobeniusAlgebraData, L: LieAlgebraData, max_weight: int = 2,
                  resolve: bool = True) -> tuple[DiLieData, DiLieReport]:
    """Bracket ab (x) [x,y] and cobracket Delta (x) delta on A (x) g.

    g sits in degree 0, so no Koszul signs appear beyond those inside A.
    When ``resolve`` is set the resolution for A is run first and its
    fillers recorded; for strict A they vanish and the strict relations are
    the whole story.
    """
    if A.n % 2:
        raise InputError("tensor action is implemented for even n")
    G = cobracket_from_killing(L)
    dl = L.dim
    space = GradedSpace(tuple((f"{an}|{ln}", ad) for an, ad in A.space.basis for ln in L.names))

    def ix(a, x):
        return a * dl + x

    br = {}
    for ((c,), (a, b)), u in A.mult_map.tuples().items():
        for ((z,), (x, y)), v in G.bracket.tuples().items():
            key = ((ix(c, z),), (ix(a, x), ix(b, y)))
            br[key] = br.get(key, ZERO) + u * v
    cob = {}
    for ((a1, a2), (a,)), u in A.coproduct.tuples().items():
        for ((x1, x2), (x,)), v in G.cobracket.tuples().items():
            key = ((ix(a1, x1), ix(a2, x2)), (ix(a, x),))
            cob[key] = cob.get(key, ZERO) + u * v
    D = DiLieData(space, MultiMap.from_tuples(space, 2, 1, 0, br),
                  MultiMap.from_tuples(space, 1, 2, A.n, cob), A.n, name=f"{A.name}(x){L.name}")
    report = dilie_relations_check(D)
    if resolve:
        res = run_resolution(target_from_algebra(A), max_weight=max_weight)
        report.info["resolution_all_filled"] = res.all_filled
        report.info["resolution_nonzero_fillers"] = res.nonzero_fillers
        report.info["resolution_audit_ok"] = res.audit.ok
    return D, report


# ------------------------------------------------------- dioperad components

def _port_swaps(g: DirectedGraph, n: int):
    """All port permutations at vertices, with the sign of the generator symmetry."""
    choices = []
    for v, (d, _, _) in enumerate(g.vertices):
        choices.append([(v, False), (v, True)])
    cob_sign = -1 if n % 2 == 0 else 1
    for pick in itertools.product(*choices):
        sign = 1
        in_map = {}
        out_map = {}
        for v, flip in pick:
            if not flip:
                continue
            if g.vertices[v][0] == BRACKET:
                sign = -sign
                in_map[(v, 0)], in_map[(v, 1)] = (v, 1), (v, 0)
            else:
                sign *= cob_sign
                out_map[(v, 0)], out_map[(v, 1)] = (v, 1), (v, 0)
        edges = [(out_map.get(a, a), in_map.get(b, b)) for a, b in g.edges]
        ins = [in_map.get(p, p) for p in g.input_legs]
        outs = [out_map.get(p, p) for p in g.output_legs]
        yield sign, DirectedGraph(g.vertices, tuple(edges), tuple(ins), tuple(outs))


def _odd_vertices(g: DirectedGraph, n: int) -> list[int]:
    return [v for v, (d, _, _) in enumerate(g.vertices) if d == COBRACKET and n % 2]


def tree_normal_form(g: DirectedGraph, n: int) -> tuple[int, str | None]:
    """(sign, key) modulo generator symmetries and vertex relabelling; sign 0 if g = -g."""
    return _tree_normal_form(g, n % 2)


@lru_cache(maxsize=None)
def _tree_normal_form(g: DirectedGraph, n: int) -> tuple[int, str | None]:
    best = None
    signs = set()
    odd = _odd_vertices(g, n)
    nv = g.n_vertices
    for s, h in _port_swaps(g, n):
        for perm in itertools.permutations(range(nv)):
            key = h.relabel(perm).serialize()
            if best is not None and key > best:
                continue
            # odd letters listed in their new order, compared to the old word
            order = sorted(odd, key=lambda v: perm[v])
            t = s * permutation_sign([odd.index(v) for v in order])
            if best is None or key < best:
                best, signs = key, {t}
            else:
                signs.add(t)
    if len(signs) > 1:
        return 0, None
    return signs.pop(), best


@dataclass
class Component:
    j: int
    k: int
    n: int
    free_dim: int
    relation_rank: int
    degree: int
    character: dict  # (sigma, tau) -> trace on the quotient

    @property
    def dim(self) -> int:
        return self.free_dim - self.relation_rank


def _contexts(terms, j0, k0):
    """Relation placed in every one-vertex tree context."""
    yield terms
    for gen, (gi, go) in ARITIES.items():
        for leg in range(j0):
            for p in range(go):
                yield [(c, _graft_above(g, leg, gen, p)) for c, g in terms]
        for leg in range(k0):
            for p in range(gi):
                yield [(c, _graft_below(g, leg, gen, p)) for c, g in terms]


def _graft_above(g: DirectedGraph, leg: int, gen: str, port: int) -> DirectedGraph:
    """Output ``port`` of a new ``gen`` vertex feeds input leg ``leg``."""
    v = g.n_vertices
    gi, go = ARITIES[gen]
    verts = g.vertices + ((gen, gi, go),)
    edges = g.edges + (((v, port), g.input_legs[leg]),)
    ins = g.input_legs[:leg] + tuple((v, q) for q in range(gi)) + g.input_legs[leg + 1:]
    outs = g.output_legs + tuple((v, q) for q in range(go) if q != port)
    return DirectedGraph(verts, edges, ins, outs)


def _graft_below(g: DirectedGraph, leg: int, gen: str, port: int) -> DirectedGraph:
    v = g.n_vertices
    gi, go = ARITIES[gen]
    verts = g.vertices + ((gen, gi, go),)
    edges = g.edges + ((g.output_legs[leg], (v, port)),)
    ins = g.input_legs + tuple((v, q) for q in range(gi) if q != port)
    outs = g.output_legs[:leg] + tuple((v, q) for q in range(go)) + g.output_legs[leg + 1:]
    return DirectedGraph(verts, edges, ins, outs)


def _rref(rows: list[dict[int, Fraction]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Reduced row echelon form: list of (pivot column, row) with pivot 1."""
    basis: list[tuple[int, dict[int, Fraction]]] = []
    for r in rows:
        r = dict(r)
        for p, b in basis:
            if r.get(p):
                f = r[p]
                for c, v in b.items():
                    r[c] = r.get(c, ZERO) - f * v
                r = {c: v for c, v in r.items() if v}
        if not r:
            continue
        p = min(r)
        f = r[p]
        r = {c: v / f for c, v in r.items()}
        new = []
        for q, b in basis:
            if b.get(p):
                g = b[p]
                b = {c: b.get(c, ZERO) - g * r.get(c, ZERO) for c in set(b) | set(r)}
                b = {c: v for c, v in b.items() if v}
            new.append((q, b))
        basis = new + [(p, r)]
    return basis


def dilie_component(j: int, k: int, n: int) -> Component:
    """Tree component (j inputs, k outputs) of the diLie dioperad of degree n."""
    if j < 1 or k < 1:
        raise InputError("components need j, k > 0")
    if j + k > MAX_HADAMARD_ARITY:
        raise ResourceError(f"j+k = {j + k} exceeds {MAX_HADAMARD_ARITY}")
    c = _component(j, k, n % 2)
    return Component(j, k, n, c.free_dim, c.relation_rank, (k - 1) * n, dict(c.character))


@lru_cache(maxsize=None)
def _component(j: int, k: int, n: int) -> Component:
    degree = (k - 1) * n
    if (j, k) == (1, 1):
        return Component(1, 1, n, 1, 0, 0, {((0,), (0,)): Fraction(1)})
    nv = j + k - 2
    graphs = enumerate_graphs(j, k, nv, ARITIES)
    index: dict[str, int] = {}
    for g in graphs:
        if g.n_vertices != nv:
            continue
        s, key = tree_normal_form(g, n)
        if s:
            index.setdefault(key, len(index))
    rows = []
    rels = relation_graphs()
    for name, terms in rels.items():
        j0 = terms[0][1].n_inputs
        k0 = terms[0][1].n_outputs
        for ctx in _contexts(terms, j0, k0):
            jj, kk = ctx[0][1].n_inputs, ctx[0][1].n_outputs
            if (jj, kk) != (j, k):
                continue
            for sigma in itertools.permutations(range(j)):
                for tau in itertools.permutations(range(k)):
                    row: dict[int, Fraction] = {}
                    for c, g in ctx:
                        s, key = tree_normal_form(g.permute_legs(sigma, tau), n)
                        if s:
                            col = index[key]
                            row[col] = row.get(col, ZERO) + c * s
                    row = {a: v for a, v in row.items() if v}
                    if row:
                        rows.append(row)
    ech = _rref(rows)
    keys = sorted(index, key=index.get)
    graph_of = {key: g for g in graphs for key in [tree_normal_form(g, n)[1]] if key in index}
    character = {}
    for sigma in itertools.permutations(range(j)):
        for tau in itertools.permutations(range(k)):
            act = {}
            for key in keys:
                g = graph_of[key]
                s, new = tree_normal_form(g.permute_legs(sigma, tau), n)
                # g itself is +-1 times the basis element
                act[index[key]] = (s * tree_normal_form(g, n)[0], index[new]) if s else (0, None)
            free_tr = sum(s for col, (s, new) in act.items() if new == col)
            rel_tr = ZERO
            for p, b in ech:
                moved: dict[int, Fraction] = {}
                for col, v in b.items():
                    s, new = act[col]
                    if s:
                        moved[new] = moved.get(new, ZERO) + s * v
                rel_tr += moved.get(p, ZERO)
            character[(sigma, tau)] = free_tr - rel_tr
    return Component(j, k, n, len(index), len(ech), degree, character)


def frob0_component(j: int, k: int, n: int) -> Component:
    """Genus-zero Frob in degree n: one-dimensional, outputs act by sgn^n."""
    character = {}
    for sigma in itertools.permutations(range(j)):
        for tau in itertools.permutations(range(k)):
            character[(sigma, tau)] = Fraction(permutation_sign(tau) if n % 2 else 1)
    return Component(j, k, n, 1, 0, (k - 1) * n, character)


def hadamard_component(P: Component, Q: Component) -> Component:
    """Componentwise tensor: dimensions multiply, degrees add, characters multiply."""
    if (P.j, P.k) != (Q.j, Q.k):
        raise InputError("components of different arity")
    character = {key: P.character[key] * Q.character[key] for key in P.character}
    return Component(P.j, P.k, P.n + Q.n, P.dim * Q.dim, 0, P.degree + Q.degree, character)


@dataclass
class HadamardReport:
    rows: list  # (j, k, n, dim lhs, dim rhs, deg lhs, deg rhs, characters equal)

    @property
    def ok(self) -> bool:
        return all(r[3] == r[4] and r[5] == r[6] and r[7] for r in self.rows)


def hadamard_check(max_arity: int = 5, degrees: Sequence[int] = (1, 2, 3)) -> HadamardReport:
    """Frob0 of degree n tensor diLie of degree 0 against diLie of degree n."""
    if max_arity > MAX_HADAMARD_ARITY:
        raise ResourceError(f"max_arity {max_arity} exceeds {MAX_HADAMARD_ARITY}")
    rows = []
    for j in range(1, max_arity):
        for k in range(1, max_arity - j + 1):
            base = dilie_component(j, k, 0)
            for n in degrees:
                lhs = hadamard_component(frob0_component(j, k, n), base)
                rhs = dilie_component(j, k, n)
                rows.append((j, k, n, lhs.dim, rhs.dim, lhs.degree, rhs.degree,
                             lhs.character == rhs.character))
    return HadamardReport(rows)
