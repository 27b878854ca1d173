"""Cobar of the bar construction of the Frobenius properad, in flat form.

A basis element of the cobar-of-bar complex is an outer graph whose vertices
carry bar graphs, whose vertices in turn carry basis elements of Frob.  We
store it flat: one port-free graph on all the inner vertices together with
the partition of those vertices into blocks (one block per outer vertex).
Frob is one-dimensional in each arity and genus and, for even n, carries the
trivial symmetric action, so a vertex label ``(j, k, g)`` and edge
multiplicities determine the decorated graph.

Grading is cohomological.  An inner vertex labelled ``(j, k, g)`` sits in
degree ``(k - 1 + g) n - 1`` and every block adds ``+1``; both differentials
raise degree by one.  For even n every inner vertex and every block marker is
odd, so an element is an ordered word of odd letters::

    [B_1, v, v, ..., B_2, v, ...]

and reordering the word costs the sign of the permutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .exactalg import (ZERO, ChainComplex, GradedSpace, InputError, InvariantError, LinearMap,
                       permutation_sign)
from .frob import FrobBasisElement, frob_degree
from .graphcore import DirectedGraph, ResourceError

# Bounds for the assembled complexes.
MAX_WEIGHT = 3
MAX_ARITY = 4
MAX_GENUS = 3

# Degree shifts: each inner (bar) vertex and each block (cobar vertex).
BAR_SHIFT = -1
COBAR_SHIFT = 1

Label = tuple[int, int, int]


def check_n(n: int) -> None:
    if n % 2:
        raise InputError("the flat cobar model needs even n; odd n changes the parity of the letters")


def _is_decoration(lab: Label) -> bool:
    j, k, g = lab
    return j >= 1 and k >= 1 and g >= 0 and lab != (1, 1, 0)


def _has_path(nv: int, edges: Iterable[tuple[int, int, int]], a: int, b: int,
              skip_direct: bool = False) -> bool:
    succ: dict[int, list[int]] = {}
    for x, y, _ in edges:
        succ.setdefault(x, []).append(y)
    stack = [y for y in succ.get(a, []) if not (skip_direct and y == b)]
    seen = set()
    while stack:
        v = stack.pop()
        if v == b:
            return True
        if v in seen:
            continue
        seen.add(v)
        stack.extend(succ.get(v, []))
    return False


def _connected(vertices: Sequence[int], edges) -> bool:
    vs = set(vertices)
    if not vs:
        return False
    adj: dict[int, set[int]] = {v: set() for v in vs}
    for a, b, _ in edges:
        if a in vs and b in vs:
            adj[a].add(b)
            adj[b].add(a)
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


def _acyclic(nv: int, edges) -> bool:
    indeg = [0] * nv
    succ: dict[int, list[int]] = {}
    for a, b, _ in edges:
        succ.setdefault(a, []).append(b)
        indeg[b] += 1
    ready = [v for v in range(nv) if indeg[v] == 0]
    done = 0
    while ready:
        v = ready.pop()
        done += 1
        for w in succ.get(v, []):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return done == nv


# ------------------------------------------------------------------ bar graphs

@dataclass(frozen=True)
class BarGraph:
    """Port-free connected DAG with vertices labelled by Frob basis elements.

    ``inputs[i]`` is the vertex receiving global input ``i``; ``outputs[t]``
    the vertex producing global output ``t``.  ``edges`` lists ``(a, b, m)``
    for ``m`` parallel edges from ``a`` to ``b``.  The vertex order is the
    order of the odd letters.
    """

    labels: tuple[Label, ...]
    edges: tuple[tuple[int, int, int], ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], int] = {}
        for a, b, m in self.edges:
            if m:
                merged[(a, b)] = merged.get((a, b), 0) + m
        object.__setattr__(self, "labels", tuple(tuple(x) for x in self.labels))
        object.__setattr__(self, "edges", tuple(sorted((a, b, m) for (a, b), m in merged.items())))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        self._validate()

    def _validate(self):
        nv = len(self.labels)
        if nv == 0:
            raise InputError("bar graph has no vertices")
        fan_in = [0] * nv
        fan_out = [0] * nv
        for a, b, m in self.edges:
            if a == b or not (0 <= a < nv and 0 <= b < nv) or m < 0:
                raise InputError(f"bad edge {a}->{b} x{m}")
            fan_out[a] += m
            fan_in[b] += m
        for v in self.inputs:
            fan_in[v] += 1
        for v in self.outputs:
            fan_out[v] += 1
        for v, lab in enumerate(self.labels):
            if not _is_decoration(lab):
                raise InputError(f"label {lab} is not a reduced Frob basis element")
            if (fan_in[v], fan_out[v]) != lab[:2]:
                raise InputError(f"vertex {v} has arity {(fan_in[v], fan_out[v])}, label {lab}")
        if not _acyclic(nv, self.edges):
            raise InputError("bar graph has a directed cycle")
        if not _connected(range(nv), self.edges):
            raise InputError("bar graph is disconnected")

    @property
    def weight(self) -> int:
        return len(self.labels)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def n_edges(self) -> int:
        return sum(m for _, _, m in self.edges)

    def genus(self) -> int:
        """Genus of the Frob element obtained by composing everything."""
        return sum(g for _, _, g in self.labels) + self.n_edges - self.weight + 1

    def total_degree(self, n: int) -> int:
        return sum(frob_degree(j, k, g, n) for j, k, g in self.labels) + BAR_SHIFT * self.weight

    def contractible_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b, _ in self.edges
                if not _has_path(self.weight, self.edges, a, b, skip_direct=True)]

    def to_directed_graph(self, n: int) -> DirectedGraph:
        """Port-level graph decorated by FrobBasisElements (ports in a fixed order)."""
        nv = self.weight
        next_in = [0] * nv
        next_out = [0] * nv

        def take(table, v):
            p = table[v]
            table[v] += 1
            return (v, p)

        ins = tuple(take(next_in, v) for v in self.inputs)
        outs = tuple(take(next_out, v) for v in self.outputs)
        edges = []
        for a, b, m in self.edges:
            for _ in range(m):
                edges.append((take(next_out, a), take(next_in, b)))
        verts = tuple((FrobBasisElement(j, k, g, n), j, k) for j, k, g in self.labels)
        return DirectedGraph(verts, tuple(edges), ins, outs)

    @classmethod
    def from_directed_graph(cls, g: DirectedGraph) -> "BarGraph":
        labels = []
        for dec, a, b in g.vertices:
            if isinstance(dec, FrobBasisElement):
                labels.append((dec.j, dec.k, dec.g))
            else:
                labels.append(tuple(dec))
        edges = [(a[0], b[0], 1) for a, b in g.edges]
        return cls(tuple(labels), tuple(edges), tuple(v for v, _ in g.input_legs),
                   tuple(v for v, _ in g.output_legs))


def corolla(j: int, k: int, g: int) -> BarGraph:
    return BarGraph(((j, k, g),), (), (0,) * j, (0,) * k)


def _contract_flat(x: BarGraph, a: int, b: int) -> tuple[BarGraph, list[int]]:
    """Merge b into a.  Returns the new graph and the old->new vertex map."""
    m = sum(mm for p, q, mm in x.edges if (p, q) == (a, b))
    ja, ka, ga = x.labels[a]
    jb, kb, gb = x.labels[b]
    merged = (ja + jb - m, ka + kb - m, ga + gb + m - 1)
    old_to_new = []
    for v in range(x.weight):
        if v == b:
            old_to_new.append(-1)
        else:
            old_to_new.append(v - (v > b))
    old_to_new[b] = old_to_new[a]
    labels = [lab for v, lab in enumerate(x.labels) if v != b]
    labels[old_to_new[a]] = merged
    edges = [(old_to_new[p], old_to_new[q], mm) for p, q, mm in x.edges if (p, q) != (a, b)]
    y = BarGraph(tuple(labels), tuple(edges), tuple(old_to_new[v] for v in x.inputs),
                 tuple(old_to_new[v] for v in x.outputs))
    return y, old_to_new


# ------------------------------------------------------------ cobar elements

@dataclass(frozen=True)
class CobarGraph:
    """Flat bar graph with its vertices partitioned into ordered blocks.

    The letter word is ``[B_0, *blocks[0], B_1, *blocks[1], ...]``.
    """

    flat: BarGraph
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        seen = sorted(v for b in self.blocks for v in b)
        if seen != list(range(self.flat.weight)):
            raise InputError("blocks must partition the vertices")
        for b in self.blocks:
            if not _connected(b, self.flat.edges):
                raise InputError(f"block {b} is not connected")
        where = {v: i for i, b in enumerate(self.blocks) for v in b}
        quotient = {(where[a], where[b], 1) for a, b, _ in self.flat.edges if where[a] != where[b]}
        if not _acyclic(len(self.blocks), quotient):
            raise InputError("outer graph has a directed cycle")

    @property
    def weight(self) -> int:
        return self.flat.weight

    @property
    def outer_weight(self) -> int:
        return len(self.blocks)

    @property
    def arity(self) -> tuple[int, int]:
        return (self.flat.n_inputs, self.flat.n_outputs)

    def genus(self) -> int:
        return self.flat.genus()

    def degree(self, n: int) -> int:
        return self.flat.total_degree(n) + COBAR_SHIFT * len(self.blocks)

    def word(self) -> list[tuple]:
        out = []
        for i, b in enumerate(self.blocks):
            out.append(("B", i))
            out.extend(("v", v) for v in b)
        return out

    def block_graph(self, i: int) -> tuple[BarGraph, list, list]:
        """The bar graph of block ``i`` with its own legs.

        Legs are numbered: global legs first (by leg index), then edges to
        or from other blocks in the order of ``flat.edges``.  Returns the bar
        graph and the half-edge descriptors of its inputs and outputs.
        """
        blk = self.blocks[i]
        local = {v: t for t, v in enumerate(blk)}
        ins, in_desc, outs, out_desc = [], [], [], []
        for leg, v in enumerate(self.flat.inputs):
            if v in local:
                ins.append(local[v])
                in_desc.append(("leg", leg))
        for leg, v in enumerate(self.flat.outputs):
            if v in local:
                outs.append(local[v])
                out_desc.append(("leg", leg))
        inner = []
        for a, b, m in self.flat.edges:
            if a in local and b in local:
                inner.append((local[a], local[b], m))
            elif b in local:
                for c in range(m):
                    ins.append(local[b])
                    in_desc.append(("edge", a, b, c))
            elif a in local:
                for c in range(m):
                    outs.append(local[a])
                    out_desc.append(("edge", a, b, c))
        g = BarGraph(tuple(self.flat.labels[v] for v in blk), tuple(inner), tuple(ins), tuple(outs))
        return g, in_desc, out_desc

    def serialize(self) -> str:
        blocks = "|".join(" ".join(f"v{v}:{self.flat.labels[v]}".replace(" ", "") for v in b)
                          for b in self.blocks)
        edges = " ".join(f"{a}->{b}x{m}" for a, b, m in self.flat.edges)
        ins = ",".join(map(str, self.flat.inputs))
        outs = ",".join(map(str, self.flat.outputs))
        return f"[{blocks}] e:{edges or '-'} in:{ins} out:{outs}"

    def __str__(self):
        return self.serialize()


def single_block(x: BarGraph) -> CobarGraph:
    return CobarGraph(x, (tuple(range(x.weight)),))


# ------------------------------------------------------------ canonical form

@lru_cache(maxsize=None)
def _canonical(x: CobarGraph) -> tuple[int, CobarGraph | None]:
    nv = x.weight
    flat = x.flat
    old_word = x.word()
    old_pos = {letter: p for p, letter in enumerate(old_word)}
    block_of = {v: i for i, b in enumerate(x.blocks) for v in b}
    best = None
    signs = set()
    # only permutations preserving labels can tie; order candidates by label
    for perm in _label_perms(flat.labels):
        labels = [None] * nv
        for v, lab in enumerate(flat.labels):
            labels[perm[v]] = lab
        edges = tuple(sorted((perm[a], perm[b], m) for a, b, m in flat.edges))
        ins = tuple(perm[v] for v in flat.inputs)
        outs = tuple(perm[v] for v in flat.outputs)
        blocks = sorted(tuple(sorted(perm[v] for v in b)) for b in x.blocks)
        key = (tuple(labels), edges, ins, outs, tuple(blocks))
        if best is not None and key > best:
            continue
        inv = [0] * nv
        for v, p in enumerate(perm):
            inv[p] = v
        order = []
        for b in blocks:
            order.append(old_pos[("B", block_of[inv[b[0]]])])
            order.extend(old_pos[("v", inv[u])] for u in b)
        s = permutation_sign(order)
        if best is None or key < best:
            best = key
            signs = {s}
        else:
            signs.add(s)
    if len(signs) > 1:
        return 0, None
    labels, edges, ins, outs, blocks = best
    return signs.pop(), CobarGraph(BarGraph(labels, edges, ins, outs), blocks)


def _label_perms(labels: Sequence[Label]):
    """Vertex permutations sending the vertex set onto positions sorted by label."""
    nv = len(labels)
    ordered = sorted(set(labels))
    slots: dict[Label, list[int]] = {}
    pos = 0
    for lab in ordered:
        cnt = sum(1 for x in labels if x == lab)
        slots[lab] = list(range(pos, pos + cnt))
        pos += cnt
    groups = {lab: [v for v in range(nv) if labels[v] == lab] for lab in ordered}
    choices = [list(itertools.permutations(slots[lab])) for lab in ordered]
    for pick in itertools.product(*choices):
        perm = [0] * nv
        for lab, targets in zip(ordered, pick):
            for v, t in zip(groups[lab], targets):
                perm[v] = t
        yield perm


def canonicalize(x: CobarGraph) -> tuple[int, CobarGraph | None]:
    """(sign, canonical representative); sign 0 when x equals its own negative."""
    return _canonical(x)


def automorphism_sign_conflict(x: CobarGraph) -> bool:
    return canonicalize(x)[0] == 0


# ---------------------------------------------------------- linear combinations

class CobarElement(dict):
    """Finite linear combination ``{canonical CobarGraph: coefficient}``."""

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int | Fraction, CobarGraph]]) -> "CobarElement":
        out = cls()
        for c, g in terms:
            out.add(g, c)
        return out

    def add(self, g: CobarGraph, c) -> None:
        if not c:
            return
        s, rep = canonicalize(g)
        if not s:
            return
        v = self.get(rep, ZERO) + s * Fraction(c)
        if v:
            self[rep] = v
        else:
            self.pop(rep, None)

    def __add__(self, other):
        out = CobarElement(self)
        for g, c in other.items():
            out.add(g, c)
        return out

    def scale(self, c) -> "CobarElement":
        return CobarElement({g: v * c for g, v in self.items()}) if c else CobarElement()

    def is_zero(self) -> bool:
        return not self

    def terms(self) -> list[tuple[Fraction, CobarGraph]]:
        return sorted(((c, g) for g, c in self.items()), key=lambda t: _sort_key(t[1]))

    def serialize(self) -> list[tuple[str, str]]:
        return [(str(c), g.serialize()) for c, g in self.terms()]


def _sort_key(g: CobarGraph):
    return (g.weight, len(g.blocks), g.flat.labels, g.flat.edges, g.flat.inputs, g.flat.outputs, g.blocks)


def as_element(x) -> CobarElement:
    if isinstance(x, CobarElement):
        return x
    if isinstance(x, BarGraph):
        x = single_block(x)
    return CobarElement.from_terms([(1, x)])


# ---------------------------------------------------------------- differentials

def _bar_terms(x: CobarGraph):
    """Raw (sign, CobarGraph) terms of the edge-contraction differential."""
    pos = 0
    pairs = x.flat.contractible_pairs()
    for bi, blk in enumerate(x.blocks):
        members = set(blk)
        for a, b in pairs:
            if a not in members or b not in members:
                continue
            rest = [v for v in blk if v not in (a, b)]
            s = permutation_sign([blk.index(v) for v in [a, b] + rest])
            if pos % 2 == 0:  # (-1)^(pos + 1): letters up to and including the marker
                s = -s
            flat, mp = _contract_flat(x.flat, a, b)
            blocks = []
            for j, other in enumerate(x.blocks):
                if j == bi:
                    blocks.append((mp[a],) + tuple(mp[v] for v in rest))
                else:
                    blocks.append(tuple(mp[v] for v in other))
            yield s, CobarGraph(flat, tuple(blocks))
        pos += 1 + len(blk)


def _splittings(flat: BarGraph, blk: Sequence[int]):
    """Ordered pairs (X, Y) cutting ``blk`` with every crossing edge from X to Y."""
    blk = list(blk)
    inner = [(a, b, m) for a, b, m in flat.edges if a in blk and b in blk]
    for r in range(1, len(blk)):
        for xs in itertools.combinations(blk, r):
            xset = set(xs)
            if any(b in xset and a not in xset for a, b, _ in inner):
                continue
            ys = [v for v in blk if v not in xset]
            if not (_connected(xs, inner) and _connected(ys, inner)):
                continue
            yield [v for v in blk if v in xset], ys


def _cobar_terms(x: CobarGraph):
    pos = 0
    for bi, blk in enumerate(x.blocks):
        for xs, ys in _splittings(x.flat, blk):
            s = permutation_sign([blk.index(v) for v in xs + ys])
            if (pos + len(xs)) % 2 == 0:  # (-1)^(pos + |X| + 1)
                s = -s
            blocks = x.blocks[:bi] + (tuple(xs), tuple(ys)) + x.blocks[bi + 1:]
            yield s, CobarGraph(x.flat, blocks)
        pos += 1 + len(blk)


def bar_differential(x) -> CobarElement:
    """Contraction of adjacent inner vertex pairs, composing labels in Frob."""
    out = CobarElement()
    for g, c in as_element(x).items():
        for s, term in _bar_terms(g):
            if term.weight != g.weight - 1:
                raise InvariantError("contraction must lower the weight by one")
            out.add(term, c * s)
    return out


def cobar_differential(x) -> CobarElement:
    """Splittings of one block into two connected blocks."""
    out = CobarElement()
    for g, c in as_element(x).items():
        for s, term in _cobar_terms(g):
            if term.outer_weight != g.outer_weight + 1:
                raise InvariantError("splitting must add one block")
            out.add(term, c * s)
    return out


def total_differential(x) -> CobarElement:
    """d + partial; the internal differential of Frob is zero."""
    return bar_differential(x) + cobar_differential(x)


def act_legs(x: CobarGraph, sigma: Sequence[int], tau: Sequence[int]) -> CobarGraph:
    """New input leg i is old input ``sigma[i]``; outputs likewise with ``tau``."""
    f = x.flat
    flat = BarGraph(f.labels, f.edges, tuple(f.inputs[s] for s in sigma),
                    tuple(f.outputs[t] for t in tau))
    return CobarGraph(flat, x.blocks)


def act_element(x: CobarElement, sigma, tau) -> CobarElement:
    return CobarElement.from_terms((c, act_legs(g, sigma, tau)) for g, c in x.items())


# ------------------------------------------------------------------ enumeration

def _check_bounds(j: int, k: int, max_weight: int, max_genus: int):
    if j < 1 or k < 1:
        raise InputError("arities must be positive")
    if max_weight > MAX_WEIGHT or j + k > MAX_ARITY or max_genus > MAX_GENUS:
        raise ResourceError(
            f"bounds exceeded: weight {max_weight} (max {MAX_WEIGHT}), arity j+k={j + k} "
            f"(max {MAX_ARITY}), genus {max_genus} (max {MAX_GENUS})")


def bar_graphs(j: int, k: int, weight: int, genus: int) -> list[BarGraph]:
    """Every bar graph (up to isomorphism, any vertex order) with the given data.

    Vertices are generated in a topological order, so edges only run from
    lower to higher index.
    """
    found = {}
    pairs = [(a, b) for a in range(weight) for b in range(a + 1, weight)]
    for n_edges in range(max(weight - 1, 0), genus + weight):
        spare = genus - (n_edges - weight + 1)
        if spare < 0:
            continue
        for mults in _compositions(n_edges, len(pairs)):
            edges = tuple((a, b, m) for (a, b), m in zip(pairs, mults) if m)
            if not _connected(range(weight), edges):
                continue
            for gens in _compositions(spare, weight):
                for ins in itertools.product(range(weight), repeat=j):
                    for outs in itertools.product(range(weight), repeat=k):
                        labels = _labels_for(weight, edges, ins, outs, gens)
                        if labels is None:
                            continue
                        g = BarGraph(labels, edges, ins, outs)
                        s, rep = canonicalize(single_block(g))
                        key = rep.flat if rep is not None else g
                        found.setdefault(key, g)
    return list(found.values())


def _labels_for(nv, edges, ins, outs, gens):
    fin = [0] * nv
    fout = [0] * nv
    for a, b, m in edges:
        fout[a] += m
        fin[b] += m
    for v in ins:
        fin[v] += 1
    for v in outs:
        fout[v] += 1
    labels = tuple((fin[v], fout[v], gens[v]) for v in range(nv))
    if all(_is_decoration(lab) for lab in labels):
        return labels
    return None


def _compositions(total: int, parts: int):
    """Tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _block_partitions(flat: BarGraph):
    """Ordered-by-minimum set partitions into connected blocks with acyclic quotient."""
    nv = flat.weight
    for assign in _set_partitions(nv):
        blocks = tuple(tuple(v for v in range(nv) if assign[v] == b) for b in range(max(assign) + 1))
        try:
            yield CobarGraph(flat, blocks)
        except InputError:
            continue


def _set_partitions(nv: int):
    def rec(i, assign, used):
        if i == nv:
            yield list(assign)
            return
        for b in range(used + 1):
            assign.append(b)
            yield from rec(i + 1, assign, max(used, b + 1))
            assign.pop()
    yield from rec(0, [], 0)


def cobar_basis(j: int, k: int, max_weight: int, genus: int, n: int = 2) -> list[CobarGraph]:
    """Canonical nonzero basis elements of arity (j, k), fixed genus, weight <= max_weight."""
    check_n(n)
    _check_bounds(j, k, max_weight, genus)
    found: dict[CobarGraph, None] = {}
    for w in range(1, max_weight + 1):
        for flat in bar_graphs(j, k, w, genus):
            for x in _block_partitions(flat):
                s, rep = canonicalize(x)
                if s:
                    found.setdefault(rep, None)
    return sorted(found, key=_sort_key)


# ------------------------------------------------------------- the complex

@dataclass(frozen=True)
class TruncatedComplex:
    """Cobar-of-bar complex in arity (j, k) cut off at a weight and genus.

    Both differentials preserve genus, contraction lowers weight and
    splitting preserves it, so the cut is a subcomplex: every degree lies
    in the safe window.
    """

    j: int
    k: int
    n: int
    max_weight: int
    max_genus: int
    basis: tuple[CobarGraph, ...]
    complex: ChainComplex
    safe_window: tuple[int, int] | None

    def integer_matrix(self) -> np.ndarray:
        d = self.complex.differential
        m = np.zeros((d.target.dim, d.source.dim), dtype=np.int64)
        for (r, c), v in d.entries.items():
            if v.denominator != 1:
                raise InvariantError("differential has non-integer entries")
            m[r, c] = int(v)
        return m

    def square_is_zero(self) -> bool:
        return _kernels.square_is_zero(self.integer_matrix())


def truncated_complex(j: int, k: int, max_weight: int, max_genus: int = 1, n: int = 2) -> TruncatedComplex:
    check_n(n)
    _check_bounds(j, k, max_weight, max_genus)
    basis: list[CobarGraph] = []
    for g in range(max_genus + 1):
        basis.extend(cobar_basis(j, k, max_weight, g, n))
    index = {x: i for i, x in enumerate(basis)}
    space = GradedSpace(tuple((f"c{i}", x.degree(n)) for i, x in enumerate(basis)))
    entries = {}
    for c, x in enumerate(basis):
        for y, v in total_differential(x).items():
            if y not in index:
                raise InvariantError(f"differential leaves the truncation: {y}")
            entries[(index[y], c)] = v
    cx = ChainComplex(space, LinearMap(space, space, 1, entries), 1)
    degs = [x.degree(n) for x in basis]
    window = (min(degs), max(degs)) if degs else None
    return TruncatedComplex(j, k, n, max_weight, max_genus, tuple(basis), cx, window)


@dataclass
class SquareAudit:
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def square_audit(max_arity: int = 4, max_weight: int = 3, max_genus: int = 1, n: int = 2) -> SquareAudit:
    """(d + partial)^2, d^2, partial^2 on every basis element within bounds."""
    checked = 0
    failures = []
    for j in range(1, max_arity):
        for k in range(1, max_arity - j + 1):
            for g in range(max_genus + 1):
                for x in cobar_basis(j, k, max_weight, g, n):
                    checked += 1
                    dd = bar_differential(bar_differential(x))
                    pp = cobar_differential(cobar_differential(x))
                    tt = total_differential(total_differential(x))
                    for name, val in (("d^2", dd), ("partial^2", pp), ("total^2", tt)):
                        if val:
                            failures.append((name, x))
    return SquareAudit(checked, failures)


def frob_label(x: FrobBasisElement) -> Label:
    return (x.j, x.k, x.g)


def element_degree(x: Mapping[CobarGraph, Fraction], n: int) -> int | None:
    degs = {g.degree(n) for g in x}
    if len(degs) > 1:
        raise InvariantError("inhomogeneous element")
    return degs.pop() if degs else None
