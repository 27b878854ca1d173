"""The endomorphism properad of a finite-dimensional complex.

A :class:`MultiMap` is a homogeneous linear map V^(x)j -> V^(x)k stored as a
sparse matrix on the lexicographic tensor bases.  Graph composition
(:func:`evaluate_graph`) applies the vertex maps in the order they are listed;
a non-topological listing is first reordered with the Koszul sign of the map
degrees.  Wires are permuted with the Koszul sign of the basis elements they
carry.  All signs come from :func:`properad.exactalg.koszul_sign`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from . import graphcore as gc
from .exactalg import (ZERO, ChainComplex, GradedSpace, InputError, InvariantError,
                       LinearMap, koszul_sign, koszul_tensor, to_scalar)


@lru_cache(maxsize=None)
def tensor_power(space: GradedSpace, m: int) -> GradedSpace:
    if m == 0:
        return GradedSpace((("1", 0),))
    out = space
    for _ in range(m - 1):
        out = out.tensor(space)
    return out


@lru_cache(maxsize=None)
def tensor_tuples(dim: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(range(dim), repeat=m))


def _flat(idx: Sequence[int], dim: int) -> int:
    out = 0
    for i in idx:
        out = out * dim + i
    return out


@dataclass(frozen=True)
class MultiMap:
    space: GradedSpace
    j: int
    k: int
    degree: int
    entries: Mapping[tuple[int, int], Fraction]  # (output index, input index) in tensor bases
    _cols: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        src = tensor_power(self.space, self.j)
        tgt = tensor_power(self.space, self.k)
        clean = {}
        cols: dict[int, dict[int, Fraction]] = {}
        for (t, s), v in self.entries.items():
            v = to_scalar(v)
            if not v:
                continue
            if tgt.degree(t) - src.degree(s) != self.degree:
                raise InvariantError(
                    f"entry {(t, s)} of a degree {self.degree} map joins degrees "
                    f"{src.degree(s)} -> {tgt.degree(t)}")
            clean[(t, s)] = v
            cols.setdefault(s, {})[t] = v
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "_cols", cols)

    @classmethod
    def zero(cls, space, j, k, degree=0):
        return cls(space, j, k, degree, {})

    @classmethod
    def identity(cls, space):
        return cls(space, 1, 1, 0, {(i, i): Fraction(1) for i in range(space.dim)})

    @classmethod
    def from_linear(cls, space, j, k, lin: LinearMap):
        return cls(space, j, k, lin.degree, lin.entries)

    @classmethod
    def from_tuples(cls, space, j, k, degree, entries: Mapping):
        """Build from {(output tuple, input tuple): coefficient}."""
        d = space.dim
        return cls(space, j, k, degree,
                   {(_flat(o, d), _flat(i, d)): v for (o, i), v in entries.items()})

    def as_linear(self) -> LinearMap:
        return LinearMap(tensor_power(self.space, self.j), tensor_power(self.space, self.k),
                         self.degree, self.entries)

    def column(self, s: int) -> dict[int, Fraction]:
        return self._cols.get(s, {})

    def apply(self, inputs: Sequence[int]) -> dict[tuple[int, ...], Fraction]:
        d = self.space.dim
        outs = tensor_tuples(d, self.k)
        return {outs[t]: v for t, v in self.column(_flat(inputs, d)).items()}

    def tuples(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
        d = self.space.dim
        ins = tensor_tuples(d, self.j)
        outs = tensor_tuples(d, self.k)
        return {(outs[t], ins[s]): v for (t, s), v in self.entries.items()}

    def _same(self, other):
        if (self.space, self.j, self.k) != (other.space, other.j, other.k):
            raise InputError("MultiMaps of different shapes")
        if self.entries and other.entries and self.degree != other.degree:
            raise InputError("adding MultiMaps of different degrees")

    def __add__(self, other: "MultiMap") -> "MultiMap":
        self._same(other)
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out.get(key, ZERO) + v
        return MultiMap(self.space, self.j, self.k,
                        self.degree if self.entries else other.degree, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiMap":
        c = to_scalar(c)
        return MultiMap(self.space, self.j, self.k, self.degree,
                        {key: c * v for key, v in self.entries.items()})

    def with_degree(self, degree: int) -> "MultiMap":
        if self.entries and degree != self.degree:
            raise InvariantError("cannot change the degree of a nonzero map")
        return MultiMap(self.space, self.j, self.k, degree, {})

    def is_zero(self) -> bool:
        return not self.entries

    def __hash__(self):
        return hash((self.space, self.j, self.k, self.degree, frozenset(self.entries.items())))

    def serialize(self) -> str:
        lines = [f"multimap {self.j} {self.k} {self.degree}"]
        for (o, i), v in sorted(self.tuples().items()):
            lines.append(f"{','.join(map(str, o))} <- {','.join(map(str, i))} : {v}")
        return "\n".join(lines)


def serialize_complex(cx: ChainComplex) -> str:
    lines = [f"space {' '.join(f'{n}:{d}' for n, d in cx.space.basis)}"]
    for (t, s), v in sorted(cx.differential.entries.items()):
        lines.append(f"d {cx.space.names[s]} -> {cx.space.names[t]} : {v}")
    return "\n".join(lines)


# ------------------------------------------------------------ composition

def _consumers(graph):
    """Map each in-port and each output leg to the wire feeding it."""
    feed = {}
    for i, port in enumerate(graph.input_legs):
        feed[("in", port)] = ("I", i)
    for a, b in graph.edges:
        feed[("in", b)] = ("O", a[0], a[1])
    outs = [("O", v, p) for v, p in graph.output_legs]
    return feed, outs


def evaluate_graph(graph, maps: Sequence[MultiMap], space: GradedSpace,
                   order: Sequence[int] | None = None) -> MultiMap:
    """Composite of ``maps[v]`` placed at vertex ``v`` of ``graph``.

    ``order`` is the tensor word in which the maps are listed (default:
    vertex order); the composite applies them in a topological order after
    the Koszul reordering of the word.
    """
    nv = len(graph.vertices)
    if len(maps) != nv:
        raise InputError("one map per vertex required")
    for v, (_, a, b) in enumerate(graph.vertices):
        if (maps[v].j, maps[v].k) != (a, b):
            raise InputError(f"map at vertex {v} has arity {(maps[v].j, maps[v].k)}, vertex has {(a, b)}")
    word = list(range(nv)) if order is None else list(order)
    topo = gc.topological_order(graph)
    if topo is None:
        raise gc.CompositionError("cannot evaluate a graph with a directed cycle")
    pos = {v: i for i, v in enumerate(word)}
    degree = sum(m.degree for m in maps)
    if any(m.is_zero() for m in maps):
        return MultiMap.zero(space, len(graph.input_legs), len(graph.output_legs), degree)
    sign0 = koszul_sign([maps[v].degree for v in word], [pos[v] for v in topo])
    feed, out_wires = _consumers(graph)
    vdeg = space.degrees
    dim = space.dim
    j = len(graph.input_legs)
    k = len(graph.output_legs)
    result: dict[tuple[int, int], Fraction] = {}
    for s, x in enumerate(tensor_tuples(dim, j)):
        states = {tuple((("I", i), x[i]) for i in range(j)): Fraction(sign0)}
        for v in topo:
            f = maps[v]
            need = [feed[("in", (v, q))] for q in range(graph.vertices[v][1])]
            new_states: dict = {}
            for wires, c in states.items():
                where = {w: i for i, (w, _) in enumerate(wires)}
                front = [where[w] for w in need]
                taken = set(front)
                perm = front + [i for i in range(len(wires)) if i not in taken]
                sgn = koszul_sign([vdeg[b] for _, b in wires], perm)
                rest = tuple(wires[i] for i in perm[len(front):])
                args = tuple(wires[i][1] for i in front)
                for outs, coef in f.apply(args).items():
                    key = tuple((("O", v, p), b) for p, b in enumerate(outs)) + rest
                    new_states[key] = new_states.get(key, ZERO) + c * sgn * coef
            states = {key: c for key, c in new_states.items() if c}
            if not states:
                break
        for wires, c in states.items():
            where = {w: i for i, (w, _) in enumerate(wires)}
            perm = [where[w] for w in out_wires]
            sgn = koszul_sign([vdeg[b] for _, b in wires], perm)
            t = _flat([wires[i][1] for i in perm], dim)
            result[(t, s)] = result.get((t, s), ZERO) + c * sgn
    return MultiMap(space, j, k, degree, result)


def end_compose(uppers: Sequence[MultiMap], lower: MultiMap, matching: Sequence[int]) -> MultiMap:
    """Graft all outputs of ``uppers`` (concatenated) into inputs of ``lower``.

    ``matching[t]`` is the lower input receiving the t-th upper output.
    """
    total = sum(u.k for u in uppers)
    if total != lower.j:
        raise gc.CompositionError(f"uppers have {total} outputs, lower has {lower.j} inputs")
    space = lower.space
    pattern = gc.GraftingPattern(tuple(gc.corolla(i, u.j, u.k) for i, u in enumerate(uppers)),
                                 gc.corolla(len(uppers), lower.j, lower.k), tuple(matching))
    graph = gc.graft(pattern)
    return evaluate_graph(graph, list(uppers) + [lower], space)


def compose_linear(g: MultiMap, f: MultiMap) -> MultiMap:
    """Plain composite ``g o f`` (outputs of f in order into inputs of g)."""
    if f.k != g.j:
        raise gc.CompositionError("arity mismatch in composite")
    return MultiMap.from_linear(f.space, f.j, g.k, g.as_linear().compose(f.as_linear()))


# ----------------------------------------------------------- differential

@lru_cache(maxsize=None)
def tensor_differential(cx: ChainComplex, m: int) -> LinearMap:
    """Differential of V^(x)m, assembled from Koszul tensors of d and id."""
    sp = cx.space
    if m == 0:
        one = tensor_power(sp, 0)
        return LinearMap.zero(one, one, cx.diff_degree)
    d = cx.differential
    ident = LinearMap.identity(sp)
    acc = LinearMap(sp, sp, cx.diff_degree, d.entries)
    acc_id = ident
    for _ in range(m - 1):
        left = koszul_tensor(acc, ident)
        right = koszul_tensor(acc_id, LinearMap(sp, sp, cx.diff_degree, d.entries))
        acc = LinearMap(left.source, left.target, cx.diff_degree,
                        (left + right).entries if (left.entries or right.entries) else {})
        acc_id = koszul_tensor(acc_id, ident)
    return acc


def end_differential(f: MultiMap, cx: ChainComplex) -> MultiMap:
    """d o f - (-1)^|f| f o d on V^(x)j -> V^(x)k."""
    if cx.space != f.space:
        raise InputError("MultiMap and complex live on different spaces")
    deg = f.degree + cx.diff_degree
    if not cx.differential.entries or not f.entries:
        return MultiMap.zero(f.space, f.j, f.k, deg)
    lin = f.as_linear()
    din = tensor_differential(cx, f.j)
    dout = tensor_differential(cx, f.k)
    left = dout.compose(lin) if dout.entries else None
    right = lin.compose(din) if din.entries else None
    out: dict = {}
    if left is not None:
        out.update(left.entries)
    if right is not None:
        sgn = -1 if f.degree % 2 == 0 else 1
        for key, v in right.entries.items():
            out[key] = out.get(key, ZERO) + sgn * v
    return MultiMap(f.space, f.j, f.k, deg, out)


def end_differential_matrix(cx: ChainComplex, j: int, k: int, degree: int):
    """Matrix of f -> end_differential(f) on degree-``degree`` MultiMaps.

    Returns (columns, rows, LinearMap) where ``columns`` lists the (t, s)
    entry positions of the unknown map and ``rows`` those of the result.
    """
    sp = cx.space
    src = tensor_power(sp, j)
    tgt = tensor_power(sp, k)
    columns = [(t, s) for s in range(src.dim) for t in range(tgt.dim)
               if tgt.degree(t) - src.degree(s) == degree]
    columns.sort()
    rdeg = degree + cx.diff_degree
    rows = [(t, s) for s in range(src.dim) for t in range(tgt.dim)
            if tgt.degree(t) - src.degree(s) == rdeg]
    rows.sort()
    row_index = {rc: i for i, rc in enumerate(rows)}
    entries = {}
    for c, ts in enumerate(columns):
        unit = MultiMap(sp, j, k, degree, {ts: Fraction(1)})
        img = end_differential(unit, cx)
        for key, v in img.entries.items():
            entries[(row_index[key], c)] = v
    csp = GradedSpace.from_degrees([0] * len(columns), "x")
    rsp = GradedSpace.from_degrees([0] * len(rows), "y")
    return columns, rows, LinearMap(csp, rsp, 0, entries)


# -------------------------------------------------------- symmetric action

def sym_act(sigma: Sequence[int], f: MultiMap, tau: Sequence[int]) -> MultiMap:
    """Relabel legs: new input i is old input ``sigma[i]``, new output t is old output ``tau[t]``.

    Tensor factors move with the Koszul sign of the basis degrees.
    """
    if sorted(sigma) != list(range(f.j)) or sorted(tau) != list(range(f.k)):
        raise InputError("permutation sizes do not match arities")
    vdeg = f.space.degrees
    inv = [0] * f.j
    for i, s in enumerate(sigma):
        inv[s] = i
    out = {}
    dim = f.space.dim
    for (o, x), v in f.tuples().items():
        # new input word y has y[i] = x[sigma[i]]
        y = [x[sigma[i]] for i in range(f.j)]
        s_in = koszul_sign([vdeg[b] for b in y], inv)  # y reordered into x
        w = [o[tau[t]] for t in range(f.k)]
        s_out = koszul_sign([vdeg[b] for b in o], list(tau))
        key = (_flat(w, dim), _flat(y, dim))
        out[key] = out.get(key, ZERO) + s_in * s_out * v
    return MultiMap(f.space, f.j, f.k, f.degree, out)
