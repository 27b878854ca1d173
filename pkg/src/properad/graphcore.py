"""Connected directed acyclic graphs with ordered legs and decorated vertices.

A port is a pair ``(vertex, position)``.  Every in-port of every vertex is
fed by exactly one internal edge or one global input leg, every out-port
feeds exactly one internal edge or one global output leg.

Text format (one record per line)::

    v0:mu(2,1)
    v1:delta(1,2)
    e:0.0->1.0
    in:0.0,0.1
    out:1.0,1.1

``e:a.p->b.q`` joins out-port ``p`` of vertex ``a`` to in-port ``q`` of
vertex ``b``; ``in:`` lists the in-ports receiving global inputs 1..j in
order, ``out:`` the out-ports producing global outputs 1..k.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .exactalg import InputError

MAX_ENUM_VERTICES = 6

Port = tuple[int, int]


class GraphError(InputError):
    """A graph violates one of the structural invariants."""


class CompositionError(ValueError):
    """Grafting or contraction is not defined for the given data."""


class ResourceError(RuntimeError):
    """A requested computation exceeds an enforced size bound."""


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[tuple[Hashable, int, int], ...]
    edges: tuple[tuple[Port, Port], ...]
    input_legs: tuple[Port, ...]
    output_legs: tuple[Port, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((d, int(i), int(o)) for d, i, o in self.vertices))
        object.__setattr__(self, "edges", tuple(sorted((tuple(a), tuple(b)) for a, b in self.edges)))
        object.__setattr__(self, "input_legs", tuple(tuple(p) for p in self.input_legs))
        object.__setattr__(self, "output_legs", tuple(tuple(p) for p in self.output_legs))
        self._validate()

    def _validate(self):
        nv = len(self.vertices)
        if nv == 0:
            raise GraphError("graph has no vertices")
        ins: dict[Port, str] = {}
        outs: dict[Port, str] = {}

        def claim(table, port, kind, who):
            v, p = port
            if not 0 <= v < nv:
                raise GraphError(f"{who} refers to missing vertex {v}")
            arity = self.vertices[v][1] if kind == "in" else self.vertices[v][2]
            if not 0 <= p < arity:
                raise GraphError(f"{who} refers to missing {kind}-port {v}.{p}")
            if port in table:
                raise GraphError(f"{kind}-port {v}.{p} used twice ({table[port]} and {who})")
            table[port] = who

        for a, b in self.edges:
            claim(outs, a, "out", f"edge {a}->{b}")
            claim(ins, b, "in", f"edge {a}->{b}")
        for i, p in enumerate(self.input_legs):
            claim(ins, p, "in", f"input leg {i + 1}")
        for i, p in enumerate(self.output_legs):
            claim(outs, p, "out", f"output leg {i + 1}")
        for v, (dec, a_in, a_out) in enumerate(self.vertices):
            for p in range(a_in):
                if (v, p) not in ins:
                    raise GraphError(f"dangling in-port {v}.{p} on vertex v{v}:{dec}")
            for p in range(a_out):
                if (v, p) not in outs:
                    raise GraphError(f"dangling out-port {v}.{p} on vertex v{v}:{dec}")
        if topological_order(self) is None:
            raise GraphError("graph has a directed cycle")
        if not _connected(nv, [(a[0], b[0]) for a, b in self.edges]):
            raise GraphError("graph is disconnected")

    @property
    def n_inputs(self) -> int:
        return len(self.input_legs)

    @property
    def n_outputs(self) -> int:
        return len(self.output_legs)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def decorations(self):
        return [d for d, _, _ in self.vertices]

    def adjacency(self) -> dict[tuple[int, int], int]:
        """Edge multiplicities between ordered vertex pairs."""
        out: dict[tuple[int, int], int] = {}
        for a, b in self.edges:
            key = (a[0], b[0])
            out[key] = out.get(key, 0) + 1
        return out

    def serialize(self) -> str:
        lines = [f"v{i}:{d}({a},{b})" for i, (d, a, b) in enumerate(self.vertices)]
        lines += [f"e:{a[0]}.{a[1]}->{b[0]}.{b[1]}" for a, b in self.edges]
        lines.append("in:" + ",".join(f"{v}.{p}" for v, p in self.input_legs))
        lines.append("out:" + ",".join(f"{v}.{p}" for v, p in self.output_legs))
        return "\n".join(lines) + "\n"

    def relabel(self, perm: Sequence[int]) -> "DirectedGraph":
        """Rename vertex ``v`` to ``perm[v]``."""
        nv = len(self.vertices)
        verts = [None] * nv
        for v, data in enumerate(self.vertices):
            verts[perm[v]] = data
        edges = [((perm[a[0]], a[1]), (perm[b[0]], b[1])) for a, b in self.edges]
        return DirectedGraph(tuple(verts), tuple(edges),
                             tuple((perm[v], p) for v, p in self.input_legs),
                             tuple((perm[v], p) for v, p in self.output_legs))

    def permute_legs(self, sigma: Sequence[int] = None, tau: Sequence[int] = None) -> "DirectedGraph":
        """New input leg i is old input leg ``sigma[i]`` (likewise outputs)."""
        ins = self.input_legs if sigma is None else tuple(self.input_legs[s] for s in sigma)
        outs = self.output_legs if tau is None else tuple(self.output_legs[t] for t in tau)
        return DirectedGraph(self.vertices, self.edges, ins, outs)


_VERT = re.compile(r"^v(\d+):(.+)\((\d+),(\d+)\)$")
_EDGE = re.compile(r"^e:(\d+)\.(\d+)->(\d+)\.(\d+)$")


def _ports(text: str) -> tuple[Port, ...]:
    text = text.strip()
    if not text:
        return ()
    out = []
    for tok in text.split(","):
        try:
            v, p = tok.strip().split(".")
            out.append((int(v), int(p)))
        except ValueError:
            raise GraphError(f"bad port {tok!r}") from None
    return tuple(out)


def parse_graph(text: str) -> DirectedGraph:
    verts: dict[int, tuple[str, int, int]] = {}
    edges = []
    ins = outs = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if m := _VERT.match(line):
            i = int(m.group(1))
            if i in verts:
                raise GraphError(f"vertex v{i} declared twice")
            verts[i] = (m.group(2), int(m.group(3)), int(m.group(4)))
        elif m := _EDGE.match(line):
            a, p, b, q = map(int, m.groups())
            edges.append(((a, p), (b, q)))
        elif line.startswith("in:"):
            ins = _ports(line[3:])
        elif line.startswith("out:"):
            outs = _ports(line[4:])
        else:
            raise GraphError(f"cannot parse line {line!r}")
    if sorted(verts) != list(range(len(verts))):
        raise GraphError("vertices must be numbered v0..v(n-1)")
    if ins is None or outs is None:
        raise GraphError("missing in: or out: line")
    return DirectedGraph(tuple(verts[i] for i in range(len(verts))), tuple(edges), ins, outs)


def _connected(n: int, pairs) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)}) <= 1


def topological_order(g) -> list[int] | None:
    """Kahn order with smallest index first; None if there is a cycle."""
    n = len(g.vertices)
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for a, b in g.edges:
        succ[a[0]].append(b[0])
        indeg[b[0]] += 1
    ready = sorted(v for v in range(n) if indeg[v] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
                ready.sort()
    return order if len(order) == n else None


def loop_genus(g: DirectedGraph) -> int:
    """First Betti number of the (connected) underlying graph."""
    return len(g.edges) - len(g.vertices) + 1


# ------------------------------------------------------------------ grafting

@dataclass(frozen=True)
class GraftingPattern:
    upper: tuple[DirectedGraph, ...]
    lower: DirectedGraph
    matching: tuple[int, ...]  # matching[t] = lower input fed by the t-th upper output

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "matching", tuple(self.matching))
        total = sum(u.n_outputs for u in self.upper)
        if total != self.lower.n_inputs:
            raise CompositionError(
                f"uppers have {total} outputs but lower has {self.lower.n_inputs} inputs")
        if sorted(self.matching) != list(range(total)):
            raise CompositionError("matching is not a bijection")


def graft(p: GraftingPattern) -> DirectedGraph:
    verts = []
    edges = []
    ins = []
    upper_outs: list[Port] = []
    offset = 0
    for u in p.upper:
        if u.n_outputs == 0:
            raise CompositionError("an upper graph with no outputs would be disconnected")
        verts.extend(u.vertices)
        edges.extend(((a[0] + offset, a[1]), (b[0] + offset, b[1])) for a, b in u.edges)
        ins.extend((v + offset, q) for v, q in u.input_legs)
        upper_outs.extend((v + offset, q) for v, q in u.output_legs)
        offset += len(u.vertices)
    lo = p.lower
    verts.extend(lo.vertices)
    edges.extend(((a[0] + offset, a[1]), (b[0] + offset, b[1])) for a, b in lo.edges)
    for t, port in enumerate(upper_outs):
        v, q = lo.input_legs[p.matching[t]]
        edges.append((port, (v + offset, q)))
    outs = [(v + offset, q) for v, q in lo.output_legs]
    try:
        return DirectedGraph(tuple(verts), tuple(edges), tuple(ins), tuple(outs))
    except GraphError as exc:
        raise CompositionError(str(exc)) from exc


def corolla(decoration, n_in: int, n_out: int) -> DirectedGraph:
    return DirectedGraph(((decoration, n_in, n_out),), (),
                         tuple((0, i) for i in range(n_in)),
                         tuple((0, i) for i in range(n_out)))


# ------------------------------------------------------------- contraction

def has_other_path(g, a: int, b: int) -> bool:
    """True if some directed path a -> ... -> b passes through a third vertex."""
    succ: dict[int, set[int]] = {}
    for x, y in g.edges:
        succ.setdefault(x[0], set()).add(y[0])
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


def contractible_pairs(g) -> list[tuple[int, int]]:
    """Ordered pairs (a, b) joined by at least one edge a -> b whose merge stays acyclic."""
    pairs = sorted(g.adjacency())
    return [(a, b) for a, b in pairs if not has_other_path(g, a, b)]


def contract(g: DirectedGraph, a: int, b: int, decoration) -> DirectedGraph:
    """Merge vertices ``a`` and ``b`` (all edges a -> b disappear).

    The merged vertex takes index ``min(a, b)``; its free in-ports are those
    of ``a`` then those of ``b``, in port order, likewise for out-ports.
    """
    if (a, b) not in g.adjacency():
        raise CompositionError(f"vertices {a} and {b} are not joined by an edge {a}->{b}")
    if has_other_path(g, a, b):
        raise CompositionError(f"contracting {a}->{b} would create a directed cycle")
    inner = [(x, y) for x, y in g.edges if x[0] == a and y[0] == b]
    inner_out = {x for x, _ in inner}
    inner_in = {y for _, y in inner}
    new_in: dict[Port, int] = {}
    new_out: dict[Port, int] = {}
    for v in (a, b):
        for q in range(g.vertices[v][1]):
            if (v, q) not in inner_in:
                new_in[(v, q)] = len(new_in)
        for q in range(g.vertices[v][2]):
            if (v, q) not in inner_out:
                new_out[(v, q)] = len(new_out)
    keep = [v for v in range(len(g.vertices)) if v not in (a, b)]
    m = min(a, b)
    order = sorted(keep + [m])
    index = {v: i for i, v in enumerate(order)}

    def mp_in(port):
        if port in new_in:
            return (index[m], new_in[port])
        return (index[port[0]], port[1])

    def mp_out(port):
        if port in new_out:
            return (index[m], new_out[port])
        return (index[port[0]], port[1])

    verts = []
    for v in order:
        if v == m:
            verts.append((decoration, len(new_in), len(new_out)))
        else:
            verts.append(g.vertices[v])
    edges = [(mp_out(x), mp_in(y)) for x, y in g.edges if (x, y) not in set(inner)]
    return DirectedGraph(tuple(verts), tuple(edges),
                         tuple(mp_in(p) for p in g.input_legs),
                         tuple(mp_out(p) for p in g.output_legs))


# ------------------------------------------------------------ isomorphism

def _sort_key(x):
    return (type(x).__name__, str(x))


def _vertex_classes(g: DirectedGraph) -> list[list[int]]:
    sig: dict = {}
    for v, (d, a, b) in enumerate(g.vertices):
        sig.setdefault((_sort_key(d), a, b), []).append(v)
    return [sig[k] for k in sorted(sig)]


def _relabel_key(g: DirectedGraph, perm: Sequence[int]):
    edges = tuple(sorted(((perm[a[0]], a[1]), (perm[b[0]], b[1])) for a, b in g.edges))
    ins = tuple((perm[v], p) for v, p in g.input_legs)
    outs = tuple((perm[v], p) for v, p in g.output_legs)
    return (ins, outs, edges)


def _class_permutations(classes: list[list[int]], n: int):
    slots = []
    start = 0
    for cls in classes:
        slots.append(list(range(start, start + len(cls))))
        start += len(cls)
    per_class = [list(itertools.permutations(s)) for s in slots]
    for choice in itertools.product(*per_class):
        perm = [0] * n
        for cls, targets in zip(classes, choice):
            for v, t in zip(cls, targets):
                perm[v] = t
        yield perm


def canonical_labeling(g: DirectedGraph) -> list[int]:
    """Vertex relabeling taking ``g`` to its canonical form."""
    classes = _vertex_classes(g)
    best = None
    best_perm = None
    for perm in _class_permutations(classes, len(g.vertices)):
        key = _relabel_key(g, perm)
        if best is None or key < best:
            best, best_perm = key, perm
    return best_perm


def canonical_form(g: DirectedGraph) -> DirectedGraph:
    return g.relabel(canonical_labeling(g))


def is_isomorphic(g: DirectedGraph, h: DirectedGraph) -> bool:
    return canonical_form(g) == canonical_form(h)


def automorphisms(g: DirectedGraph) -> list[list[int]]:
    """Vertex permutations fixing ``g`` (legs and ports included)."""
    target = _relabel_key(g, list(range(len(g.vertices))))
    return [perm for perm in _class_permutations(_vertex_classes(g), len(g.vertices))
            if all(g.vertices[v] == g.vertices[perm[v]] for v in range(len(perm)))
            and _relabel_key(g, perm) == target]


# ------------------------------------------------------------- enumeration

def enumerate_graphs(j: int, k: int, max_vertices: int,
                     decorations: Mapping[Hashable, tuple[int, int]]) -> list[DirectedGraph]:
    """All graphs with j inputs, k outputs and 1..max_vertices decorated vertices, up to isomorphism."""
    if max_vertices > MAX_ENUM_VERTICES:
        raise ResourceError(f"max_vertices={max_vertices} exceeds the bound {MAX_ENUM_VERTICES}")
    labels = sorted(decorations, key=_sort_key)
    found: dict = {}
    for nv in range(1, max_vertices + 1):
        for combo in itertools.combinations_with_replacement(labels, nv):
            n_in = sum(decorations[d][0] for d in combo)
            n_out = sum(decorations[d][1] for d in combo)
            e = n_in - j
            if e < 0 or n_out - k != e:
                continue
            verts = tuple((d, *decorations[d]) for d in combo)
            for g in _wirings(verts, j, k):
                c = canonical_form(g)
                found.setdefault(c.serialize(), c)
    return [found[s] for s in sorted(found)]


def _wirings(verts, j: int, k: int):
    """Every port-level graph on ``verts`` with the given leg counts."""
    in_ports = [(v, p) for v, (_, a, _) in enumerate(verts) for p in range(a)]
    out_ports = [(v, p) for v, (_, _, b) in enumerate(verts) for p in range(b)]
    # choose which in-ports take the inputs (ordered) and which out-ports the outputs
    for ins in itertools.permutations(in_ports, j):
        rest_in = [p for p in in_ports if p not in ins]
        for outs in itertools.permutations(out_ports, k):
            rest_out = [p for p in out_ports if p not in outs]
            for targets in itertools.permutations(rest_in):
                edges = tuple(zip(rest_out, targets))
                try:
                    yield DirectedGraph(verts, edges, ins, outs)
                except GraphError:
                    continue
