"""Weight-by-weight construction of a morphism from the cobar-of-bar resolution.

A morphism out of the free properad is fixed by its values on generators,
which are the single-block elements (one bar graph).  Weight-one generators
are Frob corollas and go to the given operations on V; each heavier
generator ``x`` needs a multilinear map ``y`` with ``d y = phi(D x)``.  The
right-hand side is a cycle built from values already chosen; when it is a
boundary we pick the solution the eliminator produces (free variables zero),
otherwise we report it.

Values are stored on one generator per orbit of the leg permutations and
transported to the rest of the orbit with ``sym_act``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import factorial
from typing import Mapping, Sequence

from . import freeprop as fp
from .endprop import (MultiMap, end_differential, end_differential_matrix, evaluate_graph, sym_act)
from .exactalg import (ZERO, ChainComplex, GradedSpace, InputError, InvariantError, LinearMap,
                       rank, solve_linear, to_scalar)
from .frob import frob_degree
from .frobalg import (FrobeniusAlgebraData, canonical_realization, evaluate_generator_graph,
                      load_algebra)
from .graphcore import DirectedGraph, ResourceError

SHIPPED_TARGETS = ("perturbed", "broken")
REPORT_VERSION = "properad-resolution/1"


class MorphismError(InvariantError):
    """A proposed value is not a chain map, has the wrong degree or breaks symmetry."""


# ------------------------------------------------------------------- targets

@dataclass(frozen=True, eq=False)
class FrobTarget:
    """A complex V with a product and coproduct used as weight-one data.

    The operations need only be chain maps; associativity and the other
    relations may fail up to homotopy (or fail outright).
    """

    name: str
    complex: ChainComplex
    n: int
    mult: MultiMap
    comult: MultiMap
    _images: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if (self.mult.j, self.mult.k, self.mult.degree) != (2, 1, 0):
            raise InputError("product must be a degree-0 map V(x)V -> V")
        if (self.comult.j, self.comult.k, self.comult.degree) != (1, 2, self.n):
            raise InputError(f"coproduct must be a degree-{self.n} map V -> V(x)V")

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    def image(self, j: int, k: int, g: int) -> MultiMap:
        """Value on the Frob corolla (j, k, g), symmetrised over leg orderings.

        For a strict algebra the average changes nothing; for a perturbed
        product it makes the weight-one data equivariant.
        """
        key = (j, k, g)
        if key not in self._images:
            if key == (1, 1, 0):
                self._images[key] = MultiMap.identity(self.space)
            else:
                raw = evaluate_generator_graph(canonical_realization(j, k, g),
                                               {"mu": self.mult, "delta": self.comult}, self.space)
                acc = MultiMap.zero(self.space, j, k, raw.degree)
                for sigma in itertools.permutations(range(j)):
                    for tau in itertools.permutations(range(k)):
                        acc = acc + sym_act(sigma, raw, tau)
                self._images[key] = acc.scale(Fraction(1, factorial(j) * factorial(k)))
        return self._images[key]

    def images(self, max_arity: int = fp.MAX_ARITY, max_genus: int = 1) -> dict:
        out = {}
        for j in range(1, max_arity):
            for k in range(1, max_arity - j + 1):
                for g in range(max_genus + 1):
                    if (j, k, g) != (1, 1, 0):
                        out[(j, k, g)] = self.image(j, k, g)
        return out


def target_from_algebra(A: FrobeniusAlgebraData) -> FrobTarget:
    return FrobTarget(A.name, ChainComplex.zero_differential(A.space), A.n, A.mult_map, A.coproduct)


def parse_target(text: str, name: str = "target") -> FrobTarget:
    """Parse the target format.

    ::

        n 2
        basis 1:0 v:2 p:1 q:2
        d p q 1            # d(p) = 1 q
        mult 1 v v 1       # 1 * v = 1 v
        comult v v v 1     # Delta(v) contains 1 v (x) v
    """
    n = None
    basis = None
    d_lines, mult_lines, comult_lines = [], [], []
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
            basis = [(tok.rsplit(":", 1)[0], int(tok.rsplit(":", 1)[1])) for tok in rest]
        elif head == "d" and len(rest) == 3:
            d_lines.append(rest)
        elif head == "mult" and len(rest) == 4:
            mult_lines.append(rest)
        elif head == "comult" and len(rest) == 4:
            comult_lines.append(rest)
        else:
            raise InputError(f"cannot parse target record {line!r}")
    if n is None or basis is None:
        raise InputError("target file needs n and basis records")
    space = GradedSpace(tuple(basis))
    ix = space.index
    dent = {}
    for a, b, v in d_lines:
        dent[(ix(b), ix(a))] = dent.get((ix(b), ix(a)), ZERO) + to_scalar(v)
    try:
        cx = ChainComplex(space, LinearMap(space, space, 1, dent), 1)
        mult = MultiMap.from_tuples(space, 2, 1, 0, _accumulate(
            (((ix(c),), (ix(a), ix(b))), v) for a, b, c, v in mult_lines))
        comult = MultiMap.from_tuples(space, 1, 2, n, _accumulate(
            (((ix(b), ix(c)), (ix(a),)), v) for a, b, c, v in comult_lines))
    except InvariantError as exc:
        raise InputError(f"inconsistent target data: {exc}") from exc
    return FrobTarget(name, cx, n, mult, comult)


def _accumulate(pairs):
    out: dict = {}
    for key, v in pairs:
        out[key] = out.get(key, ZERO) + to_scalar(v)
    return out


def load_target(name_or_path: str) -> FrobTarget:
    """Shipped fixture, shipped algebra (zero differential) or a file path."""
    if name_or_path in SHIPPED_TARGETS:
        text = resources.files("properad.data").joinpath(f"{name_or_path}.tgt").read_text()
        return parse_target(text, name=name_or_path)
    if name_or_path.endswith(".tgt"):
        with open(name_or_path) as fh:
            return parse_target(fh.read(), name=name_or_path)
    return target_from_algebra(load_algebra(name_or_path))


# ------------------------------------------------------------- the morphism

@dataclass
class ObstructionReport:
    element: fp.CobarGraph
    weight: int
    cycle: MultiMap
    filled: bool
    filler: MultiMap | None = None
    homology_class: dict | None = None

    def record(self) -> dict:
        return {
            "element": self.element.serialize(),
            "weight": self.weight,
            "arity": list(self.element.arity),
            "genus": self.element.genus(),
            "filled": self.filled,
            "cycle_zero": self.cycle.is_zero(),
            "cycle": self.cycle.serialize(),
            "filler_zero": None if self.filler is None else self.filler.is_zero(),
            "filler": None if self.filler is None else self.filler.serialize(),
            "class": self.homology_class,
        }


@dataclass
class PartialMorphism:
    target: FrobTarget
    explicit: bool = False  # True: weight-one values only from the given images
    values: dict = field(default_factory=dict)  # orbit representative -> MultiMap
    current_weight: int = 0
    _orbit: dict = field(default_factory=dict)  # canonical generator -> (rep, sigma, tau, sign)
    _stab: dict = field(default_factory=dict)   # rep -> [(sigma, tau, sign)]
    _dmat: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def space(self) -> GradedSpace:
        return self.target.space

    # -------------------------------------------------------------- orbits
    def register_orbit(self, rep: fp.CobarGraph) -> None:
        if rep in self._stab:
            return
        j, k = rep.arity
        stab = []
        for sigma in itertools.permutations(range(j)):
            for tau in itertools.permutations(range(k)):
                s, y = fp.canonicalize(fp.act_legs(rep, sigma, tau))
                if not s:
                    continue
                # act(rep) = s * y, hence phi(y) = s * sym_act(sigma, phi(rep), tau)
                self._orbit.setdefault(y, (rep, sigma, tau, s))
                if y == rep:
                    stab.append((sigma, tau, s))
        self._stab[rep] = stab

    def assign(self, rep: fp.CobarGraph, value: MultiMap) -> None:
        if value.degree != rep.degree(self.n):
            raise MorphismError(f"value for {rep} has degree {value.degree}, expected {rep.degree(self.n)}")
        self.register_orbit(rep)
        self.values[rep] = value

    def generator_value(self, x: fp.CobarGraph) -> MultiMap:
        s, y = fp.canonicalize(x)
        j, k = x.arity
        if not s:
            return MultiMap.zero(self.space, j, k, x.degree(self.n))
        if y not in self._orbit and y.weight == 1 and not self.explicit:
            lab = y.flat.labels[0]
            f = self.target.image(*lab)
            _check_image(self.target, lab, f)
            self.assign(y, f)
        if y not in self._orbit:
            raise InvariantError(f"generator {y} has no value yet")
        rep, sigma, tau, s1 = self._orbit[y]
        if rep not in self.values:
            raise InvariantError(f"generator {y} has no value yet")
        return sym_act(sigma, self.values[rep], tau).scale(s * s1)

    def value(self, x: fp.CobarGraph) -> MultiMap:
        """Image of a basis element: evaluate the outer graph on block values."""
        if x.outer_weight == 1:
            return self.generator_value(x)
        maps = []
        verts = []
        in_port: dict = {}
        out_port: dict = {}
        for i in range(x.outer_weight):
            bg, ins, outs = x.block_graph(i)
            maps.append(self.generator_value(fp.single_block(bg)))
            verts.append((i, len(ins), len(outs)))
            for p, desc in enumerate(ins):
                in_port[desc] = (i, p)
            for p, desc in enumerate(outs):
                out_port[desc] = (i, p)
        edges = [(out_port[d], in_port[d]) for d in in_port if d[0] == "edge"]
        graph = DirectedGraph(tuple(verts), tuple(edges),
                              tuple(in_port[("leg", i)] for i in range(x.arity[0])),
                              tuple(out_port[("leg", t)] for t in range(x.arity[1])))
        return evaluate_graph(graph, maps, self.space)

    def value_of(self, elem: Mapping, j: int, k: int, degree: int) -> MultiMap:
        acc = MultiMap.zero(self.space, j, k, degree)
        for x, c in elem.items():
            acc = acc + self.value(x).scale(c)
        return acc

    # ------------------------------------------------------------- linear algebra
    def differential_matrix(self, j: int, k: int, degree: int):
        key = (j, k, degree)
        if key not in self._dmat:
            self._dmat[key] = end_differential_matrix(self.target.complex, j, k, degree)
        return self._dmat[key]

    def average_over_stabilizer(self, rep: fp.CobarGraph, y: MultiMap) -> MultiMap:
        stab = self._stab[rep]
        if len(stab) <= 1:
            return y
        acc = MultiMap.zero(y.space, y.j, y.k, y.degree)
        for sigma, tau, s in stab:
            acc = acc + sym_act(sigma, y, tau).scale(s)
        return acc.scale(Fraction(1, len(stab)))


# --------------------------------------------------------------- operations

def _check_image(target: FrobTarget, key, f: MultiMap) -> None:
    j, k, g = key
    want = frob_degree(j, k, g, target.n)
    if (f.j, f.k) != (j, k) or f.degree != want:
        raise MorphismError(f"image of {key} has arity {(f.j, f.k)} and degree {f.degree}, "
                            f"expected {(j, k)} and {want}")
    comm = end_differential(f, target.complex)
    if not comm.is_zero():
        raise MorphismError(f"image of {key} is not a chain map; commutator:\n{comm.serialize()}")
    for sigma in itertools.permutations(range(j)):
        for tau in itertools.permutations(range(k)):
            if sym_act(sigma, f, tau) != f:
                raise MorphismError(f"image of {key} is not symmetric under {sigma}, {tau}")


def init_weight_zero(target: FrobTarget, images: Mapping | None = None,
                     max_arity: int = fp.MAX_ARITY, max_genus: int = 1) -> PartialMorphism:
    """Assign Frob corollas; reject values that are not symmetric chain maps.

    Without explicit images, corollas outside the initial range are filled
    in from the target when a splitting first needs them.
    """
    phi = PartialMorphism(target, explicit=images is not None)
    images = target.images(max_arity, max_genus) if images is None else images
    for key, f in sorted(images.items()):
        if key == (1, 1, 0):
            if f != MultiMap.identity(target.space):
                raise MorphismError("the unit corolla must go to the identity")
            continue
        _check_image(target, key, f)
        phi.assign(fp.single_block(fp.corolla(*key)), f)
    phi.current_weight = 1
    return phi


def obstruction_cycle(phi: PartialMorphism, x: fp.CobarGraph) -> MultiMap:
    """phi(D x) for a generator x whose boundary only involves assigned values."""
    j, k = x.arity
    deg = x.degree(phi.n) + 1
    c = phi.value_of(fp.total_differential(x), j, k, deg)
    if not end_differential(c, phi.target.complex).is_zero():
        raise InvariantError(f"obstruction for {x} is not a cycle; signs or earlier values are inconsistent")
    return c


def extend(phi: PartialMorphism, x: fp.CobarGraph) -> ObstructionReport:
    j, k = x.arity
    deg = x.degree(phi.n)
    phi.register_orbit(x)
    c = obstruction_cycle(phi, x)
    if c.is_zero():
        y = MultiMap.zero(phi.space, j, k, deg)
        phi.assign(x, y)
        return ObstructionReport(x, x.weight, c, True, y)
    columns, rows, M = phi.differential_matrix(j, k, deg)
    row_index = {rc: i for i, rc in enumerate(rows)}
    rhs = [ZERO] * len(rows)
    for key, v in c.entries.items():
        rhs[row_index[key]] = v
    sol = solve_linear(M, rhs) if columns else None
    if sol is None:
        return ObstructionReport(x, x.weight, c, False, None, _class_data(phi, c, j, k, deg + 1))
    y = MultiMap(phi.space, j, k, deg, {columns[i]: v for i, v in enumerate(sol) if v})
    y = phi.average_over_stabilizer(x, y)
    if end_differential(y, phi.target.complex) != c:
        raise InvariantError(f"filler for {x} does not bound the obstruction")
    phi.assign(x, y)
    return ObstructionReport(x, x.weight, c, True, y)


def _class_data(phi: PartialMorphism, c: MultiMap, j: int, k: int, degree: int) -> dict:
    """Dimension of the homology of End(V)(j, k) where the obstruction lives."""
    _, _, here = phi.differential_matrix(j, k, degree)
    _, _, before = phi.differential_matrix(j, k, degree - 1)
    cycles = here.source.dim - rank(here)
    betti = cycles - rank(before)
    return {"degree": degree, "betti": betti, "nonzero": True,
            "support": sorted([list(o), list(i)] for (o, i) in c.tuples())}


def orbit_representative(x: fp.CobarGraph) -> fp.CobarGraph:
    j, k = x.arity
    orbit = set()
    for sigma in itertools.permutations(range(j)):
        for tau in itertools.permutations(range(k)):
            s, y = fp.canonicalize(fp.act_legs(x, sigma, tau))
            if s:
                orbit.add(y)
    return min(orbit, key=fp._sort_key)


def generators(max_weight: int, max_arity: int = fp.MAX_ARITY, max_genus: int = 1,
               n: int = 2) -> list[fp.CobarGraph]:
    """Orbit representatives of generators, closed under taking blocks of boundaries.

    Splitting can produce blocks of larger arity than the generator, so the
    list contains those blocks too.  Sorted by weight, then canonically.
    """
    found = set()
    queue = []
    for j in range(1, max_arity):
        for k in range(1, max_arity - j + 1):
            for g in range(max_genus + 1):
                for x in fp.cobar_basis(j, k, max_weight, g, n):
                    if x.outer_weight == 1:
                        rep = orbit_representative(x)
                        if rep not in found:
                            found.add(rep)
                            queue.append(rep)
    while queue:
        x = queue.pop()
        for y in fp.total_differential(x):
            for i in range(y.outer_weight):
                bg, _, _ = y.block_graph(i)
                s, z = fp.canonicalize(fp.single_block(bg))
                if not s:
                    continue
                rep = orbit_representative(z)
                if rep not in found:
                    found.add(rep)
                    queue.append(rep)
    return sorted(found, key=fp._sort_key)


@dataclass
class AuditResult:
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def chain_map_audit(phi: PartialMorphism, elements) -> AuditResult:
    """d phi(x) = phi(D x) and equivariance on the given generators."""
    failures = []
    checked = 0
    for x in elements:
        j, k = x.arity
        try:
            lhs = end_differential(phi.value(x), phi.target.complex)
            rhs = phi.value_of(fp.total_differential(x), j, k, x.degree(phi.n) + 1)
        except InvariantError as exc:
            failures.append((x.serialize(), str(exc)))
            continue
        checked += 1
        if lhs != rhs:
            failures.append((x.serialize(), "chain map condition fails"))
        for sigma in itertools.permutations(range(j)):
            for tau in itertools.permutations(range(k)):
                s, y = fp.canonicalize(fp.act_legs(x, sigma, tau))
                lhs = phi.value(y).scale(s) if s else MultiMap.zero(phi.space, j, k, x.degree(phi.n))
                if lhs != sym_act(sigma, phi.value(x), tau):
                    failures.append((x.serialize(), f"not equivariant under {sigma}, {tau}"))
    return AuditResult(checked, failures)


@dataclass
class ResolutionResult:
    morphism: PartialMorphism
    reports: list
    audit: AuditResult
    stopped_at: int | None

    @property
    def all_filled(self) -> bool:
        return all(r.filled for r in self.reports)

    @property
    def nonzero_fillers(self) -> int:
        return sum(1 for r in self.reports if r.filled and r.weight > 1 and not r.filler.is_zero())

    def first_failure(self) -> ObstructionReport | None:
        return next((r for r in self.reports if not r.filled), None)


def run_resolution(target: FrobTarget, max_weight: int = 2, max_arity: int = fp.MAX_ARITY,
                   max_genus: int = 1, images: Mapping | None = None) -> ResolutionResult:
    """Extend through ``max_weight``; stop after the first weight with an unfillable obstruction."""
    if max_weight > fp.MAX_WEIGHT or max_arity > fp.MAX_ARITY or max_genus > fp.MAX_GENUS:
        raise ResourceError(f"bounds exceeded: weight <= {fp.MAX_WEIGHT}, j+k <= {fp.MAX_ARITY}, "
                            f"genus <= {fp.MAX_GENUS}")
    fp.check_n(target.n)
    phi = init_weight_zero(target, images, max_arity, max_genus)
    gens = generators(max_weight, max_arity, max_genus, target.n)
    reports = []
    for x in gens:
        if x.weight == 1:
            reports.append(ObstructionReport(x, 1, MultiMap.zero(target.space, *x.arity, x.degree(target.n) + 1),
                                             True, phi.generator_value(x)))
    stopped = None
    for w in range(2, max_weight + 1):
        level = [x for x in gens if x.weight == w]
        for x in level:
            reports.append(extend(phi, x))
        phi.current_weight = w
        if any(not r.filled for r in reports if r.weight == w):
            stopped = w
            break
    done = [x for x in gens if x in phi.values]
    audit = chain_map_audit(phi, done)
    return ResolutionResult(phi, reports, audit, stopped)


def write_report(result: ResolutionResult) -> str:
    """Line-delimited JSON: a versioned header, one record per generator, a summary."""
    lines = [json.dumps({"format": REPORT_VERSION, "target": result.morphism.target.name,
                         "n": result.morphism.n})]
    lines += [json.dumps(r.record(), sort_keys=True) for r in result.reports]
    lines.append(json.dumps({"summary": True, "generators": len(result.reports),
                             "all_filled": result.all_filled,
                             "nonzero_fillers": result.nonzero_fillers,
                             "stopped_at_weight": result.stopped_at,
                             "audit_checked": result.audit.checked,
                             "audit_ok": result.audit.ok}, sort_keys=True))
    return "\n".join(lines) + "\n"
