"""Command-line driver.

Exit codes: 0 success, 1 mathematical failure, 2 bad input, 3 resource bound.
``--format structured`` prints a versioned JSON header line followed by one
JSON record per line.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dilie, frob, frobalg, obstruct
from . import freeprop as fp
from .exactalg import InputError, InvariantError
from .graphcore import CompositionError, ResourceError, enumerate_graphs, parse_graph

FORMAT_VERSION = "properad-cli/1"
EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class MathFailure(Exception):
    """A computation finished and found a defect or obstruction."""


class Output:
    def __init__(self, fmt: str, command: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        if fmt == "structured":
            self._emit({"format": FORMAT_VERSION, "command": command})

    def _emit(self, rec):
        print(json.dumps(rec, sort_keys=True, default=_jsonable), file=self.stream)

    def line(self, text: str, **record):
        if self.fmt == "structured":
            self._emit(record or {"message": text})
        else:
            print(text, file=self.stream)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def _parse_label(text: str, n: int) -> frob.FrobBasisElement:
    try:
        j, k, g = (int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"expected 'j,k,g', got {text!r}") from None
    try:
        return frob.FrobBasisElement(j, k, g, n)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_algebra(source: str) -> frobalg.FrobeniusAlgebraData:
    try:
        return frobalg.load_algebra(source)
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    except InvariantError as exc:
        raise InputError(f"{source}: {exc}") from None


# ------------------------------------------------------------------ commands

def cmd_reduce(args, out: Output) -> int:
    g = frob.decorate(parse_graph(_read(args.graph)), args.n)
    nf = frob.reduce_to_normal_form(g, args.n)
    if args.all_orders:
        results = frob.all_reduction_results(g, args.n)
        if len(results) != 1:
            raise MathFailure(f"reduction orders disagree: {sorted(map(str, results))}")
    out.line(str(nf), j=nf.j, k=nf.k, g=nf.g, degree=nf.degree)
    return EXIT_OK


def cmd_compose(args, out: Output) -> int:
    upper = _parse_label(args.upper, args.n)
    lower = _parse_label(args.lower, args.n)
    res = frob.frob_partial(upper, lower, args.edges)
    out.line(str(res), j=res.j, k=res.k, g=res.g, degree=res.degree)
    return EXIT_OK


def cmd_dsq(args, out: Output) -> int:
    tc = fp.truncated_complex(args.j, args.k, args.max_weight, args.max_genus, args.n)
    failing = []
    for x in tc.basis:
        if fp.total_differential(fp.total_differential(x)):
            failing.append(x.serialize())
    ok = not failing and tc.square_is_zero()
    out.line(f"basis size: {len(tc.basis)}", basis_size=len(tc.basis), j=args.j, k=args.k,
             max_weight=args.max_weight, max_genus=args.max_genus)
    if out.fmt == "structured":
        for s in failing:
            out.line(s, failing=s)
    out.line(f"d^2 = 0: {'PASS' if ok else 'FAIL'}", result="PASS" if ok else "FAIL")
    if not ok:
        raise MathFailure("d^2 is not zero")
    return EXIT_OK


def cmd_resolve(args, out: Output) -> int:
    try:
        target = obstruct.load_target(args.target)
    except OSError as exc:
        raise InputError(f"cannot read {args.target}: {exc.strerror}") from None
    res = obstruct.run_resolution(target, args.max_weight, max_genus=args.max_genus)
    text = obstruct.write_report(res)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    if out.fmt == "structured":
        for line in text.splitlines():
            print(line, file=out.stream)
    else:
        fillers = sum(1 for r in res.reports if r.weight > 1)
        out.line(f"target {target.name}: {len(res.reports)} generators, {fillers} above weight one")
        out.line(f"all filled: {res.all_filled}")
        out.line(f"nonzero fillers: {res.nonzero_fillers}")
        bad = res.first_failure()
        if bad is not None:
            out.line(f"obstruction at weight {bad.weight}: {bad.element}")
        out.line(f"chain map audit: {'PASS' if res.audit.ok else 'FAIL'} ({res.audit.checked} generators)")
    if not (res.all_filled and res.audit.ok):
        raise MathFailure("resolution obstructed")
    return EXIT_OK


def cmd_euler(args, out: Output) -> int:
    A = _load_algebra(args.algebra)
    try:
        chi = frobalg.euler_check(A)
    except frobalg.StructureError as exc:
        raise MathFailure(str(exc)) from None
    out.line(f"chi = {chi}", chi=chi)
    return EXIT_OK


def _algebra_text(A: frobalg.FrobeniusAlgebraData) -> list[str]:
    names = A.space.names
    lines = [f"name {A.name}", f"n {A.n}",
             "basis " + " ".join(f"{nm}:{dg}" for nm, dg in A.space.basis),
             f"unit {names[A.unit]}"]
    for (a, b), row in sorted(A.mult.items()):
        for c, v in sorted(row.items()):
            lines.append(f"mult {names[a]} {names[b]} {names[c]} {v}")
    for (a, b), v in sorted(A.pairing.items()):
        lines.append(f"pair {names[a]} {names[b]} {v}")
    return lines


def cmd_dualize(args, out: Output) -> int:
    A = _load_algebra(args.algebra)
    D = frobalg.dualize(A)
    bad = frobalg.duality_check(A)
    for line in _algebra_text(D):
        out.line(line, record=line)
    out.line(f"duality intertwines genus operations: {'PASS' if not bad else 'FAIL'}",
             result="PASS" if not bad else "FAIL", failing=bad)
    if bad:
        raise MathFailure("duality map does not intertwine")
    return EXIT_OK


def cmd_dilie(args, out: Output) -> int:
    try:
        L = dilie.load_lie(args.lie)
    except OSError as exc:
        raise InputError(f"cannot read {args.lie}: {exc.strerror}") from None
    except dilie.NotSemisimpleError:
        raise
    except InvariantError as exc:
        raise InputError(f"{args.lie}: {exc}") from None
    if args.algebra:
        D, rep = dilie.tensor_action(_load_algebra(args.algebra), L, max_weight=args.max_weight)
    else:
        D = dilie.cobracket_from_killing(L)
        rep = dilie.dilie_relations_check(D)
    out.line(f"{D.name} (degree {D.n}, dimension {D.space.dim})", name=D.name, n=D.n, dim=D.space.dim)
    for name in sorted(rep.defects):
        d = rep.max_defect(name)
        out.line(f"{name}: max defect {d}", relation=name, max_defect=d)
    out.line(f"relations: {'PASS' if rep.ok else 'FAIL'}", result="PASS" if rep.ok else "FAIL")
    if not rep.ok:
        raise MathFailure("diLie relations fail")
    return EXIT_OK


def cmd_tensor_check(args, out: Output) -> int:
    rep = dilie.hadamard_check(args.max_arity, degrees=(args.n,) if args.n_given else (1, 2, 3))
    for j, k, n, dl, dr, gl, gr, ch in rep.rows:
        ok = dl == dr and gl == gr and ch
        out.line(f"({j},{k}) n={n}: dim {dl} vs {dr}, degree {gl} vs {gr}, characters "
                 f"{'agree' if ch else 'differ'}: {'PASS' if ok else 'FAIL'}",
                 j=j, k=k, n=n, dim_tensor=dl, dim_dilie=dr, degree_tensor=gl, degree_dilie=gr,
                 characters_agree=ch, result="PASS" if ok else "FAIL")
    out.line(f"tensor check: {'PASS' if rep.ok else 'FAIL'}", result="PASS" if rep.ok else "FAIL")
    if not rep.ok:
        raise MathFailure("Hadamard identity fails")
    return EXIT_OK


def cmd_graphs(args, out: Output) -> int:
    decs = {"mu": (2, 1), "delta": (1, 2)}
    gs = enumerate_graphs(args.j, args.k, args.max_vertices, decs)
    out.line(f"{len(gs)} graphs with {args.j} inputs, {args.k} outputs, "
             f"at most {args.max_vertices} vertices", count=len(gs))
    if args.list or out.fmt == "structured":
        for g in gs:
            out.line(g.serialize().rstrip(), graph=g.serialize())
    return EXIT_OK


# ------------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="degree parameter (default 2)")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    p = argparse.ArgumentParser(prog="properad", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", parents=[common], help="normal form of a generator graph")
    s.add_argument("graph")
    s.add_argument("--all-orders", action="store_true", help="fail unless every order agrees")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("compose", parents=[common], help="partial composition in Frob")
    s.add_argument("upper", help="j,k,g")
    s.add_argument("lower", help="j,k,g")
    s.add_argument("--edges", type=int, default=1)
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("dsq", parents=[common], help="audit (d + partial)^2 = 0")
    s.add_argument("j", type=int)
    s.add_argument("k", type=int)
    s.add_argument("max_weight", type=int, nargs="?", default=2)
    s.add_argument("--max-weight", dest="max_weight_flag", type=int)
    s.add_argument("--max-genus", type=int, default=1)
    s.set_defaults(func=cmd_dsq)

    s = sub.add_parser("resolve", parents=[common], help="run the obstruction algorithm")
    s.add_argument("target", help="shipped algebra, shipped fixture or file")
    s.add_argument("--max-weight", type=int, default=2)
    s.add_argument("--max-genus", type=int, default=1)
    s.add_argument("--report", help="write the line-delimited report here")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("euler", parents=[common], help="genus-one operation versus chi")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_euler)

    s = sub.add_parser("dualize", parents=[common], help="dual Frobenius algebra")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_dualize)

    s = sub.add_parser("dilie", parents=[common], help="Killing cobracket and relation check")
    s.add_argument("lie")
    s.add_argument("--algebra", help="check the structure on algebra (x) lie instead")
    s.add_argument("--max-weight", type=int, default=2)
    s.set_defaults(func=cmd_dilie)

    s = sub.add_parser("tensor-check", parents=[common], help="Frob0 (x) diLie versus diLie")
    s.add_argument("--max-arity", type=int, default=5)
    s.set_defaults(func=cmd_tensor_check)

    s = sub.add_parser("graphs", parents=[common], help="enumerate mu/delta graphs")
    s.add_argument("j", type=int)
    s.add_argument("k", type=int)
    s.add_argument("--max-vertices", type=int, default=3)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_graphs)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.n_given = args.n is not None
    if args.n is None:
        args.n = 2
    if getattr(args, "max_weight_flag", None) is not None:
        args.max_weight = args.max_weight_flag
    out = Output(args.format, args.command)
    try:
        return args.func(args, out)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MathFailure, dilie.NotSemisimpleError, obstruct.MorphismError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (InputError, CompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
