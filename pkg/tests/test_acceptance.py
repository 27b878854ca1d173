"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line through the ``acceptance_record``
fixture; the lines are repeated in the terminal summary.
"""

import itertools
import time

import pytest

from properad import dilie, freeprop, frob, frobalg, obstruct
from properad import graphcore as gc
from properad.exactalg import ZERO


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def test_criterion_01_degree_table(acceptance_record):
    def run():
        bad = []
        for n in (1, 2, 3):
            for j in range(1, 5):
                for k in range(1, 5):
                    stated = {(k - 1) * n + g * n: g for g in range(4)}
                    # every degree in a window around the stated ones
                    for deg in range(-2 * n, (k + 5) * n):
                        got = frob.basis_in_degree(j, k, deg, n)
                        if deg in stated:
                            if got != [frob.FrobBasisElement(j, k, stated[deg], n)]:
                                bad.append((n, j, k, deg))
                        elif deg < (k + 3) * n and got:
                            bad.append((n, j, k, deg))
        return bad

    bad, secs = _timed(run)
    acceptance_record(1, "one basis element per genus in degree (k-1)n+gn", not bad and secs < 1,
                      f"{len(bad)} mismatches", secs)
    assert not bad
    assert secs < 1


DECORATIONS = {"mu": (2, 1), "delta": (1, 2), "eps": (1, 0)}


def _graft_cases(max_vertices):
    pool = []
    for j in range(1, 4):
        for k in range(0, 4):
            pool.extend(gc.enumerate_graphs(j, k, 3, DECORATIONS))
    by_outputs = {}
    for i, g in enumerate(pool):
        if g.n_outputs > 0:
            by_outputs.setdefault(g.n_outputs, []).append(i)
    for lower in pool:
        m = lower.n_inputs
        splits = [(m,)] + [(a, m - a) for a in range(1, m // 2 + 1)]
        for split in splits:
            choices = [by_outputs.get(c, []) for c in split]
            for idx in itertools.product(*choices):
                if len(idx) == 2 and split[0] == split[1] and idx[0] > idx[1]:
                    continue
                ups = [pool[i] for i in idx]
                if sum(u.n_vertices for u in ups) + lower.n_vertices > max_vertices:
                    continue
                for matching in itertools.permutations(range(m)):
                    yield gc.GraftingPattern(tuple(ups), lower, matching)


def test_criterion_02_genus_formula(acceptance_record):
    def run():
        checked, bad = 0, []
        for p in _graft_cases(5):
            g = gc.graft(p)
            expect = sum(gc.loop_genus(u) for u in p.upper) + gc.loop_genus(p.lower) \
                + p.lower.n_inputs - len(p.upper)
            checked += 1
            if gc.loop_genus(g) != expect or g.n_vertices > 5:
                bad.append(p)
        return checked, bad

    (checked, bad), secs = _timed(run)
    ok = checked > 0 and not bad and secs < 60
    acceptance_record(2, "genus of a grafting", ok, f"{checked} patterns, {len(bad)} failures", secs)
    assert checked > 1000
    assert not bad
    assert secs < 60


def test_criterion_03_confluence(acceptance_record):
    rep, secs = _timed(lambda: frob.confluence_audit(5))
    ok = rep.ok and rep.shapes > 0 and secs < 300
    acceptance_record(3, "unique normal form under all reduction orders", ok,
                      f"{rep.shapes} shapes, {len(rep.failures)} failures", secs)
    assert rep.ok
    assert secs < 300


def test_criterion_04_square_zero(acceptance_record):
    audit, secs = _timed(lambda: freeprop.square_audit(4, 3, 1, 2))
    ok = audit.ok and secs < 300
    acceptance_record(4, "(d + boundary)^2 = 0 for j+k <= 4, weight <= 3", ok,
                      f"{audit.checked} elements, {len(audit.failures)} failures", secs)
    assert audit.checked > 0
    assert audit.ok
    assert secs < 300


EULER = {"s2": 2, "t2": 0, "s3": 0, "cp2": 3}


def _handle_top(A):
    handle = frobalg.genus_operation(A, 1, 1, 1)
    image = [ZERO] * A.dim
    for ((c,), (a,)), v in handle.tuples().items():
        if a == A.unit:
            image[c] += v
    return A.top_coefficient(image)


def test_criterion_05_euler(acceptance_record):
    def run():
        rows = {}
        for name, chi in EULER.items():
            A = frobalg.load_algebra(name)
            rows[name] = (frobalg.euler_check(A), _handle_top(A), chi)
        return rows

    rows, secs = _timed(run)
    ok = all(a == b == c for a, b, c in rows.values()) and secs < 1
    acceptance_record(5, "handle operator on the unit gives chi", ok,
                      ", ".join(f"{k}={v[0]}" for k, v in rows.items()), secs)
    for a, b, c in rows.values():
        assert a == b == c
    assert secs < 1


@pytest.mark.parametrize("name", ["s2", "t2"])
def test_criterion_06_strict_resolution(name, acceptance_record):
    res, secs = _timed(lambda: obstruct.run_resolution(obstruct.load_target(name), max_weight=3))
    ok = res.all_filled and res.nonzero_fillers == 0 and res.audit.ok and secs < 600
    acceptance_record(6, f"strict target {name} resolves with zero fillers", ok,
                      f"{len(res.reports)} generators, {res.nonzero_fillers} nonzero fillers, "
                      f"audit {'ok' if res.audit.ok else 'failed'}", secs)
    assert res.all_filled
    assert res.nonzero_fillers == 0
    assert res.audit.ok
    assert secs < 600


def test_criterion_07_nonstrict(acceptance_record):
    def run():
        good = obstruct.run_resolution(obstruct.load_target("perturbed"), max_weight=3)
        bad = obstruct.run_resolution(obstruct.load_target("broken"), max_weight=3)
        return good, bad

    (good, bad), secs = _timed(run)
    failure = bad.first_failure()
    ok = (good.all_filled and good.nonzero_fillers > 0 and good.audit.ok
          and failure is not None and failure.weight == 2
          and failure.homology_class["betti"] >= 1 and failure.homology_class["nonzero"]
          and secs < 600)
    acceptance_record(7, "perturbed target needs nonzero fillers, broken target is obstructed", ok,
                      f"{good.nonzero_fillers} nonzero fillers; obstruction at weight "
                      f"{None if failure is None else failure.weight}", secs)
    assert good.all_filled and good.audit.ok
    assert good.nonzero_fillers > 0
    assert failure is not None and failure.weight == 2
    assert failure.homology_class["nonzero"]
    assert secs < 600


def test_criterion_08_killing_cobracket(acceptance_record):
    def run():
        reps = {}
        for name in ("sl2", "so3"):
            D = dilie.cobracket_from_killing(dilie.load_lie(name))
            reps[name] = dilie.dilie_relations_check(D)
        try:
            dilie.cobracket_from_killing(dilie.load_lie("heisenberg3"))
            rejected = False
        except dilie.NotSemisimpleError:
            rejected = True
        return reps, rejected

    (reps, rejected), secs = _timed(run)
    keys = ("cojacobi", "coantisymmetry", "compatibility")
    zero = all(r.defects[k].is_zero() for r in reps.values() for k in keys)
    ok = zero and rejected and secs < 1
    acceptance_record(8, "Killing cobracket satisfies the relations; heisenberg3 rejected", ok,
                      f"defects zero: {zero}, degenerate rejected: {rejected}", secs)
    assert zero and rejected
    assert secs < 1


def test_criterion_09_hadamard(acceptance_record):
    rep, secs = _timed(lambda: dilie.hadamard_check(5))
    ok = rep.ok and len(rep.rows) > 0 and secs < 60
    acceptance_record(9, "Frob0 tensor diLie(0) matches diLie(n) for k+l <= 5", ok,
                      f"{len(rep.rows)} components compared", secs)
    assert all(r[3] == r[4] and r[5] == r[6] for r in rep.rows)
    assert rep.ok
    assert secs < 60


def test_criterion_10_duality(acceptance_record):
    def run():
        return {name: frobalg.duality_check(frobalg.load_algebra(name), 4, 2)
                for name in ("s2", "s3", "t2", "cp2")}

    bad, secs = _timed(run)
    ok = not any(bad.values()) and secs < 60
    acceptance_record(10, "dual algebra intertwines genus operations", ok,
                      ", ".join(f"{k}: {len(v)} bad" for k, v in bad.items()), secs)
    assert not any(bad.values())
    assert secs < 60
