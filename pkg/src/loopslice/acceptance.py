"""End-to-end acceptance checks shared by ``loopslice verify-all`` and the test suite.

Each check is pure and takes its own seeded RNG, so they can run in any order.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import branching, fibers, graded, lattice, slodowy
from .exactnum import Poly, charpoly, resultant
from .lattice import DEFAULT_PRECISION, Coweight


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.name}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "details": self.details,
        }


class _Check:
    """Collects failures without stopping at the first one."""

    def __init__(self):
        self.failures: list[str] = []
        self.notes: list[str] = []

    def require(self, cond: bool, msg: str):
        if not cond:
            self.failures.append(msg)

    def note(self, msg: str):
        self.notes.append(msg)


GL_FIXTURES = {
    (1, 2): [(2,), (-1,), (0,)],
    (2, 3): [(2, -1), (1, 1), (0, -2)],
    (2, 4): [(3, -2), (2, 1)],
    (3, 4): [(2, 0, -1), (1, 1, 1)],
}

OSP_FIXTURES = {
    (1, 2): [((2,), ()), ((), (1,))],
    (2, 3): [((2,), (1,)), ((3, 1), ()), ((), (2,))],
}


def criterion_1(rng: random.Random, precision: int = DEFAULT_PRECISION, trials: int = 200) -> _Check:
    chk = _Check()
    for (n, m), fixtures in GL_FIXTURES.items():
        for c in fixtures:
            nf = lattice.gl_normal_form_pair(Coweight(c), m)
            for _ in range(trials):
                q = lattice.random_gl_transform(n, m, rng).apply(nf)
                cw, tr = lattice.gl_normal_form(q, precision)
                chk.require(cw.entries == c, f"({n},{m}) fixture {c} reduced to {cw}")
                reduced = tr.apply(q)
                again, _ = lattice.gl_normal_form(reduced, precision)
                chk.require(again == cw, f"({n},{m}) reduction not idempotent: {cw} then {again}")
        chk.note(f"({n},{m}): {trials} transforms of each of {len(fixtures)} fixtures")
    return chk


def criterion_2(rng: random.Random, precision: int = DEFAULT_PRECISION, trials: int = 100) -> _Check:
    chk = _Check()
    for (n, m), fixtures in OSP_FIXTURES.items():
        for a, b in fixtures:
            v = lattice.osp_block_form(a, b, n, m)
            expected = tuple(sorted(a + b, reverse=True)) + (0,) * (n - len(a) - len(b))
            for _ in range(trials):
                w = lattice.random_osp_transform(n, m, rng).apply_matrix(v)
                cw = lattice.sp_so_normal_form(w, precision)
                chk.require(cw.entries == expected, f"({n},{m}) a={a} b={b} reduced to {cw}")
            chk.note(f"({n},{m}) a={a} b={b}: coweight {Coweight(expected)}")
    return chk


def criterion_3(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    for m in range(1, 5):
        for n in range(0, m):
            fac = fibers.factorization(n, m)
            d = fibers.derive_constants(n, m)
            chk.require(fac.holds(), f"({n},{m}) identity fails")
            if n:
                # independent numeric specialization of the pairing constant
                chk.require(d[-1] == fibers.pairing_constant(n, m), f"({n},{m}) pairing constant mismatch")
            chk.note(f"({n},{m}): d = {tuple(str(x) for x in d)}")
    return chk


def _random_root(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.choice((1, 1, 2, 3)))


def random_generic_pair(n: int, m: int, rng: random.Random) -> tuple[Poly, Poly]:
    """Monic ``f`` with ``n`` distinct rational roots and monic ``g`` of degree ``m`` with ``res(f, g) != 0``."""
    roots: list[Fraction] = []
    while len(roots) < n:
        r = _random_root(rng)
        if r not in roots:
            roots.append(r)
    f = Poly.from_roots(roots)
    while True:
        g = Poly([Fraction(rng.randint(-5, 5), rng.choice((1, 2))) for _ in range(m)] + [1])
        if resultant(f, g) != 0:
            return f, g


def criterion_4(rng: random.Random, precision: int = DEFAULT_PRECISION, trials: int = 100) -> _Check:
    chk = _Check()
    fixture = fibers.generic_fiber(Poly([-1, 1]), Poly([1, -3, 1]))
    text = fixture.point_str()
    chk.require(text == "(1, 2, 1, 1)", f"worked fixture gave {text}")
    chk.note(f"(lam-1, lam^2-3lam+1) -> point {text}")
    for n, m in [(1, 2), (1, 3), (2, 3), (2, 4)]:
        for _ in range(trials):
            f, g = random_generic_pair(n, m, rng)
            desc = fibers.generic_fiber(f, g)
            inv = fibers.invariant_map(desc.point)
            chk.require(inv.f == f and inv.g == g, f"({n},{m}) round trip failed for f={f}, g={g}")
            chk.require(desc.point.in_slice(), f"({n},{m}) point left the slice")
        chk.note(f"({n},{m}): {trials} round trips")
    return chk


def criterion_5(rng: random.Random, precision: int = DEFAULT_PRECISION, samples: int = 50) -> _Check:
    chk = _Check()
    f, g = Poly([-1, 1]), Poly.from_roots([1, 2])
    desc = fibers.resultant_stratum_fiber(f, g)
    inside = 0
    for i in range(samples):
        X = Fraction(rng.randint(-4, 4), rng.choice((1, 2)))
        Y = Fraction(rng.randint(-4, 4), rng.choice((1, 3)))
        # force both cases to occur
        if i % 3 == 0:
            X = Fraction(0)
        elif i % 3 == 1:
            Y = Fraction(0)
        elif X * Y == 0:
            X, Y = X or 1, Y or 1
        point = fibers.resultant_fiber_point(desc, X, Y)
        member = fibers.in_fiber(point, f, g)
        inside += member
        chk.require(member == (X * Y == 0), f"X={X}, Y={Y}: membership {member}")
    chk.note(f"{inside} of {samples} samples in the fiber")
    return chk


def criterion_6(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    f, g = Poly([1, -2, 1]), Poly([1, 0, 0, 1])
    desc = fibers.double_root_fiber(f, g)
    p = desc.point
    chk.require(charpoly(p.matrix()) == g, f"char poly of the point is {charpoly(p.matrix())}")
    chk.require(charpoly(p.x) == f, f"char poly of x is {charpoly(p.x)}")
    chk.require(p.in_slice(), "point is not in the slice")
    chk.note(f"point {desc.point_str()}")
    return chk


def criterion_7(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    for m in range(2, 7):
        for n in range(1, m):
            try:
                stalk = graded.stalk_ic(n, m)
            except Exception as exc:  # report, keep going
                chk.require(False, f"({n},{m}) stalk: {exc}")
                continue
            for name, form in graded.stalk_closed_forms(n, m).items():
                chk.require(stalk == form, f"({n},{m}) stalk differs from {name}")
            expected = list(range(m - n - 1, n - m, -2))
            got = graded.decomposition_remainder(n, m)
            chk.require(got == expected, f"({n},{m}) remainder {got} != {expected}")
    chk.note("stalks checked for all n < m <= 6")
    return chk


def criterion_8(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    for m in range(2, 7):
        for n in range(1, m):
            series = graded.ext_poincare(n, m)
            low = series.min_degree()
            lead = series.coefficients(low).get(low, 0)
            v_deg = slodowy.grading_of(slodowy.build_slice_chart(n, m), "v_1")
            chk.require(low == m - n + 1, f"({n},{m}) minimal degree {low}")
            chk.require(lead == 1, f"({n},{m}) leading coefficient {lead}")
            chk.require(low == v_deg, f"({n},{m}) v-grading {v_deg} != {low}")
    return chk


def criterion_9(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    for m in range(1, 6):
        rep = graded.gl1_algebra_report(m, order=30)
        chk.require(rep.ok, f"m={m}: mismatch at degree {rep.first_mismatch}, euler {rep.euler_ok}")
        chk.require(graded.euler_elimination_holds(m, order=30), f"m={m}: elimination identity fails")
    return chk


def criterion_10(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    for m in range(2, 7):
        for n in range(1, m):
            got = branching.graded_restriction(branching.standard(m), n)
            want = branching.expected_standard_restriction(m, n)
            chk.require(got == want, f"std_{m} -> GL_{n}: {got}")
    weights = 0
    for m in range(2, 6):
        for lam in _oracle_weights(m):
            w = branching.DominantWeight(lam)
            for n in range(1, m):
                graded_ = branching.graded_restriction(w, n).at_q_equals_one()
                oracle = branching.classical_branching(w, n)
                chk.require(graded_ == oracle, f"{w} -> GL_{n}: q=1 {graded_} vs oracle {oracle}")
            weights += 1
    chk.note(f"q=1 compared with the weight oracle on {weights} weights")
    return chk


def _oracle_weights(m: int) -> list[tuple[int, ...]]:
    base = [
        (1,) + (0,) * (m - 1),
        (1,) * m,
        (2,) + (0,) * (m - 1),
        (1, 1) + (0,) * (m - 2),
        (2, 1) + (0,) * (m - 2),
        (0,) * (m - 1) + (-1,),
        (1,) + (0,) * (m - 2) + (-1,),
    ]
    return sorted(set(base))


def criterion_11(rng: random.Random, precision: int = DEFAULT_PRECISION) -> _Check:
    chk = _Check()
    for k in range(1, 13):
        chk.require(slodowy.principal_sl2(k).check(), f"principal triple k={k} fails")
    for m in range(2, 7):
        for n in range(0, m):
            e, h, f = slodowy.embedded_triple(n, m)
            tri = slodowy.Sl2Triple(*(tuple(map(tuple, x)) for x in (e, h, f)))
            chk.require(tri.check(), f"embedded triple ({n},{m}) fails")
            chart = slodowy.build_slice_chart(n, m)
            dim = slodowy.centralizer_dimension(n, m)
            chk.require(len(chart.coords) == dim, f"({n},{m}) chart {len(chart.coords)} != centralizer {dim}")
            chk.require(slodowy.SlicePoint.zero(chart).in_slice(), f"({n},{m}) base point not in slice")
    return chk


CRITERIA: dict[int, tuple[str, Callable]] = {
    1: ("GL normal-form invariance", criterion_1),
    2: ("Sp/SO block reduction", criterion_2),
    3: ("factorization identity", criterion_3),
    4: ("generic fiber round trip", criterion_4),
    5: ("resultant stratum membership", criterion_5),
    6: ("double-root fiber", criterion_6),
    7: ("graded stalk closed forms", criterion_7),
    8: ("Ext minimal degree", criterion_8),
    9: ("n=1 algebra series", criterion_9),
    10: ("graded branching", criterion_10),
    11: ("sl2 and centralizer sanity", criterion_11),
}


def run_criterion(number: int, seed: int = 0, precision: int = DEFAULT_PRECISION) -> CriterionResult:
    name, fn = CRITERIA[number]
    rng = random.Random(seed * 1000 + number)
    start = time.perf_counter()
    try:
        chk = fn(rng, precision)
        failures, notes = chk.failures, chk.notes
    except Exception as exc:  # a crash is a failure, not an abort of the suite
        failures, notes = [f"{type(exc).__name__}: {exc}"], []
    elapsed = time.perf_counter() - start
    return CriterionResult(number, name, not failures, notes + failures[:10], elapsed)


def run_all(seed: int = 0, precision: int = DEFAULT_PRECISION, only=None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) if only is None else sorted(only)
    return [run_criterion(k, seed, precision) for k in numbers]
