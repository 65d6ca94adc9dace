"""End-to-end acceptance checks, one test per criterion.

Each test prints a ``criterion k: PASS`` or ``criterion k: FAIL`` line to the
terminal (visible even without ``-s``) before asserting.
"""

import random
import time
from fractions import Fraction

import pytest

from star_battery import glue_battery, star_battery, straight_line_counterexamples
from toricgwpt.exact_arith import QForm
from toricgwpt.lattice import IntegerMatrix, random_unimodular, smith_normal_form
from toricgwpt.poset_enum import enumerate_4valent_curves, one_step_degenerations
from toricgwpt.series_engine import (correspondence_check, fit_prefactor, glue_degeneration,
                                     is_laurent_polynomial, linear_star_series, principal_gw,
                                     principal_pt, principal_pt_displayed)
from toricgwpt.stars_complexes import Star, is_stable, is_visible_complex, multiplicity_and_normalize


@pytest.fixture(scope="module")
def started():
    return time.perf_counter()


@pytest.fixture
def report(capsys, started):
    def emit(k: int, failures: list):
        with capsys.disabled():
            status = "PASS" if not failures else f"FAIL ({len(failures)} failing: {failures[:3]})"
            print(f"\ncriterion {k}: {status}")
        assert not failures
    return emit


def test_criterion_1_principal_family(report):
    t0 = time.perf_counter()
    bad = [N for N in range(1, 9)
           if not correspondence_check(principal_pt(N), principal_gw(N, 24), N + 2, 1 - N, 24)]
    if time.perf_counter() - t0 > 1.0:
        bad.append("slower than 1 s")
    report(1, bad)


def test_criterion_2_first_member(report):
    bad = []
    pt = principal_pt(1)
    if pt.form != QForm.from_q({1: 1, 2: 1}) or pt.form != principal_pt_displayed(1).form:
        bad.append("pt form")
    gw = principal_gw(1, 6).series
    expected = {-2: Fraction(1), -1: 0, 0: Fraction(-1, 24), 1: 0, 2: Fraction(1, 1920)}
    bad += [k for k, c in expected.items() if gw[k] != c]
    report(2, bad)


def test_criterion_3_linear_and_self_gluing(report):
    bad = []
    for d in range(1, 7):
        gw = linear_star_series("gw", d)
        if gw.series[-2] != Fraction(1, d) or any(c for k, c in gw.series.items() if k != -2):
            bad.append(("gw", d))
        if linear_star_series("pt", d).form != QForm.from_q({d: Fraction((-1) ** (d - 1), d)}):
            bad.append(("pt", d))
        for ell in (2, 3):
            if not linear_star_series("gw", d, ell).series.is_zero() or \
                    not linear_star_series("pt", d, ell).form.is_zero():
                bad.append(("ell", d, ell))
    for d in range(1, 9):
        for side in ("gw", "pt"):
            a = linear_star_series(side, d)
            g = glue_degeneration(side, [a, a], ((d,),))
            same = g.series == a.series if side == "gw" else g.form == a.form
            if not same or g.data != a.data:
                bad.append(("glue", side, d))
    report(3, bad)


def _mismatched_pairs(seed: int, count: int):
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < count:
        kind = rng.randrange(4)
        a, b = rng.randint(1, 8), rng.randint(1, 8)
        if kind == 0 and a != b:
            pairs.append((principal_pt(a), principal_gw(b)))
        elif kind == 1:
            pairs.append((principal_pt(a), linear_star_series("gw", min(b, 6))))
        elif kind == 2:
            pairs.append((linear_star_series("pt", min(a, 6)), principal_gw(b)))
        elif kind == 3 and min(a, 6) != min(b, 6):
            pairs.append((linear_star_series("pt", min(a, 6)), linear_star_series("gw", min(b, 6))))
    return pairs


def test_criterion_4_prefactor_fit(report):
    bad = []
    for N in range(1, 9):
        if fit_prefactor(principal_pt(N), principal_gw(N)) != (N + 2, 1 - N, 1):
            bad.append(("principal", N))
    for d in range(1, 7):
        if fit_prefactor(linear_star_series("pt", d), linear_star_series("gw", d)) != (2 * d, 2 - 2 * d, 1):
            bad.append(("linear", d))
    for i, (pt, gw) in enumerate(_mismatched_pairs(2024, 20)):
        if fit_prefactor(pt, gw) is not None:
            bad.append(("mismatch", i))
    report(4, bad)


def test_criterion_5_multiplicity_and_smith(report):
    bad = []
    rng = random.Random(5)
    for trial in range(100):
        n, m = rng.randint(1, 4), rng.randint(1, 5)
        s = Star.full_boundary([((1, 0, 0), n), ((0, 1, 0), m * n), ((-1, -m, 0), n)])
        t = s.transform(random_unimodular(3, rng))
        r = multiplicity_and_normalize(t)
        rows = [r.U @ t.weighted_vectors()[i] for i in r.order]
        if (r.n, r.m, r.N) != (n, m, m * n * n) or \
                not r.exact or rows != [(n, 0, 0), (0, m * n, 0), (-n, -m * n, 0)]:
            bad.append(("star", trial))
    for trial in range(1000):
        rows_n, cols_n = rng.randint(1, 5), rng.randint(1, 5)
        M = IntegerMatrix([[rng.randint(-20, 20) for _ in range(cols_n)] for _ in range(rows_n)], cols_n)
        snf = smith_normal_form(M)
        if snf.U @ M @ snf.V != snf.D or abs(snf.U.det()) != 1 or abs(snf.V.det()) != 1:
            bad.append(("snf", trial))
    report(5, bad)


def test_criterion_6_rigid_curve_counts(report):
    bad = []
    for n in range(1, 9):
        if len(enumerate_4valent_curves(n, "I")) != 1:
            bad.append(("I", n))
        if len(enumerate_4valent_curves(n, "II")) != 1 + (n - 1) // 2:
            bad.append(("II", n))
    if len(enumerate_4valent_curves(2, "II")) != 1 or len(enumerate_4valent_curves(5, "II")) != 3:
        bad.append("examples")
    report(6, bad)


def test_criterion_7_stable_implies_visible(report):
    bad = []
    for i, star in enumerate(star_battery()):
        for bound in (2, 3):
            cat = one_step_degenerations(star, bound)
            # with no markings every stable degeneration must be visible
            if cat.invisible:
                bad.append(("invisible", i, bound))
            bad += [("catalog", i, bound) for c in cat if not (is_stable(c) and is_visible_complex(c))]
    for j, c in enumerate(straight_line_counterexamples()):
        if is_stable(c) or is_visible_complex(c):
            bad.append(("line", j))
    report(7, bad)


def test_criterion_8_laurent_polynomiality(report, started):
    bad = [N for N in range(1, 9) if not is_laurent_polynomial(principal_pt(N))]
    for i, (series, mu) in enumerate(glue_battery()):
        if not is_laurent_polynomial(glue_degeneration("pt", series, mu)):
            bad.append(("glue", i))
    elapsed = time.perf_counter() - started
    if elapsed > 10:
        bad.append(f"acceptance run took {elapsed:.1f} s")
    report(8, bad)
