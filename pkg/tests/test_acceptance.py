"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from paramfeas import bn
from paramfeas.dsl import load
from paramfeas.elimination import INTEGER, REAL, eliminate_all, real_gap, rounding_gap
from paramfeas.exact import MultiPoly, binom_eval
from paramfeas.pipeline import check_fixed
from paramfeas.polyhedron import HPolyhedron, covering_check, integer_points
from paramfeas.positivity import BivarPoly, certify_positive

from helpers import fast_contains, fast_grid, random_halfplanes, random_polytope, scaled_rows

r, k = MultiPoly.var("r"), MultiPoly.var("k")


@pytest.fixture
def verdict(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_rounding_criterion_exhaustive(verdict):
    start = time.perf_counter()
    tuples = violations = fired = 0
    for b in range(1, 10):
        for d in range(1, 10):
            for a in range(-50, 51):
                for c in range(-50, 51):
                    tuples += 1
                    if rounding_gap(a, b, c, d) < 0:
                        continue
                    fired += 1
                    lo, hi = -(-c // d), a // b  # ceil(c/d), floor(a/b)
                    if not any(c <= n * d and n * b <= a for n in range(lo, hi + 1)):
                        violations += 1
    elapsed = time.perf_counter() - start
    verdict(1, violations == 0 and elapsed < 60,
            f"{tuples} tuples, criterion held for {fired}, {violations} violations, {elapsed:.1f} s")


def test_criterion_2_real_feasible_integer_empty(verdict):
    a, b, c, d = 7, 3, 11, 5
    n = MultiPoly.var("n")
    system = [a - b * n, d * n - c]
    real = eliminate_all(system, ["n"], REAL)
    integer = eliminate_all(system, ["n"], INTEGER)
    scan = list(integer_points(HPolyhedron.from_rows([((-b,), -a), ((d,), c)])))
    ok = (real_gap(a, b, c, d) == 2 and rounding_gap(a, b, c, d) == -6
          and (b - 1) * (d - 1) == 8 and real == [] and integer == [MultiPoly.const(-1)]
          and scan == [])
    verdict(2, ok, f"a*d - b*c = {real_gap(a, b, c, d)}, correction {(b - 1) * (d - 1)}, "
                   f"integer points in [11/5, 7/3]: {scan}")


def test_criterion_3_covering_vs_grid(verdict):
    rng = random.Random(20240311)
    start = time.perf_counter()
    discrepancies = covered = 0
    for _ in range(200):
        P = random_polytope(rng, 2, 8)
        C1, C2 = random_halfplanes(rng), random_halfplanes(rng)
        res = covering_check(P, C1, C2)
        if res.covered:
            covered += 1
            rows1, rows2 = scaled_rows(C1, 8), scaled_rows(C2, 8)
            if any(not (fast_contains(rows1, X) or fast_contains(rows2, X)) for X in fast_grid(P)):
                discrepancies += 1
        elif not (P.contains(res.witness) and not C1.contains(res.witness)
                  and not C2.contains(res.witness)):
            discrepancies += 1
    elapsed = time.perf_counter() - start
    verdict(3, discrepancies == 0 and elapsed < 120,
            f"200 instances ({covered} covered), {discrepancies} discrepancies, {elapsed:.1f} s")


def _random_poly(rng):
    p = MultiPoly()
    for _ in range(rng.randint(1, 6)):
        i = rng.randint(0, 4)
        j = rng.randint(0, 4 - i)
        p = p + (r ** i) * (k ** j) * rng.randint(-9, 9)
    return p


def _positive_at_samples(p: MultiPoly, r0: int, k0: int, rng, count=10_000, den=997) -> bool:
    # exact sign at r = r0 + R/den, k = k0 + K/den, cleared of denominators
    coeffs = BivarPoly.from_multipoly(p).coeffs
    deg = max(i + j for i, j in coeffs)
    terms = [(int(c), i, j) for (i, j), c in coeffs.items()]
    for _ in range(count):
        R = r0 * den + rng.randint(0, 100 * den)
        K = k0 * den + rng.randint(0, 100 * den)
        if sum(c * R ** i * K ** j * den ** (deg - i - j) for c, i, j in terms) <= 0:
            return False
    return True


def test_criterion_4_certificate_soundness(verdict):
    rng = random.Random(4)
    suite = [(_random_poly(rng), rng.randint(0, 10), rng.randint(0, 10)) for _ in range(100)]
    suite += [(r + k, 1, 1), (r * k - 100, 11, 10), (r * k - 100, 1, 1), (r * r - k, 2, 1)]
    certified = violations = 0
    for p, r0, k0 in suite:
        if not certify_positive(p, r0, k0).certified:
            continue
        certified += 1
        if not _positive_at_samples(p, r0, k0, rng):
            violations += 1
    handcrafted_ok = (certify_positive(r + k, 1, 1).certified
                      and certify_positive(r * k - 100, 11, 10).certified
                      and not certify_positive(r * k - 100, 1, 1).certified)
    verdict(4, violations == 0 and handcrafted_ok,
            f"{len(suite)} polynomials, {certified} certified, {violations} violations "
            f"over 10000 samples each")


def test_criterion_5_mrc_anecdote(verdict, demos):
    start = time.perf_counter()
    b = binom_eval(17, 4)
    d, g = bn.mrc_vertex_demo(17, 4)
    fixed = check_fixed(load((demos / "mrc_demo.pf").read_text()), {"r": 17, "k": 4})
    elapsed = time.perf_counter() - start
    vertex = next((v for v in fixed.vertices if v.coords == (d, g)), None)
    ok = (b == 5985 and (d, g) == (Fraction(50711, 25), Fraction(53244, 25))
          and d.denominator != 1 and g.denominator != 1
          and 18 * d - 17 * g - 17 * 18 == 0 and 4 * d + 1 - g == 5985
          and vertex is not None and not vertex.is_integral and fixed.satisfied
          and elapsed < 1)
    verdict(5, ok, f"binom(21, 4) = {b}, vertex ({d}, {g}), lattice search satisfied="
                   f"{fixed.satisfied}, {elapsed * 1000:.0f} ms")


def test_criterion_6_bn_library(verdict):
    tables = {
        "interpolation_nonspecial": ((5, 2, 3), (6, 2, 4), (7, 2, 5)),
        "points_nonspecial": ((5, 2, 3), (7, 2, 5)),
        "quadric_intersection_p3": ((4, 1), (5, 2), (6, 2), (6, 4), (7, 5), (8, 6)),
        "plane_intersection_p3": ((6, 4),),
        "hyperplane_intersection_p4": ((8, 5), (9, 6), (10, 7)),
        "interpolation_space_curve": ((5, 2), (6, 4)),
        "interpolation_p4": ((6, 2),),
        "interpolation_p4_twist": ((6, 2), (8, 5), (9, 6), (10, 7)),
    }
    ok = (bn.rho(5, 2, 3) == 2 and bn.max_points_bound(5, 2, 3) == 10
          and bn.max_points_guaranteed(5, 2, 3) == 7
          and all(bn.exceptions(name) == rows for name, rows in tables.items())
          and sorted(tables) == bn.contexts())
    verdict(6, ok, f"rho = {bn.rho(5, 2, 3)}, bound = {bn.max_points_bound(5, 2, 3)}, "
                   f"guaranteed = {bn.max_points_guaranteed(5, 2, 3)}, {len(tables)} tables equal")


def test_criterion_7_end_to_end(verdict, demos):
    expected = {"toy_interval": "Certified", "patched": "CertifiedWithPatches", "refuted": "Refuted"}
    start = time.perf_counter()
    problems = []
    for name, want in expected.items():
        outs = [subprocess.run([sys.executable, "-m", "paramfeas", "check", str(demos / f"{name}.pf"),
                                "--format", "json"], capture_output=True).stdout for _ in range(2)]
        got = json.loads(outs[0])["verdict"]
        if got != want:
            problems.append(f"{name}: {got} != {want}")
        if outs[0] != outs[1]:
            problems.append(f"{name}: reports differ between runs")
    elapsed = time.perf_counter() - start
    verdict(7, not problems and elapsed < 60,
            f"{', '.join(f'{n} -> {v}' for n, v in expected.items())}; "
            f"{'; '.join(problems) or 'byte-identical reports'}, {elapsed:.1f} s")
