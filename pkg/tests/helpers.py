"""Random instance generators and brute-force oracles shared by the tests."""
import itertools
import math
import random
from fractions import Fraction

from paramfeas.polyhedron import HPolyhedron, check_bounded


def random_rows(rng: random.Random, dim: int, count: int, lo=-5, hi=5):
    rows = []
    for _ in range(count):
        normal = tuple(rng.randint(lo, hi) for _ in range(dim))
        if any(normal):
            rows.append((normal, rng.randint(lo, hi)))
    return rows


def random_polytope(rng: random.Random, dim: int = 2, max_rows: int = 8) -> HPolyhedron:
    """A nonempty bounded polytope with at most ``max_rows`` rows, coefficients in [-5, 5]."""
    while True:
        rows = []
        for i in range(dim):
            e = tuple(1 if j == i else 0 for j in range(dim))
            rows.append((e, rng.randint(-5, 0)))
            rows.append((tuple(-c for c in e), -rng.randint(1, 5)))
        rows += random_rows(rng, dim, rng.randint(0, max_rows - 2 * dim))
        P = HPolyhedron.from_rows(rows)
        if not P.is_empty() and check_bounded(P):
            return P


def random_halfplanes(rng: random.Random, dim: int = 2) -> HPolyhedron:
    return HPolyhedron.from_rows(random_rows(rng, dim, rng.randint(1, 3)) or [((1,) * dim, -5)])


def grid(P: HPolyhedron, step=Fraction(1, 8)):
    """Points of ``P`` on the ``step`` lattice inside its vertex bounding box."""
    from paramfeas.polyhedron import enumerate_vertices
    vs = enumerate_vertices(P)
    axes = []
    for i in range(P.dim):
        lo = min(v.coords[i] for v in vs)
        hi = max(v.coords[i] for v in vs)
        start = -((-lo) // step) * step  # smallest multiple of step >= lo
        n = int((hi - start) / step)
        axes.append([start + j * step for j in range(n + 1)])
    for x in itertools.product(*axes):
        if P.contains(x):
            yield x


def scaled_rows(P: HPolyhedron, scale: int):
    """Rows of ``P`` for the lattice ``x = X / scale`` with integer data."""
    out = []
    for normal, offset in P.rows:
        den = 1
        for c in (*normal, offset):
            den = den * c.denominator // math.gcd(den, c.denominator)
        out.append((tuple(int(c * den) for c in normal), int(offset * den * scale)))
    return out


def fast_grid(P: HPolyhedron, scale: int = 8):
    """Like :func:`grid` but in integer arithmetic; yields scaled integer points ``X``."""
    from paramfeas.polyhedron import enumerate_vertices
    vs = enumerate_vertices(P)
    rows = scaled_rows(P, scale)
    axes = []
    for i in range(P.dim):
        lo = min(v.coords[i] for v in vs) * scale
        hi = max(v.coords[i] for v in vs) * scale
        axes.append(range(-((-lo.numerator) // lo.denominator), hi.numerator // hi.denominator + 1))
    for X in itertools.product(*axes):
        if all(sum(a * x for a, x in zip(n, X)) >= o for n, o in rows):
            yield X


def fast_contains(rows, X) -> bool:
    return all(sum(a * x for a, x in zip(n, X)) >= o for n, o in rows)
