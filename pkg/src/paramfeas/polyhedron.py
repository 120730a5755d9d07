"""Exact H-polyhedra at fixed parameters.

Rows are ``normal . x >= offset`` with rational entries.  Vertices are found
by enumerating all ``dim``-subsets of rows (the bodies here have few rows and
at most a handful of dimensions), edges by the rank of shared tight rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor
from typing import Iterable, Iterator, Sequence

from .exact import MultiPoly, format_poly
from .elimination import instantiate_rows


class UnboundedError(ValueError):
    """Operation needs a bounded polyhedron."""


@dataclass(frozen=True)
class HPolyhedron:
    dim: int
    rows: tuple  # ((normal tuple, offset), ...)
    names: tuple = ()

    @classmethod
    def from_rows(cls, rows: Iterable, names: Sequence[str] = ()) -> "HPolyhedron":
        rows = tuple((tuple(Fraction(a) for a in n), Fraction(o)) for n, o in rows)
        dim = len(rows[0][0]) if rows else len(names)
        if any(len(n) != dim for n, _ in rows):
            raise ValueError("row normals must all have the same length")
        return cls(dim, rows, tuple(names) or tuple(f"x{i + 1}" for i in range(dim)))

    @classmethod
    def from_polys(cls, polys: Iterable[MultiPoly], names: Sequence[str]) -> "HPolyhedron":
        """Rows from constant-coefficient affine polynomials ``p >= 0``."""
        rows = []
        for p in polys:
            extra = p.symbols() - set(names)
            if extra:
                raise ValueError(f"{format_poly(p)} has unassigned symbols {sorted(extra)}")
            normal = []
            for v in names:
                c = p.coefficient(v, 1)
                normal.append(c.constant_value())
            rows.append((normal, -p.constant_term()))
        return cls(len(names), tuple((tuple(n), o) for n, o in rows), tuple(names))

    def contains(self, x: Sequence) -> bool:
        return all(_dot(n, x) >= o for n, o in self.rows)

    def violated(self, x: Sequence) -> list[int]:
        return [i for i, (n, o) in enumerate(self.rows) if _dot(n, x) < o]

    def tight(self, x: Sequence) -> frozenset:
        return frozenset(i for i, (n, o) in enumerate(self.rows) if _dot(n, x) == o)

    def restrict(self, prefix: Sequence) -> "HPolyhedron":
        """Fix the leading coordinates; the result lives in the remaining ones."""
        m = len(prefix)
        rows = tuple((n[m:], o - _dot(n[:m], prefix)) for n, o in self.rows)
        return HPolyhedron(self.dim - m, rows, self.names[m:])

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        return HPolyhedron(self.dim, self.rows + other.rows, self.names)

    def is_empty(self) -> bool:
        return not real_feasible(self.rows)

    @property
    def constant_feasible(self) -> bool:
        """Verdict for a 0-dimensional system (all rows are constants)."""
        return all(o <= 0 for _, o in self.rows)


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def instantiate(polys: Iterable[MultiPoly], param_values: dict, names: Sequence[str]) -> HPolyhedron:
    """Specialise parametric rows at integer parameters (``B`` forced)."""
    polys = list(polys)
    needed = set().union(*(p.symbols() for p in polys)) - set(names) - {"B"} if polys else set()
    missing = needed - set(param_values)
    if missing:
        raise ValueError(f"missing parameter value(s): {sorted(missing)}")
    return HPolyhedron.from_polys(instantiate_rows(polys, param_values), names)


# -- exact feasibility -------------------------------------------------------

def real_feasible(rows: Sequence) -> bool:
    """Fourier-Motzkin feasibility of ``normal . x >= offset`` over the reals."""
    rows = [(list(n), o) for n, o in rows]
    dim = len(rows[0][0]) if rows else 0
    for j in range(dim):
        pos, neg, zero = [], [], []
        for n, o in rows:
            (pos if n[j] > 0 else neg if n[j] < 0 else zero).append((n, o))
        new = zero
        for np_, op in pos:
            for nn, on in neg:
                a, b = -nn[j], np_[j]
                new.append(([a * x + b * y for x, y in zip(np_, nn)], a * op + b * on))
        rows = _dedupe(new)
    return all(o <= 0 for _, o in rows)


def _dedupe(rows):
    seen, out = set(), []
    for n, o in rows:
        scale = next((abs(x) for x in n if x), None)
        if scale is None:
            if o <= 0:
                continue
            key = ((), Fraction(1))
        else:
            key = (tuple(x / scale for x in n), o / scale)
        if key not in seen:
            seen.add(key)
            out.append((n, o))
    return out


def check_bounded(P: HPolyhedron) -> bool:
    """True iff the recession cone ``{v : normal . v >= 0}`` is ``{0}``."""
    cone = [(n, Fraction(0)) for n, _ in P.rows]
    for i in range(P.dim):
        for s in (1, -1):
            unit = tuple(Fraction(s) if j == i else Fraction(0) for j in range(P.dim))
            if real_feasible(cone + [(unit, Fraction(1))]):
                return False
    return True


# -- vertices and edges --------------------------------------------------------

@dataclass(frozen=True)
class Vertex:
    coords: tuple
    tight_rows: frozenset = field(compare=False)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)


@dataclass(frozen=True)
class Edge:
    endpoints: tuple


def _solve(matrix, rhs):
    """Unique solution of a square system, or None when singular."""
    n = len(matrix)
    m = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(row[n] for row in m)


def rank(vectors) -> int:
    rows = [list(v) for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def _require_bounded(P: HPolyhedron):
    if P.is_empty():
        return
    if not check_bounded(P):
        raise UnboundedError("polyhedron is unbounded")


def enumerate_vertices(P: HPolyhedron) -> list[Vertex]:
    """All vertices, sorted lexicographically; empty for an empty body."""
    _require_bounded(P)
    if P.dim == 0:
        return [Vertex((), frozenset())] if P.constant_feasible else []
    found = {}
    for subset in combinations(range(len(P.rows)), P.dim):
        x = _solve([P.rows[i][0] for i in subset], [P.rows[i][1] for i in subset])
        if x is not None and x not in found and P.contains(x):
            found[x] = Vertex(x, P.tight(x))
    return [found[x] for x in sorted(found)]


def enumerate_edges(P: HPolyhedron, vertices: list[Vertex] | None = None) -> list[Edge]:
    if vertices is None:
        vertices = enumerate_vertices(P)
    else:
        _require_bounded(P)
    edges = []
    for u, w in combinations(vertices, 2):
        common = u.tight_rows & w.tight_rows
        if rank(P.rows[i][0] for i in common) != P.dim - 1:
            continue
        mid = tuple((a + b) / 2 for a, b in zip(u.coords, w.coords))
        if P.contains(mid) and P.tight(mid) == common:
            edges.append(Edge((u, w)))
    return edges


# -- covering ----------------------------------------------------------------

@dataclass
class EdgeCheck:
    edge: Edge
    interval: tuple | None  # parameter range of the segment inside C1 and C2

    def to_dict(self) -> dict:
        u, w = self.edge.endpoints
        return {"from": [str(c) for c in u.coords], "to": [str(c) for c in w.coords],
                "interval": None if self.interval is None else [str(t) for t in self.interval]}


@dataclass
class CoveringResult:
    covered: bool
    witness: tuple | None = None
    vacuous: bool = False
    vertices: list = field(default_factory=list)  # (Vertex, in_c1, in_c2)
    edges: list = field(default_factory=list)  # EdgeCheck for the critical edges

    def to_dict(self) -> dict:
        return {
            "covered": self.covered,
            "vacuous": self.vacuous,
            "witness": None if self.witness is None else [str(c) for c in self.witness],
            "vertices": [{"coords": [str(c) for c in v.coords], "integral": v.is_integral,
                          "in_c1": a, "in_c2": b} for v, a, b in self.vertices],
            "edges": [e.to_dict() for e in self.edges],
        }


def segment_interval(rows, u, w):
    """Range of ``t`` in ``[0, 1]`` with ``u + t (w - u)`` satisfying every row."""
    lo, hi = Fraction(0), Fraction(1)
    direction = tuple(b - a for a, b in zip(u, w))
    for n, o in rows:
        base, slope = _dot(n, u) - o, _dot(n, direction)
        # base + t * slope >= 0
        if slope > 0:
            lo = max(lo, -base / slope)
        elif slope < 0:
            hi = min(hi, -base / slope)
        elif base < 0:
            return None
    return (lo, hi) if lo <= hi else None


def covering_check(P: HPolyhedron, C1: HPolyhedron, C2: HPolyhedron,
                   vertices: list[Vertex] | None = None) -> CoveringResult:
    """Decide ``P`` inside ``C1 | C2`` from vertices and critical edges."""
    if vertices is None:
        vertices = enumerate_vertices(P)
    if not vertices:
        return CoveringResult(True, vacuous=True)
    table = [(v, C1.contains(v.coords), C2.contains(v.coords)) for v in vertices]
    result = CoveringResult(True, vertices=table)
    for v, a, b in table:
        if not (a or b):
            result.covered = False
            result.witness = v.coords
            return result
    inside1 = {v.coords: a for v, a, _ in table}
    inside2 = {v.coords: b for v, _, b in table}
    both = C1.rows + C2.rows
    for edge in enumerate_edges(P, vertices):
        u, w = edge.endpoints
        if not inside1[u.coords] and not inside2[w.coords]:
            pass
        elif not inside2[u.coords] and not inside1[w.coords]:
            u, w = w, u
            edge = Edge((u, w))
        else:
            continue
        # u lies only in C2, w only in C1
        interval = segment_interval(both, u.coords, w.coords)
        result.edges.append(EdgeCheck(edge, interval))
        if interval is None and result.covered:
            in2 = segment_interval(C2.rows, u.coords, w.coords)
            in1 = segment_interval(C1.rows, u.coords, w.coords)
            t = (in2[1] + in1[0]) / 2
            result.covered = False
            result.witness = tuple(a + t * (b - a) for a, b in zip(u.coords, w.coords))
    return result


# -- lattice points ------------------------------------------------------------

def bounding_box(vertices: Sequence[Vertex]):
    dim = len(vertices[0].coords)
    return [(ceil(min(v.coords[i] for v in vertices)), floor(max(v.coords[i] for v in vertices)))
            for i in range(dim)]


def integer_points(P: HPolyhedron, vertices: list[Vertex] | None = None) -> Iterator[tuple]:
    """Lattice points of ``P`` in lexicographic order."""
    if vertices is None:
        vertices = enumerate_vertices(P)
    if not vertices:
        return
    if P.dim == 0:
        yield ()
        return
    box = bounding_box(vertices)
    for x in product(*(range(lo, hi + 1) for lo, hi in box)):
        if P.contains(x):
            yield x


@dataclass
class BruteForceResult:
    satisfied: bool
    points_checked: int = 0
    witnesses: list = field(default_factory=list)  # (base point, block index, block point)
    counterexample: tuple | None = None

    def to_dict(self, limit: int = 20) -> dict:
        return {
            "satisfied": self.satisfied,
            "points_checked": self.points_checked,
            "witnesses": [{"point": list(x), "block": i, "solution": list(y)}
                          for x, i, y in self.witnesses[:limit]],
            "counterexample": None if self.counterexample is None else list(self.counterexample),
        }


def brute_force_goal(base: HPolyhedron, blocks: Sequence[HPolyhedron]) -> BruteForceResult:
    """Check every lattice point of ``base`` against the disjunction of ``blocks``.

    Each block lives in the base coordinates followed by its own variables.
    The first base point (lexicographic) with no block solution is returned
    as the counterexample.
    """
    result = BruteForceResult(True)
    for x in integer_points(base):
        result.points_checked += 1
        for i, block in enumerate(blocks):
            sub = block.restrict(x)
            y = next(integer_points(sub), None)
            if y is not None:
                result.witnesses.append((x, i, y))
                break
        else:
            result.satisfied = False
            result.counterexample = x
            return result
    return result
