"""End-to-end certification of parametric integer feasibility problems.

For a problem with parameters ``r >= r0``, ``k >= k0``, base variables ``x``
with base system ``S(x)`` and goal blocks ``G_i(x, y_i)``, the claim is

    for all parameters and all integer x with S(x):
        some block i has an integer y_i with G_i(x, y_i).

``run`` proceeds per block:

1. integer elimination of ``y_i`` from ``G_i`` gives sufficient conditions
   ``e(x) >= 0``;
2. each condition must hold on all of ``S``: real elimination of ``x`` from
   ``S(x)`` plus ``-e(x) - 1 >= 0`` yields parameter-only rows, and the
   condition is certified wherever one of those rows is provably negative;
3. provable negativity comes from positivity certificates; where they fail,
   a finite patch region of parameter points is computed and every point in
   it is decided by exact lattice enumeration (``check_fixed``).

A problem without a goal asks for an integer solution of the base system at
every parameter value; it is treated as a single block over the base
variables.
"""
from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import univariate as U
from .dsl import CheckedBlock, CheckedProblem
from .elimination import (INTEGER, REAL, DomainSigns, Inconclusive, constant_signs,
                          eliminate_all, instantiate_rows)
from .exact import BINOM, MultiPoly, binom_eval, expand_binom, format_poly, poly_eval
from .polyhedron import (HPolyhedron, UnboundedError, brute_force_goal, check_bounded,
                         covering_check, enumerate_vertices, instantiate)
from .positivity import BivarPoly, certify_positive

VERSION = "1"
CERTIFIED = "Certified"
PATCHED = "CertifiedWithPatches"
REFUTED = "Refuted"
UNKNOWN = "Unknown"
ALL = None  # region sentinel: not enumerable


class PreconditionError(ValueError):
    pass


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    k_max: int | None = None  # last k value specialised for B constraints (default k0 + 5)
    threshold_cap: int = 256
    max_patch_points: int = 20_000
    probe: int = 3
    order: tuple = ()
    binom_lower: MultiPoly | None = None  # asserted B >= L(r, k) for k > k_max
    binom_upper: MultiPoly | None = None  # asserted B <= U(r, k) for k > k_max
    exact_branch: bool = False
    workers: int | None = None
    timing: bool = False

    def worker_count(self) -> int:
        if self.workers is not None:
            return max(1, self.workers)
        try:
            return max(1, int(os.environ.get("PARAMFEAS_THREADS", "1")))
        except ValueError:
            return 1


# -- problem views -----------------------------------------------------------

def effective_problem(problem: CheckedProblem) -> CheckedProblem:
    """Rewrite a goal-less problem as one block over the base variables."""
    if problem.blocks:
        return problem
    params_only = tuple(row for row in problem.base if row.is_parameter_only)
    block = CheckedBlock(problem.vars, problem.base)
    return CheckedProblem(problem.spec, problem.params, (), params_only, (block,))


def _order(names, override) -> list:
    first = [v for v in override if v in names]
    return first + [v for v in reversed(names) if v not in first]


@dataclass(frozen=True)
class Domain:
    names: tuple  # subset of ("r", "k") in that order
    lower: tuple

    @classmethod
    def of(cls, problem: CheckedProblem) -> "Domain":
        names = tuple(p for p in ("r", "k") if p in problem.params)
        return cls(names, tuple(problem.params[p] for p in names))

    @property
    def r0(self) -> int:
        return dict(zip(self.names, self.lower)).get("r", 0)

    @property
    def k0(self) -> int:
        return dict(zip(self.names, self.lower)).get("k", 0)

    def assignment(self, point) -> dict:
        return dict(zip(self.names, point))


# -- fixed parameters ----------------------------------------------------------

@dataclass
class FixedResult:
    params: dict
    status: str  # satisfied | failed
    vacuous: bool = False
    vertices: list = field(default_factory=list)
    covering: object = None
    brute: object = None

    @property
    def satisfied(self) -> bool:
        return self.status == "satisfied"

    def witness(self, names) -> dict | None:
        if self.brute is None or self.brute.counterexample is None:
            return None
        return {v: str(c) for v, c in zip(names, self.brute.counterexample)}

    def to_dict(self, names=()) -> dict:
        return {
            "params": {p: str(v) for p, v in self.params.items()},
            "status": self.status,
            "vacuous": self.vacuous,
            "vertices": [{"coords": [str(c) for c in v.coords], "integral": v.is_integral}
                         for v in self.vertices],
            "covering": None if self.covering is None else self.covering.to_dict(),
            "lattice": None if self.brute is None else self.brute.to_dict(),
        }


def _check_params(problem: CheckedProblem, values: dict):
    for name, lb in problem.params.items():
        if name not in values:
            raise PreconditionError(f"no value given for parameter {name}")
        v = values[name]
        if Fraction(v).denominator != 1 or v < lb:
            raise PreconditionError(f"{name} = {v} violates the declared bound {name} >= {lb}")
    extra = set(values) - set(problem.params)
    if extra:
        raise PreconditionError(f"unknown parameter(s) {sorted(extra)}")


def projected_goal(problem: CheckedProblem, i: int, values: dict) -> HPolyhedron:
    """Region of base points where integer elimination certifies block ``i``."""
    block = problem.blocks[i]
    polys = instantiate_rows(problem.block_polys(i), values)
    reduced = eliminate_all(polys, _order(block.new_vars, ()), INTEGER, constant_signs)
    return HPolyhedron.from_polys(reduced, problem.vars)


def check_fixed(problem: CheckedProblem, values: dict, covering: bool = True) -> FixedResult:
    """Decide the goal at one parameter point by exact lattice enumeration."""
    values = {p: int(v) for p, v in values.items()}
    _check_params(problem, values)
    problem = effective_problem(problem)
    base = instantiate(problem.base_polys, values, problem.vars)
    if base.is_empty():
        return FixedResult(values, "satisfied", vacuous=True)
    if not check_bounded(base):
        raise UnboundedError(f"base polyhedron is unbounded at {values}")
    vertices = enumerate_vertices(base)
    blocks = [instantiate(problem.block_polys(i), values,
                          tuple(problem.vars) + tuple(b.new_vars))
              for i, b in enumerate(problem.blocks)]
    cover = None
    if covering and problem.vars and 1 <= len(blocks) <= 2:
        cs = [projected_goal(problem, i, values) for i in range(len(blocks))]
        cover = covering_check(base, cs[0], cs[-1], vertices)
    brute = brute_force_goal(base, blocks)
    return FixedResult(values, "satisfied" if brute.satisfied else "failed",
                       vertices=vertices, covering=cover, brute=brute)


# -- parameter regions ---------------------------------------------------------

def _search_threshold(ok, t0: int, cap: int):
    """Some ``t`` in ``(t0, t0 + cap]`` with ``ok(t)``: doubling then bisection."""
    lo, step = t0, 1
    while True:
        t = t0 + min(step, cap)
        if ok(t):
            hi = t
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if ok(mid):
                    hi = mid
                else:
                    lo = mid
            return hi
        if step >= cap:
            return None
        lo, step = t, step * 2


def _region_union(a, b):
    if a is ALL or b is ALL:
        return ALL
    return a | b


def _region_intersection(a, b):
    if a is ALL:
        return b
    if b is ALL:
        return a
    return a & b


class Certifier:
    """Positivity of parameter polynomials on the domain, with failure regions."""

    def __init__(self, domain: Domain, config: RunConfig):
        self.domain = domain
        self.config = config
        self.k_max = config.k_max if config.k_max is not None else domain.k0 + 5
        self.signs = DomainSigns(domain.r0, domain.k0)

    def region(self, q: MultiPoly):
        """``(detail, region)``: region holds the points where ``q > 0`` is not proved."""
        d = self.domain
        if not d.names:
            v = q.constant_value()
            return {"method": "constant", "value": str(v)}, (frozenset() if v > 0 else frozenset({()}))
        if BINOM in q.symbols():
            return self._binom_region(q)
        return self._quadrant_region(BivarPoly.from_multipoly(q), d.r0, d.k0)

    def _certify(self, p: BivarPoly, r0, k0):
        return certify_positive(p, r0, k0, exact_branch=self.config.exact_branch)

    def _quadrant_region(self, p: BivarPoly, r0: int, k0: int):
        cap = self.config.threshold_cap
        cert = self._certify(p, r0, k0)
        if cert.certified:
            return {"method": cert.method, "certificate": cert.to_dict()}, frozenset()
        detail = {"method": "patch", "failed": cert.to_dict()}
        if "k" not in self.domain.names:
            t = U.positivity_threshold(p.at_k(0), r0, cap)
            if t is None:
                return detail, ALL
            detail["r_threshold"] = t
            return detail, frozenset((r,) for r in range(r0, t) if p(r, 0) <= 0)
        r1 = _search_threshold(lambda t: self._certify(p, t, k0).certified, r0, cap)
        k1 = _search_threshold(lambda t: self._certify(p, r0, t).certified, k0, cap)
        detail.update(r_threshold=r1, k_threshold=k1)
        if r1 is not None and k1 is not None:
            pts = product(range(r0, r1), range(k0, k1))
        elif r1 is not None:
            pts = self._slices(p, range(r0, r1), k0, by_r=True)
        elif k1 is not None:
            pts = self._slices(p, range(k0, k1), r0, by_r=False)
        else:
            return detail, ALL
        if pts is ALL:
            return detail, ALL
        return detail, frozenset(pt for pt in pts if p(*pt) <= 0)

    def _slices(self, p: BivarPoly, fixed_values, start: int, by_r: bool):
        pts = []
        for v in fixed_values:
            q = p.at_r(v) if by_r else p.at_k(v)
            t = U.positivity_threshold(q, start, self.config.threshold_cap)
            if t is None:
                return ALL
            pts.extend(((v, w) if by_r else (w, v)) for w in range(start, t))
        return pts

    def _binom_region(self, q: MultiPoly):
        d, cap = self.domain, self.config.threshold_cap
        if self.signs.positive(q):
            return {"method": "binom-lower-bound-1"}, frozenset()
        pts = set()
        for kv in range(d.k0, self.k_max + 1):
            qk = expand_binom(q, kv)
            u = BivarPoly.from_multipoly(qk).at_k(0)
            if not u:
                return {"method": "k-specialisation", "reason": f"vanishes at k = {kv}"}, ALL
            t = U.positivity_threshold(u, d.r0, cap)
            if t is None:
                return {"method": "k-specialisation",
                        "reason": f"no positivity threshold in r at k = {kv}"}, ALL
            pts.update((r, kv) for r in range(d.r0, t)
                       if poly_eval(q, {"r": r, "k": kv}) <= 0)
        detail = {"method": "k-specialisation", "k_range": [d.k0, self.k_max]}
        tail = self._binom_tail(q)
        if tail is None:
            detail["reason"] = f"no bound on B supplied for k > {self.k_max}"
            return detail, ALL
        bound, tq = tail
        tdetail, tregion = self._quadrant_region(BivarPoly.from_multipoly(tq), d.r0, self.k_max + 1)
        detail["tail"] = {"bound": bound, "poly": format_poly(tq), **tdetail}
        if tregion is ALL:
            return detail, ALL
        pts.update(pt for pt in tregion if poly_eval(q, {"r": pt[0], "k": pt[1]}) <= 0)
        return detail, frozenset(pts)

    def _binom_tail(self, q: MultiPoly):
        if q.degree(BINOM) != 1:
            return None
        c = q.coefficient(BINOM, 1)
        tail_signs = DomainSigns(self.domain.r0, self.k_max + 1)
        try:
            sign = tail_signs(c).sign
        except Inconclusive:
            return None
        bound = self.config.binom_lower if sign > 0 else self.config.binom_upper
        if bound is None:
            return None
        kind = "lower" if sign > 0 else "upper"
        return f"B {'>=' if sign > 0 else '<='} {format_poly(bound)} ({kind}, user-asserted)", q.subs({BINOM: bound})


def check_binom_bounds(config: RunConfig, domain: Domain, k_max: int, samples: int = 6):
    """Spot-check user-asserted bounds on B beyond the specialised k range."""
    for bound, sign in ((config.binom_lower, 1), (config.binom_upper, -1)):
        if bound is None:
            continue
        if BINOM in bound.symbols():
            raise ConfigError("bounds on B must not mention B")
        for r in range(max(domain.r0, 0), max(domain.r0, 0) + 4 * samples):
            for k in range(k_max + 1, k_max + 1 + samples):
                b = binom_eval(r, k)
                v = poly_eval(bound, {"r": r, "k": k})
                if sign * (b - v) < 0:
                    raise ConfigError(f"asserted bound {format_poly(bound)} on B fails at r={r}, k={k}")


# -- report ----------------------------------------------------------------

@dataclass
class ConstraintOutcome:
    poly: str
    status: str  # certified | patched | unknown
    certificate: dict | None = None
    reason: str | None = None
    region: object = field(default=ALL, repr=False)

    def to_dict(self) -> dict:
        out = {"poly": self.poly, "status": self.status}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class DisjunctOutcome:
    eliminated: list
    constraints: list
    reason: str | None = None
    region: object = field(default=ALL, repr=False)

    def to_dict(self) -> dict:
        out = {"eliminated": self.eliminated, "constraints": [c.to_dict() for c in self.constraints]}
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class PatchOutcome:
    params: dict
    verdict: str  # satisfied | failed | unknown
    witness: dict | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        out = {"r": _opt(self.params.get("r")), "k": _opt(self.params.get("k")),
               "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note is not None:
            out["note"] = self.note
        return out


def _opt(v):
    return None if v is None else str(v)


@dataclass
class Report:
    input_hash: str
    verdict: str
    disjuncts: list
    patches: list
    witness: dict | None = None
    diagnosis: str | None = None
    timing_ms: int | None = None
    version: str = VERSION

    def to_dict(self) -> dict:
        out = {
            "version": self.version,
            "input_hash": self.input_hash,
            "verdict": self.verdict,
            "disjuncts": [d.to_dict() for d in self.disjuncts],
            "patches": [p.to_dict() for p in self.patches],
            "timing_ms": self.timing_ms,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.diagnosis is not None:
            out["diagnosis"] = self.diagnosis
        return out


# -- driver --------------------------------------------------------------------

def _goal_constraints(problem: CheckedProblem, i: int, config: RunConfig, signs):
    block = problem.blocks[i]
    order = _order(block.new_vars, config.order)
    return [e.primitive() for e in eliminate_all(problem.block_polys(i), order, INTEGER, signs)]


def _constraint_outcome(problem, e: MultiPoly, certifier: Certifier, config, signs) -> ConstraintOutcome:
    text = f"{format_poly(e)} >= 0"
    negated = -e - 1
    try:
        rows = eliminate_all(problem.base_polys + [negated],
                             _order(problem.vars, config.order), REAL, signs)
    except Inconclusive as exc:
        return ConstraintOutcome(text, "unknown", reason=str(exc))
    rows = [p for p in rows if not (p.is_constant() and p.constant_value() >= 0)]
    for p in rows:
        if p.is_constant():
            return ConstraintOutcome(text, "certified",
                                     {"method": "constant", "negative_row": format_poly(p)},
                                     region=frozenset())
    if not rows:
        return ConstraintOutcome(text, "unknown",
                                 reason="violations of the condition are feasible for all parameters")
    region = ALL
    details = []
    for p in rows:
        detail, reg = certifier.region(-p)
        if reg is not ALL and not reg:
            return ConstraintOutcome(text, "certified",
                                     {"negative_row": f"{format_poly(p)} >= 0", **detail},
                                     region=frozenset())
        details.append({"negative_row": f"{format_poly(p)} >= 0", **detail})
        region = _region_intersection(region, reg)
    if region is not ALL:
        # a point is settled when any row is negative there
        names = certifier.domain.names
        region = frozenset(pt for pt in region
                           if all(poly_eval(p, dict(zip(names, pt))) >= 0 for p in rows))
    if region is ALL:
        return ConstraintOutcome(text, "unknown", reason="no finite patch region",
                                 certificate={"attempts": details})
    return ConstraintOutcome(text, "patched", {"attempts": details}, region=region)


def _input_hash(problem: CheckedProblem) -> str:
    return "sha256:" + hashlib.sha256(problem.source.encode()).hexdigest()


def _check_point(args):
    problem, values = args
    try:
        res = check_fixed(problem, values, covering=False)
    except UnboundedError as exc:
        return PatchOutcome(values, "unknown", note=str(exc))
    if res.satisfied:
        return PatchOutcome(values, "satisfied", note="vacuous" if res.vacuous else None)
    return PatchOutcome(values, "failed", witness=res.witness(effective_problem(problem).vars))


def _check_points(problem, domain: Domain, points, config: RunConfig) -> list:
    jobs = [(problem, domain.assignment(pt)) for pt in sorted(points)]
    workers = config.worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_check_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_check_point(job) for job in jobs]


def run(problem: CheckedProblem, config: RunConfig | None = None) -> Report:
    config = config or RunConfig()
    started = time.perf_counter()
    original = problem
    problem = effective_problem(problem)
    domain = Domain.of(problem)
    certifier = Certifier(domain, config)
    check_binom_bounds(config, domain, certifier.k_max)
    signs = DomainSigns(domain.r0, domain.k0)

    disjuncts = []
    for i in range(len(problem.blocks)):
        try:
            goal = _goal_constraints(problem, i, config, signs)
        except Inconclusive as exc:
            disjuncts.append(DisjunctOutcome([], [], reason=str(exc)))
            continue
        outcomes = [_constraint_outcome(problem, e, certifier, config, signs) for e in goal]
        region = frozenset()
        for o in outcomes:
            region = _region_union(region, o.region)
        disjuncts.append(DisjunctOutcome([f"{format_poly(e)} >= 0" for e in goal], outcomes,
                                         region=region))

    def finish(verdict, patches=(), witness=None, diagnosis=None):
        elapsed = round((time.perf_counter() - started) * 1000) if config.timing else None
        return Report(_input_hash(original), verdict, disjuncts, list(patches),
                      witness, diagnosis, elapsed)

    if any(d.region is not ALL and not d.region for d in disjuncts):
        return finish(CERTIFIED)
    region = ALL
    for d in disjuncts:
        region = _region_intersection(region, d.region)
    if region is ALL and not domain.names:
        region = frozenset({()})

    if region is ALL or len(region) > config.max_patch_points:
        probe = list(product(*(range(lb, lb + config.probe) for lb in domain.lower)))
        patches = _check_points(original, domain, probe, config)
        failed = next((p for p in patches if p.verdict == "failed"), None)
        if failed is not None:
            return finish(REFUTED, patches, _witness(failed),
                          "counterexample found while probing an unbounded patch region")
        why = ("patch region is not finite" if region is ALL
               else f"patch region has {len(region)} points (cap {config.max_patch_points})")
        return finish(UNKNOWN, patches, diagnosis=why)

    patches = _check_points(original, domain, region, config)
    failed = next((p for p in patches if p.verdict == "failed"), None)
    if failed is not None:
        return finish(REFUTED, patches, _witness(failed))
    if any(p.verdict == "unknown" for p in patches):
        return finish(UNKNOWN, patches, diagnosis="some patch points could not be decided")
    return finish(PATCHED, patches)


def _witness(patch: PatchOutcome) -> dict:
    return {"params": {p: str(v) for p, v in patch.params.items()}, "point": patch.witness}
