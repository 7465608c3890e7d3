"""Singularity criteria for the variety of a proper polyhedral divisor:
smooth, isolated, rational, Cohen-Macaulay, discrepancies, log-terminal,
canonical type, elliptic."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .divclass import (
    GorensteinResult,
    class_group,
    gorenstein_solve,
    require_gorenstein,
)
from .errors import UnsupportedBase, UnsupportedRank, UnsupportedShape
from .pdiv import (
    ABSTRACT,
    PROJECTIVE_LINE,
    Point,
    PolyhedralDivisor,
    QDivisor,
    evaluate,
    extremal_data,
    floor_degree,
    polyhedral_divisor,
    quasifan,
    rank,
    require_proper,
    support,
)
from .polyhedra import (
    Cone,
    SigmaPolyhedron,
    cayley_cone,
    cone_contains,
    cone_dim,
    dual_cone,
    face_of,
    face_of_cone,
    halfspaces,
    is_regular,
    minimal_generators,
    minkowski_sum,
    mu,
    polytope_vertices,
    tail_polyhedron,
    translate,
)
from .ratlin import dot, matrix_rank, saturated_basis, scale_to_int, vec_add

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class Verdict:
    status: str  # "yes" | "no" | "inconclusive"
    witness: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "yes"


@dataclass(frozen=True)
class BoundaryData:
    """Maximal vertex multiplicity per support point and the induced boundary divisor."""

    mu_max: tuple[tuple[Point, int], ...]
    boundary: QDivisor
    u0: Fraction | None


def boundary_data(d: PolyhedralDivisor) -> BoundaryData:
    mus = []
    terms = []
    for p, poly in support(d):
        m = max(mu(v) for v in poly.vertices)
        mus.append((p, m))
        terms.append((p, Fraction(m - 1, m)))
    boundary = QDivisor.of(terms)
    u0 = None
    if rank(d) == 1 and d.base.projective:
        d1 = QDivisor.of([(p, poly.vertices[0][0]) for p, poly in support(d)])
        if d1.degree != 0:
            u0 = (d.canonical.degree + boundary.degree) / d1.degree
    return BoundaryData(tuple(mus), boundary, u0)


def _is_lattice_translate(poly: SigmaPolyhedron) -> bool:
    return len(poly.vertices) == 1 and mu(poly.vertices[0]) == 1


def _two_point_bicone(tail: Cone, polys: Sequence[SigmaPolyhedron]) -> Cone | None:
    """Cayley bicone of the divisor after translating lattice-point coefficients
    away; None when more than two coefficients resist such a translation."""
    n = tail.ambient_rank
    shift = tuple(Fraction(0) for _ in range(n))
    nontrivial: list[SigmaPolyhedron] = []
    for poly in polys:
        if _is_lattice_translate(poly):
            shift = vec_add(shift, poly.vertices[0])
        else:
            nontrivial.append(poly)
    if len(nontrivial) > 2:
        return None
    while len(nontrivial) < 2:
        nontrivial.append(tail_polyhedron(tail))
    delta_y = translate(nontrivial[0], shift)
    delta_z = nontrivial[1]
    return cayley_cone([(delta_y, (1,)), (delta_z, (-1,))])


def _chart_cone(poly: SigmaPolyhedron) -> Cone:
    return cayley_cone([(poly, (1,))])


@lru_cache(maxsize=None)
def check_smooth(d: PolyhedralDivisor) -> Verdict:
    """Smoothness of the associated variety.

    Over an affine base every fiber chart is a toric cone over a coefficient,
    so the test is regularity of those Cayley cones.  Over P^1 the divisor is
    first reduced modulo lattice translations compensated by principal
    divisors; it is smooth iff it reduces to two support points whose bicone
    is a regular cone.
    """
    require_proper(d)
    if not d.base.projective:
        for p, poly in support(d):
            if not is_regular(_chart_cone(poly)):
                return Verdict("no", witness=str(p), reason="singular toric chart at this point")
        if not is_regular(_chart_cone(tail_polyhedron(d.tail))):
            return Verdict("no", reason="the tail cone itself is not regular")
        return Verdict("yes")
    if d.base.kind == ABSTRACT:
        return Verdict("no", reason="a smooth complexity-one variety has base P^1 or an affine curve")
    polys = [poly for _, poly in support(d)]
    bic = _two_point_bicone(d.tail, polys)
    if bic is None:
        return Verdict(
            "no", reason="more than two coefficients are not lattice translates of the tail"
        )
    if is_regular(bic):
        return Verdict("yes", witness=[list(g) for g in bic.generators])
    return Verdict("no", witness=[list(g) for g in bic.generators], reason="bicone is not regular")


def _poly_dim(poly: SigmaPolyhedron) -> int:
    v0 = poly.vertices[0]
    rows = [scale_to_int(tuple(a - b for a, b in zip(v, v0))) for v in poly.vertices[1:]]
    rows += list(poly.tail.generators)
    rows = [r for r in rows if any(r)]
    return matrix_rank(rows) if rows else 0


def _cell_faces(c: Cone) -> set[tuple[tuple[int, ...], ...]]:
    hs = halfspaces(c)
    faces = set()
    for size in range(len(hs) + 1):
        for sel in combinations(hs, size):
            gens = tuple(g for g in c.generators if all(dot(h, g) == 0 for h in sel))
            faces.add(gens)
    return faces


@lru_cache(maxsize=None)
def check_isolated(d: PolyhedralDivisor) -> Verdict:
    """Isolatedness of the singular locus, by testing every facet of the divisor.

    A facet is a value of u in the dual tail where the joint minimizing face
    has codimension one somewhere on the curve.  Facets whose degree sum lands
    strictly inside the tail face must give a smooth contracted variety; the
    remaining facets only need regular fiber charts.
    """
    require_proper(d)
    if not d.base.projective:
        raise UnsupportedBase("the isolatedness test needs a projective base")
    n = rank(d)
    if cone_dim(d.tail) != n:
        raise UnsupportedShape("the isolatedness test needs a full-dimensional tail cone")
    sup = support(d)
    seen: set[tuple[tuple[int, ...], ...]] = set()
    for cell in quasifan(d).maximal_cells:
        for face_gens in _cell_faces(cell.cone):
            if not face_gens or face_gens in seen:
                continue
            seen.add(face_gens)
            u = tuple(sum(g[i] for g in face_gens) for i in range(n))
            faces = [(p, face_of(poly, u)) for p, poly in sup]
            tau = face_of_cone(d.tail, u)
            codims = [n - _poly_dim(f) for _, f in faces]
            codims.append(n - cone_dim(tau))
            if min(codims) != 1:
                continue
            total = tail_polyhedron(tau)
            for _, f in faces:
                total = minkowski_sum(total, f)
            inside = all(cone_contains(tau, scale_to_int(v)) for v in total.vertices)
            zero = tuple(Fraction(0) for _ in range(n))
            if inside and zero not in total.vertices:
                sub = polyhedral_divisor(
                    d.base, tau, [(p, f) for p, f in faces], canonical=d.canonical
                )
                ok = check_smooth(sub)
                if not ok:
                    return Verdict("no", witness=list(u), reason=f"facet variety is singular: {ok.reason}")
            else:
                for p, f in faces:
                    if not is_regular(_chart_cone(f)):
                        return Verdict(
                            "no", witness=list(u), reason=f"singular fiber chart at {p} on this facet"
                        )
                if not is_regular(_chart_cone(tail_polyhedron(tau))):
                    return Verdict("no", witness=list(u), reason="singular generic chart on this facet")
    return Verdict("yes")


def _adapted_basis(f_gens: Sequence[tuple[int, ...]], n: int) -> tuple[list[tuple[int, ...]], int]:
    """Lattice basis whose first k members span the saturation of f_gens.

    With U A V = (I_k | 0) for the saturated rows A, the first k rows of V^-1
    span the same sublattice and the remaining rows complete the basis.
    """
    if not f_gens:
        return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)], 0
    from .ratlin import invert_unimodular, smith_normal_form

    sat = saturated_basis(f_gens, n)
    k = len(sat)
    sf = smith_normal_form(list(sat))
    assert all(x == 1 for x in sf.diagonal), "saturation must be a direct summand"
    v_inv = invert_unimodular(sf.right)
    return list(sat) + [tuple(v_inv[i]) for i in range(k, n)], k


@lru_cache(maxsize=None)
def check_rational(d: PolyhedralDivisor, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Rationality of the singularities.

    Affine bases are toroidal; a positive-genus base always fails at u = 0.
    On P^1 the floor degree of every evaluation must stay >= -1: per quasifan
    cell only lattice points with degree at most the fractional-part budget
    can fail, and along the degree-zero face the floor pattern is periodic, so
    a finite slab of representatives decides the cell exactly.
    """
    require_proper(d)
    if not d.base.projective:
        return Verdict("yes", reason="affine base: toroidal, hence rational")
    if d.base.kind == ABSTRACT:
        return Verdict("no", witness=[0] * rank(d), reason="structure sheaf has higher cohomology")
    n = rank(d)
    worst: tuple[int, ...] | None = None
    worst_val = 0
    for cell in quasifan(d).maximal_cells:
        res = _scan_cell(d, cell, budget)
        if res[0] == "budget":
            return Verdict("inconclusive", reason="enumeration budget exceeded")
        if res[0] == "no":
            return Verdict("no", witness={"u": list(res[1]), "floor_degree": res[2]})
        if res[1] is not None and res[2] < worst_val:
            worst, worst_val = res[1], res[2]
    payload = None if worst is None else {"u": list(worst), "floor_degree": worst_val}
    return Verdict("yes", witness=payload)


def _scan_cell(d: PolyhedralDivisor, cell, budget: int):
    """Exact scan of one quasifan cell; returns ("ok", worst_u, worst_val),
    ("no", u, val) or ("budget",)."""
    n = rank(d)
    sel = cell.selection
    mus = [mu(v) for v in sel]
    s_f = sum(Fraction(m - 1, m) for m in mus)
    bound = s_f - 1
    if bound < 0:
        # floors lose less than one in total, so every value stays above -1
        return ("ok", None, 0)
    ell = math.lcm(*mus) if mus else 1
    w_deg = tuple(sum((v[i] for v in sel), Fraction(0)) for i in range(n))
    gens = cell.cone.generators
    f_gens = [g for g in gens if dot(g, w_deg) == 0]
    assert all(dot(g, w_deg) >= 0 for g in gens), "properness bounds the degree below"
    basis, k = _adapted_basis(f_gens, n)
    m_free = n - k
    coords = {g: _coords_of(g, basis) for g in gens}

    def to_u(c: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(c[i] * basis[i][j] for i in range(n)) for j in range(n))

    def phi(u) -> int:
        return sum(math.floor(dot(u, v)) for v in sel)

    # constraints a.x >= b in adapted coordinates: the cell's half-spaces plus
    # the degree bound (rational rows are fine, lattice points are integral)
    constraints: list[tuple[tuple, Fraction]] = []
    for h in halfspaces(cell.cone):
        constraints.append((tuple(dot(basis[i], h) for i in range(n)), Fraction(0)))
    deg_row = tuple(-dot(basis[i], w_deg) for i in range(n))
    constraints.append((deg_row, -bound))

    # the transversal part ranges over the projected cell cut by the degree bound
    ybox = _ybox(
        [coords[g][k:] for g in gens],
        [deg_row[k:], tuple(-x for x in deg_row[k:])],
        bound,
        m_free,
    )
    if ybox is None:
        return ("ok", None, 0)
    count = ell**k
    for lo, hi in ybox:
        count *= max(hi - lo + 1, 0)
        if count > budget:
            return ("budget",)
    if count == 0:
        return ("ok", None, 0)
    w0 = tuple(sum(coords[g][i] for g in f_gens) for i in range(k))
    worst_u, worst_val = None, 0
    for y in product(*[range(lo, hi + 1) for lo, hi in ybox]):
        rows_x: list[tuple[tuple, Fraction]] = []
        feasible = True
        for a, b in constraints:
            ax, ay = a[:k], a[k:]
            b_eff = b - dot(ay, y)
            if not any(ax):
                if 0 < b_eff:
                    feasible = False
                    break
            else:
                rows_x.append((ax, b_eff))
        if not feasible:
            continue
        if k == 0:
            u = to_u(tuple(y))
            val = phi(u)
            if val < -1:
                return ("no", u, val)
            if val < worst_val:
                worst_u, worst_val = u, val
            continue
        s = 0
        for ax, b_eff in rows_x:
            aw = dot(ax, w0)
            assert aw > 0, "slab direction must strictly satisfy every slice constraint"
            slack = b_eff - sum(min(a, 0) * (ell - 1) for a in ax)
            if slack > 0:
                s = max(s, math.ceil(Fraction(slack) / aw))
        base_x = tuple(s * w for w in w0)
        for xi in product(range(ell), repeat=k):
            x = tuple(bb + o for bb, o in zip(base_x, xi))
            u = to_u(x + tuple(y))
            val = phi(u)
            if val < -1:
                return ("no", u, val)
            if val < worst_val:
                worst_u, worst_val = u, val
    return ("ok", worst_u, worst_val)


def _coords_of(vec: Sequence[int], basis: list[tuple[int, ...]]) -> tuple[int, ...]:
    from .ratlin import Unique, solve_exact

    cols = [[basis[i][j] for i in range(len(basis))] for j in range(len(vec))]
    res = solve_exact(cols, list(vec))
    assert isinstance(res, Unique)
    assert all(x.denominator == 1 for x in res.x)
    return tuple(int(x) for x in res.x)


def _ybox(image_gens, deg_rows, bound, m_free):
    """Integer bounding box of the projected cell cut by the degree bound.

    The projection of the cell is the cone spanned by the generator images;
    the degree is a function of the projected coordinates alone, positive off
    the origin, so the region is a polytope.
    """
    if m_free == 0:
        return []
    from .polyhedra import make_cone

    img = [g for g in image_gens if any(g)]
    assert img, "a full-dimensional cell projects onto the transversal space"
    cone_y = make_cone(img, m_free)
    rows = [tuple(Fraction(x) for x in h) for h in halfspaces(cone_y)]
    b_vals = [Fraction(0)] * len(rows)
    rows.append(tuple(Fraction(x) for x in deg_rows[0]))
    b_vals.append(Fraction(-bound))
    verts = polytope_vertices(rows, b_vals, m_free)
    if not verts:
        return None
    box = []
    for j in range(m_free):
        lo = min(v[j] for v in verts)
        hi = max(v[j] for v in verts)
        box.append((math.ceil(lo), math.floor(hi)))
    return box


@dataclass(frozen=True)
class CMResult:
    status: str  # "yes" | "iff_rational" | "inconclusive"
    reason: str = ""
    resolved: Verdict | None = None

    def holds(self) -> bool | None:
        if self.status == "yes":
            return True
        if self.status == "iff_rational" and self.resolved is not None:
            if self.resolved.status == "inconclusive":
                return None
            return bool(self.resolved)
        return None


def check_cm(d: PolyhedralDivisor, budget: int = DEFAULT_BUDGET) -> CMResult:
    """Cohen-Macaulayness where a criterion applies: affine bases and surfaces
    are always CM; with every tail ray surviving, or with isolated
    singularities in rank >= 2, CM is equivalent to rationality."""
    require_proper(d)
    if not d.base.projective:
        return CMResult("yes", "affine base: toroidal singularities")
    if rank(d) == 1:
        return CMResult("yes", "normal surfaces are Cohen-Macaulay")
    ext = extremal_data(d)
    if not ext.non_extremal_rays:
        return CMResult(
            "iff_rational", "all tail rays survive contraction", check_rational(d, budget)
        )
    try:
        iso = check_isolated(d)
    except (UnsupportedBase, UnsupportedShape):
        iso = None
    if iso is not None and iso.status == "yes":
        return CMResult(
            "iff_rational", "isolated singularities in rank >= 2", check_rational(d, budget)
        )
    return CMResult("inconclusive", "no Cohen-Macaulay criterion applies")


@dataclass(frozen=True)
class DiscrepancyEntry:
    kind: str  # "vertex" | "ray"
    point: Point | None
    vertex: tuple[Fraction, ...] | None
    ray: tuple[int, ...] | None
    value: Fraction
    exceptional: bool


@dataclass(frozen=True)
class DiscrepancyReport:
    entries: tuple[DiscrepancyEntry, ...]

    def minimum(self) -> Fraction:
        return min((e.value for e in self.entries), default=Fraction(0))


def discrepancies(d: PolyhedralDivisor, sol: GorensteinResult) -> DiscrepancyReport:
    """Discrepancies of the toroidal contraction, per vertex and per tail ray.

    Vertex values over a curve are zero (every vertex survives); the
    informative entries sit on the contracted rays.
    """
    solution = require_gorenstein(sol)
    ext = extremal_data(d)
    a = dict(solution.a)
    u = solution.u
    sup = dict(support(d))
    entries = []
    for p, a_p in solution.a:
        b_p = d.canonical.coefficient(p)
        verts = sup[p].vertices if p in sup else (tuple(Fraction(0) for _ in range(rank(d))),)
        for v in verts:
            m = mu(v)
            val = m * (b_p - a_p - dot(u, v) + 1) - 1
            entries.append(DiscrepancyEntry("vertex", p, v, None, val, False))
    ext_set = set(ext.extremal_rays)
    for r in minimal_generators(d.tail):
        val = -1 - dot(u, r)
        entries.append(DiscrepancyEntry("ray", None, None, r, Fraction(val), r not in ext_set))
    return DiscrepancyReport(tuple(entries))


def check_log_terminal(d: PolyhedralDivisor) -> Verdict:
    """Log-terminality for a Q-Gorenstein divisor: affine bases qualify, on P^1
    the boundary multiplicities must sum below two.  The verdict is recomputed
    from the discrepancy report, and both computations must agree."""
    require_proper(d)
    sol = require_gorenstein(gorenstein_solve(d))
    if not d.base.projective:
        verdict = Verdict("yes", reason="affine base: toric singularities are log-terminal")
    else:
        bd = boundary_data(d)
        total = bd.boundary.degree
        if total < 2:
            verdict = Verdict("yes", witness=str(total), reason="boundary multiplicity sum below 2")
        else:
            verdict = Verdict("no", witness=str(total), reason="boundary multiplicity sum reaches 2")
    report = discrepancies(d, sol)
    via_discr = all(e.value > -1 for e in report.entries)
    assert via_discr == bool(verdict), "boundary-sum and discrepancy criteria disagree"
    return verdict


@dataclass(frozen=True)
class CanonicalType:
    label: str  # "A" | "D" | "E" | "not_canonical"
    param: int | None
    index: int
    u0: Fraction
    reason: str = ""

    @property
    def canonical(self) -> bool:
        return self.label in ("A", "D", "E")


def classify_canonical(d: PolyhedralDivisor) -> CanonicalType:
    """Canonical-type classification of a rank-one section ring over P^1.

    Canonical is equivalent to Gorenstein (index one) plus log-terminal; the
    label then follows from the multiplicity profile, with the cyclic case
    labelled by the order of the class group (A(0) meaning a regular ring).
    """
    if rank(d) != 1:
        raise UnsupportedRank("the canonical classification is for rank one")
    if d.base.kind != PROJECTIVE_LINE:
        raise UnsupportedBase("the canonical classification lives over P^1")
    require_proper(d)
    sol = gorenstein_solve(d)
    solution = require_gorenstein(sol)
    u0 = solution.u[0]
    idx = solution.index
    bd = boundary_data(d)
    if bd.boundary.degree >= 2:
        return CanonicalType("not_canonical", None, idx, u0, "not log-terminal")
    if idx != 1:
        return CanonicalType("not_canonical", None, idx, u0, f"Gorenstein index {idx} exceeds 1")
    assert u0 <= -1, "index one and log-terminal force u0 <= -1"
    profile = sorted(m for _, m in bd.mu_max if m > 1)
    if len(profile) <= 2:
        cg = class_group(d)
        order = 1
        for t in cg.torsion:
            order *= t
        return CanonicalType("A", order - 1, idx, u0)
    if profile[:2] == [2, 2]:
        return CanonicalType("D", profile[2] + 2, idx, u0)
    if profile[0] == 2 and profile[1] == 3 and profile[2] in (3, 4, 5):
        return CanonicalType("E", profile[2] + 3, idx, u0)
    raise AssertionError("log-terminal profiles are Platonic")


@dataclass(frozen=True)
class EllipticResult:
    status: str  # "elliptic" | "not_elliptic"
    minimal: bool | None = None
    witness_u: int | None = None
    index: int | None = None

    def __bool__(self) -> bool:
        return self.status == "elliptic"


def check_elliptic(d: PolyhedralDivisor) -> EllipticResult:
    """Elliptic singularity test for rank-one divisors over P^1: the floor
    degree must reach -2 at exactly one positive degree and never fall below;
    minimal means Gorenstein on top."""
    if rank(d) != 1:
        raise UnsupportedRank("the elliptic test is for rank one")
    if d.base.kind == ABSTRACT:
        raise UnsupportedBase("elliptic-curve bases are out of scope")
    if not d.base.projective:
        return EllipticResult("not_elliptic")
    require_proper(d)
    egen = dual_cone(d.tail).generators[0]
    d1 = evaluate(d, egen)
    deg = d1.degree
    bd = boundary_data(d)
    s_f = bd.boundary.degree
    bound = math.ceil((s_f + 2) / deg)
    hits = []
    for t in range(1, bound + 1):
        _, fdeg = floor_degree(d1.scale(t))
        if fdeg < -2:
            return EllipticResult("not_elliptic")
        if fdeg == -2:
            hits.append(t)
    if len(hits) != 1:
        return EllipticResult("not_elliptic")
    solution = require_gorenstein(gorenstein_solve(d))
    return EllipticResult("elliptic", solution.index == 1, hits[0], solution.index)
