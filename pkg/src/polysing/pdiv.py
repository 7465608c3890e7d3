"""Polyhedral divisors on smooth curves: evaluation, degree, properness,
extremal data and curve-level cohomology dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterable, Mapping, Sequence

from .errors import NotProperError, UnboundedBelow, UnsupportedBase
from .polyhedra import (
    Cone,
    QuasiFan,
    SigmaPolyhedron,
    cone_contains,
    dual_cone,
    halfspaces,
    is_pointed,
    is_tail_trivial,
    minkowski_sum,
    normal_quasifan,
    mu,
    support_value,
    tail_polyhedron,
)
from .ratlin import dot, primitive, scale_to_int

PROJECTIVE_LINE = "P1"
AFFINE_LINE = "A1"
ABSTRACT = "abstract"


@dataclass(frozen=True)
class Curve:
    """The base curve: P^1, A^1 (with coordinates), or an abstract smooth
    projective curve of genus >= 1 known only through its genus."""

    kind: str
    genus: int = 0

    def __post_init__(self):
        if self.kind in (PROJECTIVE_LINE, AFFINE_LINE) and self.genus != 0:
            raise ValueError("coordinate lines have genus 0")
        if self.kind == ABSTRACT and self.genus < 1:
            raise ValueError("abstract curves are reserved for genus >= 1")

    @property
    def projective(self) -> bool:
        return self.kind != AFFINE_LINE


P1 = Curve(PROJECTIVE_LINE)
A1 = Curve(AFFINE_LINE)


@dataclass(frozen=True, order=True)
class Point:
    """A closed point: (0, coord) for finite rational points, (1,) for infinity,
    (2, label) on abstract curves.  The tuple layout makes points sortable."""

    key: tuple

    @staticmethod
    def coord(value) -> "Point":
        return Point((0, Fraction(value)))

    @staticmethod
    def infinity() -> "Point":
        return Point((1, Fraction(0)))

    @staticmethod
    def label(name: str) -> "Point":
        return Point((2, name))

    @property
    def is_infinity(self) -> bool:
        return self.key[0] == 1

    @property
    def value(self):
        return self.key[1]

    def __str__(self) -> str:
        if self.key[0] == 1:
            return "inf"
        return str(self.key[1])


@dataclass(frozen=True)
class QDivisor:
    """Formal rational-coefficient sum of points; zero coefficients pruned."""

    terms: tuple[tuple[Point, Fraction], ...]

    @staticmethod
    def of(mapping: Mapping[Point, Fraction] | Iterable[tuple[Point, Fraction]]) -> "QDivisor":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: dict[Point, Fraction] = {}
        for p, c in items:
            acc[p] = acc.get(p, Fraction(0)) + Fraction(c)
        return QDivisor(tuple(sorted((p, c) for p, c in acc.items() if c != 0)))

    def coefficient(self, p: Point) -> Fraction:
        for q, c in self.terms:
            if q == p:
                return c
        return Fraction(0)

    @property
    def degree(self) -> Fraction:
        return sum((c for _, c in self.terms), Fraction(0))

    def floor(self) -> "QDivisor":
        return QDivisor.of([(p, Fraction(floor(c))) for p, c in self.terms])

    def __add__(self, other: "QDivisor") -> "QDivisor":
        return QDivisor.of(list(self.terms) + list(other.terms))

    def scale(self, c) -> "QDivisor":
        return QDivisor.of([(p, Fraction(c) * v) for p, v in self.terms])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self.terms)


ZERO_DIVISOR = QDivisor(())


def default_canonical(base: Curve) -> QDivisor:
    if base.kind == PROJECTIVE_LINE:
        return QDivisor.of([(Point.infinity(), Fraction(-2))])
    if base.kind == AFFINE_LINE:
        return ZERO_DIVISOR
    raise UnsupportedBase("no canonical representative on an abstract curve")


@dataclass(frozen=True)
class PolyhedralDivisor:
    """Finitely many sigma-polyhedron coefficients on a curve, one tail cone."""

    base: Curve
    tail: Cone
    coeffs: tuple[tuple[Point, SigmaPolyhedron], ...]
    canonical: QDivisor = field(default=ZERO_DIVISOR)


def polyhedral_divisor(
    base: Curve,
    tail: Cone,
    coeffs: Mapping[Point, SigmaPolyhedron] | Iterable[tuple[Point, SigmaPolyhedron]],
    canonical: QDivisor | None = None,
) -> PolyhedralDivisor:
    items = list(coeffs.items() if isinstance(coeffs, Mapping) else coeffs)
    if not is_pointed(tail):
        raise ValueError("tail cone must be pointed")
    points = [p for p, _ in items]
    if len(points) != len(set(points)):
        raise ValueError("support points must be distinct")
    for p, poly in items:
        if poly.tail != tail:
            raise ValueError(f"coefficient at {p} has a different tail cone")
        if base.kind == AFFINE_LINE and p.is_infinity:
            raise ValueError("the affine line has no point at infinity")
        if base.kind == ABSTRACT and p.key[0] != 2:
            raise ValueError("abstract curve points carry labels, not coordinates")
    if canonical is None:
        canonical = default_canonical(base) if base.kind != ABSTRACT else ZERO_DIVISOR
    return PolyhedralDivisor(base, tail, tuple(sorted(items)), canonical)


def rank(d: PolyhedralDivisor) -> int:
    return d.tail.ambient_rank


def support(d: PolyhedralDivisor) -> tuple[tuple[Point, SigmaPolyhedron], ...]:
    """Points whose coefficient differs from the tail cone."""
    return tuple((p, poly) for p, poly in d.coeffs if not is_tail_trivial(poly))


def coefficient_at(d: PolyhedralDivisor, p: Point) -> SigmaPolyhedron:
    for q, poly in d.coeffs:
        if q == p:
            return poly
    return tail_polyhedron(d.tail)


def evaluate(d: PolyhedralDivisor, u: Sequence) -> QDivisor:
    """The rational divisor with coefficient min <u, .> over each polyhedron."""
    terms = []
    for p, poly in support(d):
        val, _ = support_value(poly, u)
        terms.append((p, val))
    return QDivisor.of(terms)


def floor_degree(div: QDivisor) -> tuple[Fraction, int]:
    deg = div.degree
    fdeg = sum(floor(c) for _, c in div.terms)
    return deg, int(fdeg)


@lru_cache(maxsize=None)
def deg_polyhedron(d: PolyhedralDivisor) -> SigmaPolyhedron:
    """Minkowski sum of all coefficients (projective base only)."""
    if not d.base.projective:
        raise UnsupportedBase("deg is defined over a projective base")
    total = tail_polyhedron(d.tail)
    for _, poly in support(d):
        total = minkowski_sum(total, poly)
    return total


@lru_cache(maxsize=None)
def quasifan(d: PolyhedralDivisor) -> QuasiFan:
    """Normal quasifan of the divisor, cells tagged by support-point selections."""
    sup = support(d)
    return normal_quasifan([poly for _, poly in sup], d.tail)


@dataclass(frozen=True)
class Properness:
    status: str  # "proper" | "not_proper" | "inconclusive_genus"
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.status == "proper"


def _point_in_polyhedron(z: Sequence, p: SigmaPolyhedron) -> bool:
    """Membership via the support function over all vertex normal-cone generators."""
    n = p.tail.ambient_rank
    from .polyhedra import _dd_halfspaces  # local: shares the DD machinery
    from .ratlin import vec_sub

    for v in p.vertices:
        constraints = [scale_to_int(vec_sub(w, v)) for w in p.vertices if w != v]
        constraints += list(p.tail.generators)
        for u in _dd_halfspaces(tuple(constraints), n):
            val, _ = support_value(p, u)
            if dot(u, z) < val:
                return False
    return True


@lru_cache(maxsize=None)
def is_proper(d: PolyhedralDivisor) -> Properness:
    """Semi-ampleness plus bigness on the interior of the dual tail cone.

    On P^1 this amounts to deg D lying in the tail cone without containing the
    origin; degree-zero pieces on a genus >= 1 base are undecidable without
    curve arithmetic and come back as inconclusive.
    """
    if not d.base.projective:
        return Properness("proper")
    sigma = d.tail
    if not sigma.generators:
        # relint of the dual is all of M and the zero functional is never big
        return Properness("not_proper", tuple(0 for _ in range(sigma.ambient_rank)))
    if not support(d):
        return Properness("not_proper", _interior_sample(sigma))
    degp = deg_polyhedron(d)
    if d.base.kind == PROJECTIVE_LINE:
        for v in degp.vertices:
            if not cone_contains(sigma, v):
                h = next(h for h in halfspaces(sigma) if dot(h, v) < 0)
                return Properness("not_proper", h)
        zero = tuple(Fraction(0) for _ in range(sigma.ambient_rank))
        if _point_in_polyhedron(zero, degp):
            return Properness("not_proper", _interior_sample(sigma))
        return Properness("proper")
    # genus >= 1: decide by degrees alone
    status = "proper"
    for g in dual_cone(sigma).generators:
        val, _ = support_value(degp, g)
        if val < 0:
            return Properness("not_proper", g)
        if val == 0:
            status = "inconclusive_genus"
    return Properness(status)


def _interior_sample(sigma: Cone) -> tuple[int, ...]:
    gens = dual_cone(sigma).generators
    total = tuple(sum(g[i] for g in gens) for i in range(sigma.ambient_rank))
    return primitive(total)


def require_proper(d: PolyhedralDivisor) -> None:
    res = is_proper(d)
    if res.status != "proper":
        raise NotProperError(f"divisor is not proper (status {res.status}, witness {res.witness})")


@dataclass(frozen=True)
class ExtremalData:
    extremal_rays: tuple[tuple[int, ...], ...]
    non_extremal_rays: tuple[tuple[int, ...], ...]
    vertices: tuple[tuple[Point, tuple[Fraction, ...], int], ...]  # (point, vertex, mu)
    deg: SigmaPolyhedron | None


def _ray_meets_polyhedron(ray: tuple[int, ...], p: SigmaPolyhedron) -> bool:
    """Does {t * ray : t >= 0} intersect p?  Reduced to a 1-dim interval check."""
    from .polyhedra import _dd_halfspaces

    n = p.tail.ambient_rank
    normals: set[tuple[int, ...]] = set()
    for v in p.vertices:
        constraints = [scale_to_int((w[i] - v[i] for i in range(n))) for w in p.vertices if w != v]
        constraints += list(p.tail.generators)
        normals.update(_dd_halfspaces(tuple(constraints), n))
    lo = Fraction(0)
    hi = None
    for u in normals:
        a = Fraction(dot(u, ray))
        b, _ = support_value(p, u)
        if a == 0:
            if b > 0:
                return False
        elif a > 0:
            lo = max(lo, b / a)
        else:
            bound = b / a
            hi = bound if hi is None else min(hi, bound)
    return hi is None or lo <= hi


@lru_cache(maxsize=None)
def extremal_data(d: PolyhedralDivisor) -> ExtremalData:
    """Which tail rays survive on the contracted variety; every vertex does."""
    require_proper(d)
    from .polyhedra import minimal_generators

    rays = minimal_generators(d.tail)
    verts = []
    for p, poly in support(d):
        for v in poly.vertices:
            verts.append((p, v, mu(v)))
    if not d.base.projective:
        return ExtremalData(tuple(rays), (), tuple(verts), None)
    degp = deg_polyhedron(d)
    ext, non_ext = [], []
    for r in rays:
        (non_ext if _ray_meets_polyhedron(r, degp) else ext).append(r)
    return ExtremalData(tuple(ext), tuple(non_ext), tuple(verts), degp)


def higher_direct_dims(d: PolyhedralDivisor, u: Sequence[int]) -> tuple[int, int]:
    """Dimensions (h0, h1) of the degree-u piece of the section ring and of the
    first cohomology, via line-bundle cohomology on P^1."""
    if d.base.kind != PROJECTIVE_LINE:
        raise UnsupportedBase("cohomology dimensions are computed on P^1 only")
    if any(Fraction(x).denominator != 1 for x in u):
        raise ValueError("u must be a lattice point")
    for g in d.tail.generators:
        if dot(u, g) < 0:
            raise UnboundedBelow("u lies outside the dual tail cone")
    _, fdeg = floor_degree(evaluate(d, u))
    return max(fdeg + 1, 0), max(-fdeg - 1, 0)
