"""Constructing factorial rings from multiplicity data on P^1: the inductive
divisor construction, trinomial ring presentations, a brute-force graded
dimension comparison, and the classification of the isolated cases."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .divclass import factoriality_det, generator_degrees
from .errors import ConstructionFailed, DegenerateInput
from .pdiv import (
    P1,
    Point,
    PolyhedralDivisor,
    coefficient_at,
    higher_direct_dims,
    polyhedral_divisor,
    rank,
)
from .polyhedra import make_cone, lattice_points, sigma_polyhedron
from .ratlin import dot, ext_gcd, ext_gcd_multi, scale_to_int


@dataclass(frozen=True)
class AdmissibleData:
    """Entries (point, multiplicity tuple) with pairwise coprime tuple gcds."""

    entries: tuple[tuple[Point, tuple[int, ...]], ...]

    @property
    def extra_rank(self) -> int:
        return sum(len(t) - 1 for _, t in self.entries)

    @property
    def dimension(self) -> int:
        return 2 + self.extra_rank


def admissible_data(entries: Sequence[tuple[Point, Sequence[int]]]) -> AdmissibleData:
    items = [(p, tuple(int(m) for m in t)) for p, t in entries]
    if not items:
        raise DegenerateInput("need at least one entry")
    points = [p for p, _ in items]
    if len(points) != len(set(points)):
        raise DegenerateInput("entry points must be distinct")
    for _, t in items:
        if not t or any(m < 1 for m in t):
            raise DegenerateInput("multiplicities must be positive")
    gcds = [math.gcd(*t) for _, t in items]
    for i in range(len(gcds)):
        for j in range(i + 1, len(gcds)):
            if math.gcd(gcds[i], gcds[j]) != 1:
                raise DegenerateInput("tuple gcds must be pairwise coprime")
    return AdmissibleData(tuple(items))


def default_points(count: int) -> list[Point]:
    pts = [Point.infinity(), Point.coord(0)]
    pts += [Point.coord(i) for i in range(1, max(count - 1, 1))]
    return pts[:count]


def _build_vertices(mus: list[tuple[int, ...]], tweaks: dict, depth: int = 0):
    """Vertex vectors per entry, recursing on the total tuple length.

    Base case: singleton tuples get c_i / mu_i on a line, with the Bezout
    identity taken on the complementary products.  Induction: split the last
    two members of the first long tuple through their gcd and spread them into
    a fresh coordinate.
    """
    j = next((i for i, t in enumerate(mus) if len(t) > 1), None)
    if j is None:
        vals = [t[0] for t in mus]
        total = math.prod(vals)
        partials = [total // v for v in vals]
        g, coeffs = ext_gcd_multi(partials)
        if g != 1:
            raise DegenerateInput("complementary products are not coprime")
        for (i1, i2), k in tweaks.get(("base", depth), {}).items():
            coeffs[i1] += k * vals[i1]
            coeffs[i2] -= k * vals[i2]
        assert sum(c * p for c, p in zip(coeffs, partials)) == 1
        return [[(Fraction(c, v),)] for c, v in zip(coeffs, vals)]
    mu_a, mu_b = mus[j][-2], mus[j][-1]
    g, alpha, beta = ext_gcd(mu_a, mu_b)
    k = tweaks.get(("split", depth))
    if k:
        alpha -= k * mu_b
        beta += k * mu_a
    assert alpha * mu_a + beta * mu_b == g
    sub_mus = list(mus)
    sub_mus[j] = mus[j][:-2] + (g,)
    sub = _build_vertices(sub_mus, tweaks, depth + 1)
    out = []
    for i, verts in enumerate(sub):
        if i != j:
            out.append([v + (Fraction(0),) for v in verts])
        else:
            prefix = verts[-1]
            new = [v + (Fraction(0),) for v in verts[:-1]]
            new.append(prefix + (Fraction(-beta, mu_a),))
            new.append(prefix + (Fraction(alpha, mu_b),))
            out.append(new)
    return out


def _assemble(data: AdmissibleData, tweaks: dict) -> PolyhedralDivisor:
    mus = [t for _, t in data.entries]
    verts = _build_vertices(mus, tweaks)
    n = data.extra_rank + 1
    rays = []
    for pick in product(*verts):
        total = tuple(sum(v[i] for v in pick) for i in range(n))
        rays.append(scale_to_int(total))
    tail = make_cone(rays, n)
    coeffs = {p: sigma_polyhedron(vs, tail) for (p, _), vs in zip(data.entries, verts)}
    return polyhedral_divisor(P1, tail, coeffs)


def construct_divisor(data: AdmissibleData) -> PolyhedralDivisor:
    """Polyhedral divisor with factorial section ring for the given data.

    The result is verified through the determinant criterion; if the default
    Bezout normalization ever failed it, nearby normalizations are searched,
    and exhaustion is an error rather than an unverified return.
    """
    d = _assemble(data, {})
    if abs(factoriality_det(d).det or 0) == 1:
        return d
    depths = data.extra_rank
    s = len(data.entries)
    candidates: list[dict] = []
    for depth in range(depths):
        for k in range(1, 17):
            for sign in (1, -1):
                candidates.append({("split", depth): sign * k})
    for i1 in range(s):
        for i2 in range(i1 + 1, s):
            for k in range(1, 17):
                for sign in (1, -1):
                    candidates.append({("base", depths): {(i1, i2): sign * k}})
    for tweak in candidates:
        try:
            d = _assemble(data, tweak)
        except DegenerateInput:
            continue
        if abs(factoriality_det(d).det or 0) == 1:
            return d
    raise ConstructionFailed("no Bezout normalization passed the determinant check")


def _var_name(i: int, j: int, r_i: int) -> str:
    return f"T{i + 1}" if r_i == 1 else f"T{i + 1}{j + 1}"


def _monomial(names: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class Presentation:
    """Trinomial complete-intersection presentation of the section ring."""

    variables: tuple[str, ...]
    degrees: tuple[tuple[int, ...], ...]
    relations: tuple[str, ...]
    leads: tuple[tuple[int, ...], ...]
    dimension: int


def _normalized_coordinates(points: Sequence[Point]) -> list[Fraction]:
    """Images of points 3.. under the Moebius map sending the first three
    points to infinity, 0, 1."""
    if len(points) < 3:
        return []
    z1, z2, z3 = points[0], points[1], points[2]

    def phi(p: Point) -> Fraction:
        # cross ratio ((t - z2)(z3 - z1)) / ((t - z1)(z3 - z2))
        if z1.is_infinity:
            return (p.value - z2.value) / (z3.value - z2.value)
        if z2.is_infinity:
            return (z3.value - z1.value) / (p.value - z1.value)
        if z3.is_infinity:
            return (p.value - z2.value) / (p.value - z1.value)
        if p.is_infinity:
            return (z3.value - z1.value) / (z3.value - z2.value)
        return ((p.value - z2.value) * (z3.value - z1.value)) / (
            (p.value - z1.value) * (z3.value - z2.value)
        )

    out = [Fraction(1)]
    for p in points[3:]:
        out.append(phi(p))
    return out


def presentation(data: AdmissibleData, divisor: PolyhedralDivisor | None = None) -> Presentation:
    """Variables, trinomial relations and multidegrees for the data's ring.

    Needs at least two entries: with a single one the vertex divisors alone do
    not generate (the ring is still a polynomial ring, but of higher dimension).
    """
    s = len(data.entries)
    if s < 2:
        raise DegenerateInput("a presentation needs at least two entries")
    points = [p for p, _ in data.entries]
    if len(set(points)) != s:
        raise DegenerateInput("entry points must be distinct")
    mus = [t for _, t in data.entries]
    names: list[str] = []
    var_index: dict[tuple[int, int], int] = {}
    for i, t in enumerate(mus):
        for j in range(len(t)):
            var_index[(i, j)] = len(names)
            names.append(_var_name(i, j, len(t)))
    if divisor is None:
        divisor = construct_divisor(data)
    degrees: list[tuple[int, ...]] = []
    for p, t in data.entries:
        verts = coefficient_at(divisor, p).vertices
        assert len(verts) == len(t), "one vertex per tuple member"
        # vertices are stored sorted; realign with the tuple through the
        # multiplicity (ties are symmetric in the relations, so any order works)
        by_mu: dict[int, list] = {}
        for v in verts:
            by_mu.setdefault(_mu_of(v), []).append(v)
        for m in t:
            v = by_mu[m].pop(0)
            u, _ = generator_degrees(divisor, (p, v))
            degrees.append(u)
    zs = _normalized_coordinates(points)
    relations = []
    leads = []
    nvar = len(names)
    for i in range(2, s):
        lead = [0] * nvar
        second = [0] * nvar
        third = [0] * nvar
        for j, m in enumerate(mus[i]):
            lead[var_index[(i, j)]] = m
        for j, m in enumerate(mus[1]):
            second[var_index[(1, j)]] = m
        for j, m in enumerate(mus[0]):
            third[var_index[(0, j)]] = m
        z = zs[i - 2]
        zstr = "" if z == 1 else f"{z}*"
        relations.append(
            f"{_monomial(names, lead)} + {_monomial(names, second)} - {zstr}{_monomial(names, third)}"
        )
        leads.append(tuple(lead))
    return Presentation(tuple(names), tuple(degrees), tuple(relations), tuple(leads), data.dimension)


def _mu_of(v) -> int:
    out = 1
    for x in v:
        out = math.lcm(out, Fraction(x).denominator)
    return out


@dataclass(frozen=True)
class HilbertComparison:
    match: bool
    first_mismatch: int | None
    dims: tuple[int, ...]


def hilbert_compare(
    d: PolyhedralDivisor,
    variables: Sequence[tuple[int, ...]],
    leads: Sequence[tuple[int, ...]],
    weight: Sequence[int],
    d_max: int,
) -> HilbertComparison:
    """Compare graded dimensions of the section ring against monomial counts.

    Side A sums cohomology dimensions over the lattice degrees of each weight;
    side B counts monomials avoiding every relation's leading monomial, which
    is exact because the leading monomials live in disjoint variable groups
    (inclusion-exclusion over subsets).
    """
    from .polyhedra import cone_dim, halfspaces

    n = rank(d)
    if cone_dim(d.tail) != n:
        raise DegenerateInput("graded comparison needs a full-dimensional tail cone")
    if any(dot(h, weight) <= 0 for h in halfspaces(d.tail)):
        raise DegenerateInput("the weight vector must be interior to the tail cone")
    w_vars = [dot(weight, u) for u in variables]
    if any(w <= 0 for w in w_vars):
        raise DegenerateInput("the weight vector must be positive on every generator degree")
    side_a = [0] * (d_max + 1)
    rows = [tuple(g) for g in d.tail.generators]
    rhs = [Fraction(0)] * len(rows)
    rows.append(tuple(Fraction(-x) for x in weight))
    rhs.append(Fraction(-d_max))
    for u in lattice_points(rows, rhs, n):
        w = dot(weight, u)
        if 0 <= w <= d_max:
            h0, _ = higher_direct_dims(d, u)
            side_a[w] += h0
    counts = [0] * (d_max + 1)
    counts[0] = 1
    for w in w_vars:
        for deg in range(w, d_max + 1):
            counts[deg] += counts[deg - w]
    lead_weights = [sum(e * w for e, w in zip(lead, w_vars)) for lead in leads]
    side_b = []
    for deg in range(d_max + 1):
        total = 0
        for mask in range(1 << len(lead_weights)):
            off = deg
            sign = 1
            for i, lw in enumerate(lead_weights):
                if mask >> i & 1:
                    off -= lw
                    sign = -sign
            if off >= 0:
                total += sign * counts[off]
        side_b.append(total)
    for deg in range(d_max + 1):
        if side_a[deg] != side_b[deg]:
            return HilbertComparison(False, deg, tuple(side_a))
    return HilbertComparison(True, None, tuple(side_a))


def hilbert_compare_presentation(
    d: PolyhedralDivisor, pres: Presentation, weight: Sequence[int], d_max: int
) -> HilbertComparison:
    return hilbert_compare(d, pres.degrees, pres.leads, weight, d_max)


@dataclass(frozen=True)
class IsolatedFamily:
    label: str  # "cA" | "fourfold_A" | "fivefold_A1" | "smooth" | "not_isolated" | "not_hypersurface_dim"
    params: tuple[int, ...] = ()

    @property
    def isolated(self) -> bool:
        return self.label in ("cA", "fourfold_A", "fivefold_A1", "smooth")


def classify_isolated_factorial(data: AdmissibleData, verify: bool = True) -> IsolatedFamily:
    """Match the data against the families with isolated singular vertex.

    Singleton-1 entries present linear variables and are dropped; any long
    tuple beyond (1,1) forces a positive-dimensional singular locus.  With
    verify on, the patterns are confirmed against the facet-by-facet test on
    the constructed divisor.
    """
    if data.dimension < 3:
        return IsolatedFamily("not_hypersurface_dim")
    reduced = [tuple(sorted(t)) for _, t in data.entries if tuple(t) != (1,)]
    fam = _match_families(reduced)
    if verify:
        from .singcheck import check_isolated

        iso = check_isolated(construct_divisor(data))
        assert fam.isolated == bool(iso), f"pattern and facet test disagree on {data}"
    return fam


def _match_families(reduced: list[tuple[int, ...]]) -> IsolatedFamily:
    if len(reduced) <= 2:
        # at most two nontrivial term groups: every relation eliminates a
        # linear variable and a free algebra remains
        return IsolatedFamily("smooth")
    for t in reduced:
        if len(t) >= 2 and (max(t) > 1 or len(t) >= 3):
            return IsolatedFamily("not_isolated")
    pairs = sum(1 for t in reduced if t == (1, 1))
    singles = sorted(t[0] for t in reduced if len(t) == 1)
    if pairs == 1 and len(singles) == 2:
        a, b = singles
        return IsolatedFamily("cA", (a - 1, b))
    if pairs == 2 and len(singles) == 1:
        return IsolatedFamily("fourfold_A", (singles[0] - 1,))
    if pairs == 3 and not singles:
        return IsolatedFamily("fivefold_A1")
    return IsolatedFamily("not_isolated")
