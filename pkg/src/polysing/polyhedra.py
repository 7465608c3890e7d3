"""Cones, sigma-polyhedra, support functions, quasifans and Cayley cones.

Everything is exact: cones are given by primitive integer generators, polyhedra
by rational vertices plus a tail cone.  Half-space descriptions are derived on
demand by a double description sweep; the ambient rank is capped at 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import TailMismatch, UnboundedBelow, UnsupportedRank
from .ratlin import (
    dot,
    matrix_rank,
    primitive,
    scale_to_int,
    vec_add,
    vec_sub,
)

RANK_CAP = 4


@dataclass(frozen=True)
class Cone:
    """Finitely generated rational cone {sum lambda_i g_i : lambda_i >= 0}.

    Generators are primitive, deduplicated and lexicographically sorted; they
    are not required to be extreme rays.  Pointedness, dimension and the
    half-space description are computed, never assumed.
    """

    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]


def make_cone(vectors: Iterable[Sequence], ambient_rank: int | None = None) -> Cone:
    vecs = list(vectors)
    if ambient_rank is None:
        if not vecs:
            raise ValueError("ambient_rank required for a cone with no generators")
        ambient_rank = len(vecs[0])
    gens = set()
    for v in vecs:
        if len(v) != ambient_rank:
            raise ValueError("generator dimension mismatch")
        if any(Fraction(x).denominator != 1 for x in v):
            p = scale_to_int([Fraction(x) for x in v])
        else:
            p = primitive([int(x) for x in v])
        if any(p):
            gens.add(p)
    return Cone(ambient_rank, tuple(sorted(gens)))


def _check_rank(n: int) -> None:
    if n > RANK_CAP:
        raise UnsupportedRank(f"ambient rank {n} exceeds the supported cap {RANK_CAP}")


def _dd_halfspaces(constraints: Sequence[tuple[int, ...]], rank: int) -> tuple[tuple[int, ...], ...]:
    """Generators of {u : <a, u> >= 0 for all a} by double description.

    After each constraint the candidate set is pruned with the active-set rank
    test, which never discards a needed generator (it may keep redundant ones
    when the cone has lineality).
    """
    rays: list[tuple[int, ...]] = []
    for i in range(rank):
        e = tuple(1 if j == i else 0 for j in range(rank))
        rays.append(e)
        rays.append(tuple(-x for x in e))
    done: list[tuple[int, ...]] = []
    for a in constraints:
        a = primitive(a)
        if not any(a) or a in done:
            continue
        plus = [r for r in rays if dot(a, r) > 0]
        zero = [r for r in rays if dot(a, r) == 0]
        minus = [r for r in rays if dot(a, r) < 0]
        new = {r for r in plus}
        new.update(zero)
        for rp in plus:
            wp = dot(a, rp)
            for rm in minus:
                wm = dot(a, rm)
                comb = primitive(tuple(wp * x - wm * y for x, y in zip(rm, rp)))
                if any(comb):
                    new.add(comb)
        done.append(a)
        if len(new) <= 2 * rank + 4:
            # keeping a few redundant generators is harmless; prune only when
            # the candidate set could start compounding
            rays = sorted(new)
            continue
        r_done = matrix_rank(done)
        kept = []
        for r in sorted(new):
            active = [c for c in done if dot(c, r) == 0]
            rank_active = matrix_rank(active) if active else 0
            if rank_active >= r_done - 1:
                kept.append(r)
        rays = kept
    return tuple(sorted(rays))


@lru_cache(maxsize=None)
def halfspaces(c: Cone) -> tuple[tuple[int, ...], ...]:
    """Primitive normals h with c = {v : <h, v> >= 0 for all h} (not minimal)."""
    return _dd_halfspaces(c.generators, c.ambient_rank)


def cone_contains(c: Cone, v: Sequence) -> bool:
    return all(dot(h, v) >= 0 for h in halfspaces(c))


@lru_cache(maxsize=None)
def minimal_generators(c: Cone) -> tuple[tuple[int, ...], ...]:
    """Greedy minimal generating subset (the extreme rays when c is pointed)."""
    gens = list(c.generators)
    kept = list(gens)
    for g in gens:
        others = [x for x in kept if x != g]
        if not others:
            continue
        sub = Cone(c.ambient_rank, tuple(sorted(others)))
        if cone_contains(sub, g):
            kept = others
    return tuple(sorted(kept))


def dual_cone(c: Cone) -> Cone:
    """The cone of functionals nonnegative on c, as a generated cone."""
    _check_rank(c.ambient_rank)
    raw = Cone(c.ambient_rank, halfspaces(c))
    return Cone(c.ambient_rank, minimal_generators(raw))


def cone_dim(c: Cone) -> int:
    return matrix_rank(c.generators) if c.generators else 0


def is_pointed(c: Cone) -> bool:
    # pointed iff the dual cone is full-dimensional
    return matrix_rank(halfspaces(c)) == c.ambient_rank if c.ambient_rank else True


def _max_minor_gcd(rows: Sequence[tuple[int, ...]]) -> int:
    k = len(rows)
    if k == 0:
        return 1
    n = len(rows[0])
    g = 0
    for cols in combinations(range(n), k):
        det = _int_det([[row[j] for j in cols] for row in rows])
        g = gcd2(g, abs(det))
        if g == 1:
            return 1
    return g


def gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _int_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    mat = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if mat[i][k] != 0), None)
            if piv is None:
                return 0
            mat[k], mat[piv] = mat[piv], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[n - 1][n - 1]


def is_regular(c: Cone) -> bool:
    """Pointed, simplicial, and the primitive extreme rays extend to a lattice basis."""
    if not c.generators:
        return True
    if not is_pointed(c):
        return False
    rays = minimal_generators(c)
    if len(rays) != matrix_rank(rays):
        return False
    return _max_minor_gcd(rays) == 1


def face_of_cone(c: Cone, u: Sequence) -> Cone:
    """The face of c cut out by u (valid for u in the dual cone)."""
    return Cone(c.ambient_rank, tuple(sorted(g for g in c.generators if dot(u, g) == 0)))


@dataclass(frozen=True)
class SigmaPolyhedron:
    """conv(vertices) + tail, with every listed vertex a true vertex."""

    vertices: tuple[tuple[Fraction, ...], ...]
    tail: Cone


def _rat_vec(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _true_vertices(
    candidates: Sequence[tuple[Fraction, ...]], tail: Cone
) -> tuple[tuple[Fraction, ...], ...]:
    cands = sorted(set(candidates))
    n = tail.ambient_rank
    kept = []
    for v in cands:
        constraints = [scale_to_int(vec_sub(w, v)) for w in cands if w != v]
        constraints += [g for g in tail.generators]
        normal_gens = _dd_halfspaces(tuple(constraints), n)
        if matrix_rank(normal_gens) == n:
            kept.append(v)
    return tuple(kept)


def sigma_polyhedron(vertices: Iterable[Sequence], tail: Cone) -> SigmaPolyhedron:
    """Build a sigma-polyhedron, pruning redundant candidate vertices."""
    verts = [_rat_vec(v) for v in vertices]
    if not verts:
        raise ValueError("a sigma-polyhedron needs at least one vertex")
    if any(len(v) != tail.ambient_rank for v in verts):
        raise ValueError("vertex dimension mismatch")
    return SigmaPolyhedron(_true_vertices(verts, tail), tail)


def tail_polyhedron(tail: Cone) -> SigmaPolyhedron:
    """The neutral element of Minkowski addition: the tail cone itself."""
    zero = tuple(Fraction(0) for _ in range(tail.ambient_rank))
    return SigmaPolyhedron((zero,), tail)


def is_tail_trivial(p: SigmaPolyhedron) -> bool:
    return p.vertices == (tuple(Fraction(0) for _ in range(p.tail.ambient_rank)),)


def translate(p: SigmaPolyhedron, w: Sequence) -> SigmaPolyhedron:
    wv = _rat_vec(w)
    return SigmaPolyhedron(tuple(sorted(vec_add(v, wv) for v in p.vertices)), p.tail)


def support_value(p: SigmaPolyhedron, u: Sequence) -> tuple[Fraction, tuple[tuple[Fraction, ...], ...]]:
    """Exact min of <u, .> over p with the full set of attaining vertices."""
    for g in p.tail.generators:
        if dot(u, g) < 0:
            raise UnboundedBelow(f"<{tuple(u)}, {g}> < 0 on a tail ray")
    values = [(dot(u, v), v) for v in p.vertices]
    best = min(val for val, _ in values)
    return best, tuple(v for val, v in values if val == best)


def minkowski_sum(a: SigmaPolyhedron, b: SigmaPolyhedron) -> SigmaPolyhedron:
    if a.tail != b.tail:
        raise TailMismatch("Minkowski summands must share one tail cone")
    sums = {vec_add(v, w) for v in a.vertices for w in b.vertices}
    return sigma_polyhedron(sums, a.tail)


def mu(v: Sequence) -> int:
    """Least positive integer making v a lattice point (lcm of denominators)."""
    out = 1
    for x in v:
        d = Fraction(x).denominator
        out = out * d // gcd2(out, d)
    return out


def cayley_cone(parts: Sequence[tuple[SigmaPolyhedron, Sequence[int]]]) -> Cone:
    """Cone over the parts placed at their marker heights, plus the common tail.

    Lives in Z^k x N with the k marker coordinates first; generators are the
    primitivized (marker, vertex) vectors and (0, ray) for each tail ray.
    """
    if not parts:
        raise ValueError("cayley_cone needs at least one part")
    tail = parts[0][0].tail
    k = len(parts[0][1])
    gens: list[tuple[Fraction, ...]] = []
    for poly, marker in parts:
        if poly.tail != tail:
            raise TailMismatch("Cayley parts must share one tail cone")
        if len(marker) != k:
            raise ValueError("marker dimension mismatch")
        for v in poly.vertices:
            gens.append(tuple(Fraction(x) for x in marker) + v)
    zero_marker = tuple(Fraction(0) for _ in range(k))
    for r in tail.generators:
        gens.append(zero_marker + tuple(Fraction(x) for x in r))
    return make_cone(gens, k + tail.ambient_rank)


@dataclass(frozen=True)
class QuasiCell:
    """A maximal cone of linearity together with the minimizing vertex selection."""

    cone: Cone
    selection: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class QuasiFan:
    maximal_cells: tuple[QuasiCell, ...]


def normal_quasifan(coeffs: Sequence[SigmaPolyhedron], sigma: Cone) -> QuasiFan:
    """Subdivision of the dual of sigma into the loci where one joint vertex
    selection minimizes every coefficient."""
    n = sigma.ambient_rank
    _check_rank(n)
    for p in coeffs:
        if p.tail != sigma:
            raise TailMismatch("coefficients must have tail cone sigma")
    cells = []
    for selection in product(*(p.vertices for p in coeffs)):
        constraints = [g for g in sigma.generators]
        for p, v in zip(coeffs, selection):
            for w in p.vertices:
                if w != v:
                    constraints.append(scale_to_int(vec_sub(w, v)))
        gens = _dd_halfspaces(tuple(constraints), n)
        if matrix_rank(gens) == n:
            cell = Cone(n, minimal_generators(Cone(n, gens)))
            cells.append(QuasiCell(cell, tuple(selection)))
    return QuasiFan(tuple(sorted(cells, key=lambda c: c.cone.generators)))


def face_of(p: SigmaPolyhedron, u: Sequence) -> SigmaPolyhedron:
    """The face of p where <u, .> attains its minimum (u in the dual tail)."""
    _, minimizers = support_value(p, u)
    return SigmaPolyhedron(minimizers, face_of_cone(p.tail, u))


def polytope_vertices(rows: Sequence[Sequence], rhs: Sequence, dim: int) -> list[tuple[Fraction, ...]]:
    """Vertices of {x : rows[i] . x >= rhs[i]} (meaningful for bounded regions)."""
    from .ratlin import Unique, solve_exact

    idx = [i for i in range(len(rows)) if any(rows[i])]
    verts = []
    for sel in combinations(idx, dim):
        mat = [rows[i] for i in sel]
        if matrix_rank(mat) != dim:
            continue
        res = solve_exact(mat, [rhs[i] for i in sel])
        if not isinstance(res, Unique):
            continue
        x = res.x
        if all(dot(rows[i], x) >= rhs[i] for i in range(len(rows))):
            verts.append(x)
    return verts


def lattice_points(rows: Sequence[Sequence], rhs: Sequence, dim: int):
    """Integer points of the bounded region {x : rows . x >= rhs}."""
    import math as _math
    from itertools import product as _product

    verts = polytope_vertices(rows, rhs, dim)
    if not verts:
        return
    ranges = []
    for j in range(dim):
        lo = _math.ceil(min(v[j] for v in verts))
        hi = _math.floor(max(v[j] for v in verts))
        ranges.append(range(lo, hi + 1))
    for x in _product(*ranges):
        if all(dot(rows[i], x) >= rhs[i] for i in range(len(rows))):
            yield x
