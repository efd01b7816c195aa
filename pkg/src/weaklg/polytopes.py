"""Newton polytopes: exact hulls, duals, lattice counts, volumes, fans.

All arithmetic is exact (integers and Fractions).  Facets are stored as
(normal, offset) meaning the halfspace <normal, x> >= -offset, so a
positive offset on every facet is equivalent to the origin lying strictly
inside.  Hulls are built by exhaustive facet enumeration over point
triples; supports here have at most a few dozen points, so robustness is
worth more than asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import gcd

from ._linalg import rank
from .laurent import LaurentPolynomial


class PolytopeError(ValueError):
    pass


class DegenerateSupportError(PolytopeError):
    """Support spans an affine subspace of dimension below 3."""


class OriginNotInteriorError(PolytopeError):
    """Operation needs the origin strictly inside the polytope."""


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _det3(a, b, c):
    return _dot(a, _cross(b, c))


def _primitive(v):
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    if g == 0:
        raise PolytopeError("zero vector has no primitive form")
    return (v[0] // g, v[1] // g, v[2] // g)


class _Polytope:
    """Shared behavior of lattice and rational polytopes."""

    __slots__ = ("vertices", "facets")

    def __init__(self, vertices, facets):
        object.__setattr__(self, "vertices", tuple(sorted(vertices)))
        object.__setattr__(self, "facets", tuple(sorted(facets)))

    def __setattr__(self, name, value):
        raise AttributeError("polytopes are immutable")

    def __eq__(self, other):
        return type(self) is type(other) and self.vertices == other.vertices

    __hash__ = None

    def contains(self, point, strict=False) -> bool:
        for n, d in self.facets:
            v = _dot(n, point)
            if v < -d or (strict and v == -d):
                return False
        return True

    def is_origin_interior(self) -> bool:
        return all(d > 0 for _, d in self.facets)

    def _facet_cycle(self, normal, offset):
        """Vertices incident to the facet, in boundary order."""
        pts = [v for v in self.vertices if _dot(normal, v) == -offset]
        drop = max(range(3), key=lambda k: abs(normal[k]))
        keep = [k for k in range(3) if k != drop]
        flat = [(Fraction(p[keep[0]]), Fraction(p[keep[1]]), p) for p in pts]
        cx = sum(q[0] for q in flat) / len(flat)
        cy = sum(q[1] for q in flat) / len(flat)
        rel = [(x - cx, y - cy, p) for x, y, p in flat]

        def half(q):
            return 0 if q[1] > 0 or (q[1] == 0 and q[0] > 0) else 1

        def compare(a, b):
            ha, hb = half(a), half(b)
            if ha != hb:
                return ha - hb
            cross = a[0] * b[1] - a[1] * b[0]
            return -1 if cross > 0 else (1 if cross < 0 else 0)

        rel.sort(key=cmp_to_key(compare))
        return [q[2] for q in rel]

    def volume(self) -> Fraction:
        """Euclidean volume (the unit tetrahedron has volume 1/6)."""
        nv = len(self.vertices)
        ref = tuple(
            sum(Fraction(v[k]) for v in self.vertices) / nv for k in range(3)
        )
        total = Fraction(0)
        for normal, offset in self.facets:
            cycle = self._facet_cycle(normal, offset)
            a = cycle[0]
            for b, c in zip(cycle[1:], cycle[2:]):
                det = _det3(_sub(b, a), _sub(c, a), _sub(ref, a))
                total += abs(Fraction(det))
        return total / 6


class LatticePolytope(_Polytope):
    """Full-dimensional hull of integer points, exact facet description."""

    @classmethod
    def from_points(cls, points) -> "LatticePolytope":
        pts = sorted({(int(p[0]), int(p[1]), int(p[2])) for p in points})
        if len(pts) < 4:
            raise DegenerateSupportError(
                f"{len(pts)} distinct points cannot span a solid"
            )
        base = pts[0]
        if rank([[Fraction(c) for c in _sub(p, base)] for p in pts[1:]]) < 3:
            raise DegenerateSupportError("support is affinely dependent")

        facets = set()
        for p1, p2, p3 in combinations(pts, 3):
            n = _cross(_sub(p2, p1), _sub(p3, p1))
            if n == (0, 0, 0):
                continue
            n = _primitive(n)
            level = _dot(n, p1)
            dots = [_dot(n, p) for p in pts]
            if all(v >= level for v in dots):
                facets.add((n, -level))
            elif all(v <= level for v in dots):
                facets.add(((-n[0], -n[1], -n[2]), level))

        vertices = []
        for p in pts:
            tight = [n for n, d in facets if _dot(n, p) == -d]
            if len(tight) >= 3 and rank([[Fraction(c) for c in n] for n in tight]) == 3:
                vertices.append(p)
        return cls(vertices, facets)


class RationalPolytope(_Polytope):
    def dual(self) -> "RationalPolytope":
        return _polar(self)


def _polar(p: _Polytope) -> RationalPolytope:
    if not p.is_origin_interior():
        raise OriginNotInteriorError(
            "dual needs the origin strictly inside the polytope"
        )
    verts = [
        tuple(Fraction(c) / Fraction(d) for c in n) for n, d in p.facets
    ]
    facets = [
        (tuple(Fraction(c) for c in v), Fraction(1)) for v in p.vertices
    ]
    return RationalPolytope(verts, facets)


def newton_polytope(f: LaurentPolynomial) -> LatticePolytope:
    return LatticePolytope.from_points(f.support())


def dual_polytope(p: LatticePolytope) -> RationalPolytope:
    return _polar(p)


def interior_lattice_points(p: _Polytope) -> list:
    los = [_ceil(min(v[k] for v in p.vertices)) for k in range(3)]
    his = [_floor(max(v[k] for v in p.vertices)) for k in range(3)]
    out = []
    for a in range(los[0], his[0] + 1):
        for b in range(los[1], his[1] + 1):
            for c in range(los[2], his[2] + 1):
                if p.contains((a, b, c), strict=True):
                    out.append((a, b, c))
    return out


def _ceil(x) -> int:
    f = Fraction(x)
    return -((-f.numerator) // f.denominator)


def _floor(x) -> int:
    f = Fraction(x)
    return f.numerator // f.denominator


def ehrhart_count(p: RationalPolytope, m: int) -> int:
    """Number of integer points q with q/m inside the polytope; 1 for m = 0."""
    if m < 0:
        raise PolytopeError("dilation factor must be nonnegative")
    if m == 0:
        return 1
    # clear denominators once per facet: <n, q> >= -d*m as pure integers
    int_facets = []
    for n, d in p.facets:
        scale = 1
        for c in (*n, d):
            scale = scale * Fraction(c).denominator // gcd(
                scale, Fraction(c).denominator
            )
        int_facets.append(
            (
                tuple(int(Fraction(c) * scale) for c in n),
                int(Fraction(d) * scale),
            )
        )
    count = 0
    los = [_ceil(m * min(Fraction(v[k]) for v in p.vertices)) for k in range(3)]
    his = [_floor(m * max(Fraction(v[k]) for v in p.vertices)) for k in range(3)]
    for a in range(los[0], his[0] + 1):
        for b in range(los[1], his[1] + 1):
            for c in range(los[2], his[2] + 1):
                if all(
                    n[0] * a + n[1] * b + n[2] * c >= -d * m for n, d in int_facets
                ):
                    count += 1
    return count


def check_toric_condition(f: LaurentPolynomial, degree: int, m_max: int = 3):
    """Compare E(m) against m(m+1)(2m+1)/12 * degree + 2m + 1 for m <= m_max.

    Returns (ok, rows); each row records m, the count, and the predicted value.
    """
    if m_max < 1:
        raise PolytopeError("m_max must be at least 1")
    dual = dual_polytope(newton_polytope(f))
    rows = []
    ok = True
    for m in range(1, m_max + 1):
        count = ehrhart_count(dual, m)
        predicted = Fraction(m * (m + 1) * (2 * m + 1), 12) * degree + 2 * m + 1
        match = count == predicted
        ok = ok and match
        rows.append({"m": m, "count": count, "predicted": predicted, "ok": match})
    return ok, rows


def normalized_volume(p: _Polytope) -> Fraction:
    return p.volume()


def is_canonical(f: LaurentPolynomial) -> bool:
    return interior_lattice_points(newton_polytope(f)) == [(0, 0, 0)]


class Fan:
    """Fan over the proper faces of a polytope with interior origin."""

    __slots__ = ("rays", "cones")

    def __init__(self, rays, cones):
        object.__setattr__(self, "rays", tuple(rays))
        object.__setattr__(self, "cones", tuple(tuple(sorted(c)) for c in cones))

    def __setattr__(self, name, value):
        raise AttributeError("Fan is immutable")


def face_fan(p: LatticePolytope) -> Fan:
    if not p.is_origin_interior():
        raise OriginNotInteriorError("face fan is complete only with 0 interior")
    rays = []
    ray_index = {}
    vert_ray = {}
    for v in p.vertices:
        r = _primitive(v)
        if r not in ray_index:
            ray_index[r] = len(rays)
            rays.append(r)
        vert_ray[v] = ray_index[r]
    cones = []
    for n, d in p.facets:
        cone = {vert_ray[v] for v in p.vertices if _dot(n, v) == -d}
        cones.append(tuple(sorted(cone)))
    return Fan(rays, cones)


def picard_rank(fan: Fan) -> int:
    """Dimension of the continuous piecewise-linear function space minus 3.

    One linear functional per maximal cone, forced to agree on every ray
    shared by two cones; linear algebra over the rationals, torsion ignored.
    """
    ncones = len(fan.cones)
    if ncones < 2:
        raise PolytopeError("fan is not complete")
    equations = []
    for (i, ci), (j, cj) in combinations(enumerate(fan.cones), 2):
        for r in set(ci) & set(cj):
            ray = fan.rays[r]
            row = [Fraction(0)] * (3 * ncones)
            for k in range(3):
                row[3 * i + k] = Fraction(ray[k])
                row[3 * j + k] = -Fraction(ray[k])
            equations.append(row)
    if not equations:
        raise PolytopeError("fan cones share no rays; not a complete fan")
    dim = 3 * ncones - rank(equations)
    return dim - 3


def class_group_rank(fan: Fan) -> int:
    if len(fan.rays) < 4:
        raise PolytopeError("a complete fan needs at least 4 rays")
    if rank([[Fraction(c) for c in r] for r in fan.rays]) < 3:
        raise PolytopeError("rays do not span space")
    return len(fan.rays) - 3
