"""Numeric location of torus critical points and their critical values.

Solves x df/dx = y df/dy = z df/dz = 0 by damped Newton iteration from
seeded pseudo-random starts, then deduplicates, clusters the values, and
compares against expected value lists.  This is the only module in the
package using floating-point arithmetic; every gradient is still derived
exactly before being compiled to complex-coefficient evaluators.
"""

from __future__ import annotations

import math
import random
import warnings
from cmath import rect
from dataclasses import dataclass

from .laurent import LaurentPolynomial

MAX_ITERATIONS = 200
MAX_STEP_HALVINGS = 20
COORD_FLOOR = 1e-8
COORD_CEILING = 1e8
DEFAULT_STARTS = 512
DEFAULT_SEED = 1
DEFAULT_TOL = 1e-10
DEFAULT_CLUSTER_RADIUS = 1e-6
_START_STREAM_STRIDE = 1_000_003


@dataclass(frozen=True)
class CriticalPoint:
    location: tuple
    value: complex
    residual: float


@dataclass(frozen=True)
class ValueCluster:
    value: complex
    count: int
    residual_max: float


@dataclass(frozen=True)
class CriticalValueSet:
    clusters: tuple

    @property
    def values(self):
        return [c.value for c in self.clusters]

    def to_obj(self):
        return [
            {
                "value": [c.value.real, c.value.imag],
                "count": c.count,
                "residual_max": c.residual_max,
            }
            for c in self.clusters
        ]


def _compile(poly: LaurentPolynomial):
    return tuple((e[0], e[1], e[2], complex(c)) for e, c in sorted(poly.terms.items()))


def _evaluate(compiled, x, y, z) -> complex:
    total = 0j
    for a, b, c, coef in compiled:
        total += coef * x ** a * y ** b * z ** c
    return total


def find_critical_points(
    f: LaurentPolynomial,
    starts: int = DEFAULT_STARTS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
):
    if starts < 1:
        raise ValueError("starts must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    grads = f.log_gradient()
    g = [_compile(p) for p in grads]
    # second log-derivatives; the Jacobian entry is their value divided by
    # the coordinate stepped against
    h = [[_compile(p) for p in gi.log_gradient()] for gi in grads]
    fc = _compile(f)

    accepted = []
    for k in range(starts):
        rng = random.Random(seed * _START_STREAM_STRIDE + k)
        point = [
            rect(math.exp(rng.uniform(-1.6, 1.6)), rng.uniform(0, 2 * math.pi))
            for _ in range(3)
        ]
        landed = _newton(g, h, point, tol)
        if landed is None:
            continue
        loc, residual = landed
        value = _evaluate(fc, *loc)
        accepted.append(CriticalPoint(tuple(loc), value, residual))

    unique = []
    for p in accepted:
        for i, q in enumerate(unique):
            if max(abs(a - b) for a, b in zip(p.location, q.location)) <= DEFAULT_CLUSTER_RADIUS:
                if p.residual < q.residual:
                    unique[i] = p
                break
        else:
            unique.append(p)
    unique.sort(
        key=lambda p: (
            p.value.real,
            p.value.imag,
            *[(c.real, c.imag) for c in p.location],
        )
    )
    if not unique:
        warnings.warn("no critical points found; consider more starts")
    return unique


def _newton(g, h, point, tol):
    x, y, z = point
    for _ in range(MAX_ITERATIONS):
        try:
            if not all(COORD_FLOOR < abs(c) < COORD_CEILING for c in (x, y, z)):
                return None
            r = [_evaluate(gi, x, y, z) for gi in g]
            residual = max(abs(v) for v in r)
            if residual < tol:
                return (x, y, z), residual
            jac = [
                [
                    _evaluate(h[i][0], x, y, z) / x,
                    _evaluate(h[i][1], x, y, z) / y,
                    _evaluate(h[i][2], x, y, z) / z,
                ]
                for i in range(3)
            ]
            step = _solve3(jac, [-v for v in r])
            if step is None:
                return None
            scale = 1.0
            for _ in range(MAX_STEP_HALVINGS):
                nx, ny, nz = x + scale * step[0], y + scale * step[1], z + scale * step[2]
                if all(COORD_FLOOR < abs(c) < COORD_CEILING for c in (nx, ny, nz)):
                    new_res = max(
                        abs(_evaluate(gi, nx, ny, nz)) for gi in g
                    )
                    if new_res < residual:
                        break
                scale /= 2
            else:
                return None
            x, y, z = x + scale * step[0], y + scale * step[1], z + scale * step[2]
        except (OverflowError, ZeroDivisionError):
            return None
    return None


def _solve3(m, rhs):
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    if abs(det) < 1e-300:
        return None
    out = []
    for col in range(3):
        mm = [list(row) for row in m]
        for r in range(3):
            mm[r][col] = rhs[r]
        d = (
            mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1])
            - mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0])
            + mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0])
        )
        out.append(d / det)
    return out


def cluster_values(points, radius: float = DEFAULT_CLUSTER_RADIUS) -> CriticalValueSet:
    """Single-linkage clustering of the critical values."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i].value - points[j].value) <= radius:
                parent[find(i)] = find(j)

    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(points[i])
    clusters = []
    for members in groups.values():
        centroid = sum(p.value for p in members) / len(members)
        clusters.append(
            ValueCluster(centroid, len(members), max(p.residual for p in members))
        )
    clusters.sort(key=lambda c: (c.value.real, c.value.imag))
    return CriticalValueSet(tuple(clusters))


def check_expected_values(found: CriticalValueSet, expected, tol: float = 1e-8):
    """(ok, report): ok iff every expected value has a cluster within tol.

    Clusters matching no expected value are listed as extras and do not
    affect ok; the stated value lists are not treated as exhaustive.
    """
    matched = []
    missing = []
    used = set()
    for v in expected:
        v = complex(v)
        best = None
        for i, c in enumerate(found.clusters):
            d = abs(c.value - v)
            if d <= tol and (best is None or d < best[0]):
                best = (d, i)
        if best is None:
            missing.append(v)
        else:
            used.add(best[1])
            matched.append(v)
    extra = [c.value for i, c in enumerate(found.clusters) if i not in used]
    report = {"matched": matched, "missing": missing, "extra": extra}
    return not missing, report
