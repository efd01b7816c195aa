"""Differential operators in t and D = t d/dt, applied to and recovered from series.

An operator is a matrix c[i][j] of exact rationals, the coefficient of
t^i D^j.  Acting on a series sum phi(n) t^n, the t^n coefficient of the
image is sum over i, j of c[i][j] (n-i)^j phi(n-i).  Recovery solves for
a matrix annihilating a given series prefix by exact nullspace
computation and validates the candidate on every remaining coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._linalg import nullspace
from .periods import PowerSeries

# held-out margin: recovery consumes this many coefficients beyond the
# unknown count for the linear system, and validation needs more on top
RECOVERY_MARGIN = 20
_SYSTEM_EXTRA_ROWS = 10


class PFError(ValueError):
    """Base class for operator errors."""


class InsufficientSeriesError(PFError):
    def __init__(self, needed: int, got: int):
        super().__init__(f"series has {got} coefficients, need at least {needed}")
        self.needed = needed
        self.got = got


class AmbiguousRecoveryError(PFError):
    """Annihilator space has dimension > 1 for the requested shape."""

    def __init__(self, dimension: int):
        super().__init__(
            f"annihilator space has dimension {dimension}; lower deg_t to isolate"
        )
        self.dimension = dimension


class DiffOperator:
    """Immutable operator with a tight coefficient matrix."""

    __slots__ = ("coeff", "ord_D", "deg_t")

    def __init__(self, coeff):
        rows = [[c if isinstance(c, Fraction) else Fraction(c) for c in row] for row in coeff]
        if not rows or not rows[0]:
            raise PFError("coefficient matrix must be nonempty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise PFError("coefficient matrix must be rectangular")
        # trim zero high-degree rows and zero high-order columns
        while len(rows) > 1 and not any(rows[-1]):
            rows.pop()
        while width > 1 and all(row[width - 1] == 0 for row in rows):
            width -= 1
            rows = [row[:width] for row in rows]
        object.__setattr__(self, "coeff", tuple(tuple(row) for row in rows))
        object.__setattr__(self, "deg_t", len(rows) - 1)
        object.__setattr__(self, "ord_D", width - 1)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOperator is immutable")

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.coeff == other.coeff

    __hash__ = None

    def __repr__(self):
        return f"DiffOperator({self.to_text()})"

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.coeff for c in row)

    def to_text(self) -> str:
        """Sum over i of t^i (polynomial in D), D-ascending inside each block."""
        blocks = []
        for i, row in enumerate(self.coeff):
            parts = []
            for j, c in enumerate(row):
                if c == 0:
                    continue
                if j == 0:
                    parts.append(str(c))
                else:
                    dpow = "D" if j == 1 else f"D^{j}"
                    parts.append(dpow if c == 1 else f"{c}*{dpow}")
            if not parts:
                continue
            body = " + ".join(parts).replace("+ -", "- ")
            if i == 0:
                blocks.append(body if len(parts) == 1 else f"({body})")
            else:
                tpow = "t" if i == 1 else f"t^{i}"
                blocks.append(f"{tpow}*({body})")
        return " + ".join(blocks) if blocks else "0"

    def to_obj(self) -> dict:
        return {
            "ord_D": self.ord_D,
            "deg_t": self.deg_t,
            "coeff": [[str(c) for c in row] for row in self.coeff],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "DiffOperator":
        op = cls([[Fraction(c) for c in row] for row in obj["coeff"]])
        if op.ord_D != obj["ord_D"] or op.deg_t != obj["deg_t"]:
            raise PFError("stored shape is not tight")
        return op


def apply_operator(op: DiffOperator, s: PowerSeries) -> PowerSeries:
    if s.order <= op.deg_t:
        raise InsufficientSeriesError(op.deg_t + 1, s.order)
    out = []
    for n in range(s.order - op.deg_t):
        acc = Fraction(0)
        for i, row in enumerate(op.coeff):
            m = n - i
            if m < 0:
                break
            phi = s.coeffs[m]
            if phi == 0:
                continue
            acc += phi * sum(c * m ** j for j, c in enumerate(row) if c)
        out.append(acc)
    return PowerSeries(out)


def _annihilator_basis(s: PowerSeries, ord_D: int, deg_t: int):
    """Exact kernel of the prefix system over the first rows of constraints."""
    unknowns = (ord_D + 1) * (deg_t + 1)
    rows_build = unknowns + _SYSTEM_EXTRA_ROWS
    matrix = []
    for n in range(rows_build):
        row = []
        for i in range(deg_t + 1):
            m = n - i
            for j in range(ord_D + 1):
                row.append(Fraction(0) if m < 0 else s.coeffs[m] * m ** j)
        matrix.append(row)
    return nullspace(matrix), rows_build


def recover_operator(s: PowerSeries, ord_D: int, deg_t: int):
    """Unique normalized annihilator of the given shape, or None.

    None means either no nonzero operator of this shape fits the system,
    or the single candidate fails on held-out coefficients.  A kernel of
    dimension above one raises AmbiguousRecoveryError; the caller may
    lower deg_t.
    """
    if ord_D < 0 or deg_t < 0:
        raise PFError("shape parameters must be nonnegative")
    needed = (ord_D + 1) * (deg_t + 1) + RECOVERY_MARGIN
    if s.order < needed:
        raise InsufficientSeriesError(needed, s.order)
    basis, _ = _annihilator_basis(s, ord_D, deg_t)
    if not basis:
        return None
    if len(basis) > 1:
        raise AmbiguousRecoveryError(len(basis))
    vec = basis[0]
    coeff = [
        vec[i * (ord_D + 1): (i + 1) * (ord_D + 1)] for i in range(deg_t + 1)
    ]
    # scale so the D^ord_D entry of the t^0 block is 1 when possible,
    # otherwise so the first nonzero entry (row-major) is 1
    pivot = coeff[0][ord_D]
    if pivot == 0:
        pivot = next(c for row in coeff for c in row if c)
    inv = Fraction(1) / pivot
    op = DiffOperator([[c * inv for c in row] for row in coeff])
    image = apply_operator(op, s)
    if any(image.coeffs):
        return None
    return op


def recover_minimal_operator(s: PowerSeries, ord_D: int = 3, max_deg_t: int = 4):
    """Recovery with deg_t lowered until the annihilator space is a line.

    Returns (operator or None, deg_t actually used).
    """
    deg_t = max_deg_t
    while deg_t >= 0:
        try:
            op = recover_operator(s, ord_D, deg_t)
        except AmbiguousRecoveryError:
            deg_t -= 1
            continue
        return op, deg_t
    return None, 0


@dataclass(frozen=True)
class D3Params:
    """Coefficients a_ij of the two-point invariants and the shift lam."""

    a01: Fraction = Fraction(0)
    a02: Fraction = Fraction(0)
    a03: Fraction = Fraction(0)
    a11: Fraction = Fraction(0)
    a12: Fraction = Fraction(0)
    lam: Fraction = Fraction(0)


def _polymul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def build_d3(p: D3Params) -> DiffOperator:
    """Order-3, degree-4 operator whose blocks are fixed polynomials in the
    parameters; with all parameters zero it degenerates to D^3."""
    a01, a02, a03 = Fraction(p.a01), Fraction(p.a02), Fraction(p.a03)
    a12, lam = Fraction(p.a12), Fraction(p.lam)
    A = Fraction(p.a11) + lam

    t0 = [Fraction(0), Fraction(0), Fraction(0), Fraction(1)]
    # ascending D-coefficient lists for each block
    t1 = _polymul([1, 2], [lam, lam + A, lam + A])
    t1 = [-c for c in t1]
    t2 = _polymul(
        [1, 1],
        [
            6 * A * lam + lam ** 2 - 4 * a01,
            8 * A * lam - 2 * a12 + 2 * lam ** 2 - 4 * a01 + 2 * A ** 2,
            A ** 2 + lam ** 2 + 4 * A * lam - a12 - 2 * a01,
        ],
    )
    k3 = lam ** 2 * A + A ** 2 * lam - a12 * lam + a02 - A * a01 - a01 * lam
    t3 = _polymul(_polymul([3, 2], [2, 1]), [1, 1])
    t3 = [-c * k3 for c in t3]
    k4 = (
        -(lam ** 2) * a12
        + 2 * a02 * lam
        + lam ** 2 * A ** 2
        - a03
        + a01 ** 2
        - 2 * a01 * A * lam
    )
    t4 = _polymul(_polymul([3, 1], [2, 1]), [1, 1])
    t4 = [c * k4 for c in t4]

    def pad(row):
        return row + [Fraction(0)] * (4 - len(row))

    return DiffOperator([t0, pad(t1), pad(t2), pad(t3), pad(t4)])


_T4_PATTERN = (Fraction(6), Fraction(11), Fraction(6), Fraction(1))


def is_d3_shape(op: DiffOperator):
    """(ok, witness) for the order-3 shape with monic D^3 leading block and a
    t^4 block proportional to (D+1)(D+2)(D+3); zero t^4 block passes."""
    if op.ord_D != 3:
        return False, "order"
    if op.deg_t > 4:
        return False, "degree"
    if op.coeff[0] != (0, 0, 0, 1):
        return False, "t0-part"
    if op.deg_t == 4:
        row = op.coeff[4]
        scale = None
        for c, pat in zip(row, _T4_PATTERN):
            if scale is None and c != 0:
                scale = c / pat
        if scale is not None and any(
            c != scale * pat for c, pat in zip(row, _T4_PATTERN)
        ):
            return False, "t4-part"
    return True, None
