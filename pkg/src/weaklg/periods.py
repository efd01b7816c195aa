"""Constant-term series of powers of a Laurent polynomial.

The series of f is sum of phi(i) t^i where phi(i) is the coefficient of
x^0 y^0 z^0 in f^i.  The fast engine keeps the expanded power f^i between
steps and prunes terms whose exponents can no longer cancel to zero within
the remaining multiplications; the naive engine repeats full products and
exists to cross-check the fast one.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPolynomial

DEFAULT_TERM_BUDGET = 2_000_000


class SeriesBudgetError(RuntimeError):
    """Intermediate support outgrew the configured term budget."""

    def __init__(self, power: int, size: int, budget: int):
        super().__init__(
            f"support of f^{power} has {size} terms, budget is {budget}"
        )
        self.power = power
        self.size = size
        self.budget = budget


class PowerSeries:
    """Finite series prefix: coeffs[i] holds the t^i coefficient, exactly."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs):
        self.coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        self.order = len(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.order > 8 else ""
        return f"PowerSeries([{head}{tail}], order={self.order})"

    def to_obj(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_obj(cls, obj: dict) -> "PowerSeries":
        coeffs = [Fraction(c) for c in obj["coeffs"]]
        if obj.get("order") != len(coeffs):
            raise ValueError("order field does not match coefficient count")
        return cls(coeffs)


def constant_terms_series_naive(
    f: LaurentPolynomial, order: int
) -> PowerSeries:
    """Reference implementation: full repeated products, no pruning."""
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs = [Fraction(1)]
    power = LaurentPolynomial.one()
    for _ in range(1, order):
        power = power * f
        coeffs.append(power.constant_term())
    return PowerSeries(coeffs)


def constant_terms_series(
    f: LaurentPolynomial,
    order: int,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> PowerSeries:
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs: list = [Fraction(1)]
    support = sorted(f.terms.items())
    if not support or order == 1:
        coeffs += [Fraction(0)] * (order - 1)
        return PowerSeries(coeffs)

    max_abs = max(abs(k) for e, _ in support for k in e)
    # bias keeps every packed field nonnegative through the final power
    bias = (order - 1) * max_abs + max_abs + 1
    bits = (2 * bias).bit_length() + 1
    mask = (1 << bits) - 1
    shift1, shift2 = bits, 2 * bits

    def pack(e):
        return ((e[0] + bias) << shift2) | ((e[1] + bias) << shift1) | (e[2] + bias)

    base = pack((0, 0, 0))
    all_int = all(c.denominator == 1 for _, c in support)
    all_pos = all(c > 0 for _, c in support)
    if all_int:
        offsets = [(pack(e) - base, c.numerator) for e, c in support]
    else:
        offsets = [(pack(e) - base, c) for e, c in support]

    mins = [min(e[k] for e, _ in support) for k in range(3)]
    maxs = [max(e[k] for e, _ in support) for k in range(3)]

    cur = {base: 1 if all_int else Fraction(1)}
    for i in range(1, order):
        nxt: dict = {}
        get = nxt.get
        for key, v in cur.items():
            for off, c in offsets:
                kk = key + off
                w = get(kk)
                nxt[kk] = v * c if w is None else w + v * c
        if not all_pos:
            nxt = {k: v for k, v in nxt.items() if v}
        if len(nxt) > term_budget:
            raise SeriesBudgetError(i, len(nxt), term_budget)
        coeffs.append(Fraction(nxt.get(base, 0)))
        rem = order - 1 - i
        if rem == 0:
            break
        # keep exponents able to reach zero in some r <= rem further steps;
        # per-axis interval hull of {[-r*max, -r*min] : 1 <= r <= rem}
        lo = [(-rem * maxs[k] if maxs[k] >= 0 else -maxs[k]) for k in range(3)]
        hi = [(-rem * mins[k] if mins[k] <= 0 else -mins[k]) for k in range(3)]
        lo0, lo1, lo2 = (v + bias for v in lo)
        hi0, hi1, hi2 = (v + bias for v in hi)
        cur = {
            k: v
            for k, v in nxt.items()
            if lo0 <= (k >> shift2) <= hi0
            and lo1 <= ((k >> shift1) & mask) <= hi1
            and lo2 <= (k & mask) <= hi2
        }
        if not cur:
            coeffs += [Fraction(0)] * (order - 1 - i)
            break
    return PowerSeries(coeffs)


def series_equal(s1: PowerSeries, s2: PowerSeries):
    """Exact comparison over the shared prefix.

    Returns (True, None) when all min(order) leading coefficients agree,
    else (False, first index that differs).
    """
    n = min(s1.order, s2.order)
    for i in range(n):
        if s1.coeffs[i] != s2.coeffs[i]:
            return False, i
    return True, None
