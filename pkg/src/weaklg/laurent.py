"""Exact sparse Laurent polynomials in x, y, z over the rationals.

A polynomial is a finite map from exponent triples (a, b, c) to nonzero
Fraction coefficients, where (a, b, c) are the powers of x, y, z and may
be negative.  Instances are immutable after construction and every
operation returns a fresh object, so values are safe to share.
"""

from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType

Exponent = tuple[int, int, int]

AXES = ("x", "y", "z")

_ZERO = Fraction(0)


class LaurentError(ValueError):
    """Base class for errors raised by this module."""


class ParseError(LaurentError):
    """Syntax error in a polynomial expression, with character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonMonomialDivisorError(ParseError):
    """Right operand of / expanded to more than one term."""


class ZeroMonomialDivisorError(ParseError):
    """Right operand of / expanded to the zero polynomial."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise LaurentError(f"coefficient {value!r} is not an exact rational")


class LaurentPolynomial:
    """Immutable Laurent polynomial in x, y, z with Fraction coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in dict(terms).items():
                if len(e) != 3 or not all(isinstance(k, int) for k in e):
                    raise LaurentError(f"bad exponent triple {e!r}")
                c = _as_fraction(c)
                if c:
                    data[(e[0], e[1], e[2])] = c
        object.__setattr__(self, "_terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def _raw(cls, data: dict[Exponent, Fraction]) -> "LaurentPolynomial":
        # internal fast path: data must already be normalized
        self = cls.__new__(cls)
        object.__setattr__(self, "_terms", data)
        return self

    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls._raw({})

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls.constant(1)

    @classmethod
    def constant(cls, c) -> "LaurentPolynomial":
        c = _as_fraction(c)
        return cls._raw({(0, 0, 0): c} if c else {})

    @classmethod
    def monomial(cls, e: Exponent, c=1) -> "LaurentPolynomial":
        c = _as_fraction(c)
        if not c:
            return cls.zero()
        return cls._raw({(e[0], e[1], e[2]): c})

    # -- views --------------------------------------------------------

    @property
    def terms(self):
        """Read-only mapping from exponent triple to coefficient."""
        return MappingProxyType(self._terms)

    def support(self) -> tuple[Exponent, ...]:
        return tuple(sorted(self._terms))

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0, 0), _ZERO)

    def coefficient(self, e: Exponent) -> Fraction:
        return self._terms.get((e[0], e[1], e[2]), _ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPolynomial.constant(other)
        return NotImplemented

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "LaurentPolynomial":
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, _ZERO) + c
            if v:
                out[e] = v
            elif e in out:
                del out[e]
        return LaurentPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return LaurentPolynomial.zero()
            return LaurentPolynomial._raw({e: v * c for e, v in self._terms.items()})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for (a1, b1, c1), v1 in self._terms.items():
            for (a2, b2, c2), v2 in other._terms.items():
                e = (a1 + a2, b1 + b2, c1 + c2)
                v = out.get(e, _ZERO) + v1 * v2
                if v:
                    out[e] = v
                elif e in out:
                    del out[e]
        return LaurentPolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPolynomial":
        if not isinstance(n, int) or n < 0:
            raise LaurentError("exponent must be a nonnegative integer")
        out = LaurentPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    # -- structure maps -----------------------------------------------

    def substitute_unimodular(self, matrix) -> "LaurentPolynomial":
        """Apply the monomial substitution sending exponent e to matrix @ e.

        The 3x3 integer matrix must have determinant +1 or -1, so the map
        is a ring automorphism of the Laurent ring and the support
        cardinality is preserved.
        """
        m = [[int(matrix[i][j]) for j in range(3)] for i in range(3)]
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        if det not in (1, -1):
            raise LaurentError(f"matrix is not unimodular (determinant {det})")
        out: dict[Exponent, Fraction] = {}
        for (a, b, c), v in self._terms.items():
            e = (
                m[0][0] * a + m[0][1] * b + m[0][2] * c,
                m[1][0] * a + m[1][1] * b + m[1][2] * c,
                m[2][0] * a + m[2][1] * b + m[2][2] * c,
            )
            out[e] = v
        return LaurentPolynomial._raw(out)

    def scale_variable(self, axis, alpha) -> "LaurentPolynomial":
        """Substitute one variable v by alpha * v for nonzero rational alpha."""
        if axis in AXES:
            axis = AXES.index(axis)
        if axis not in (0, 1, 2):
            raise LaurentError(f"unknown axis {axis!r}")
        alpha = _as_fraction(alpha)
        if not alpha:
            raise LaurentError("scale factor must be nonzero")
        out = {e: v * alpha ** e[axis] for e, v in self._terms.items()}
        return LaurentPolynomial._raw(out)

    def log_gradient(self) -> tuple["LaurentPolynomial", ...]:
        """Return (x df/dx, y df/dy, z df/dz); same exponents, scaled coefficients."""
        grads = []
        for i in range(3):
            g = {e: e[i] * v for e, v in self._terms.items() if e[i]}
            grads.append(LaurentPolynomial._raw(g))
        return tuple(grads)

    # -- printing and serialization -----------------------------------

    def to_text(self) -> str:
        """Canonical text form; parse(to_text(f)) == f."""
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            body = _term_text(e, abs(c))
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.to_text()!r})"

    def to_obj(self) -> dict:
        return {
            "vars": list(AXES),
            "terms": [[list(e), str(c)] for e, c in sorted(self._terms.items())],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "LaurentPolynomial":
        if obj.get("vars") != list(AXES):
            raise LaurentError(f"unsupported variable list {obj.get('vars')!r}")
        out: dict[Exponent, Fraction] = {}
        for e, c in obj["terms"]:
            key = (int(e[0]), int(e[1]), int(e[2]))
            if key in out:
                raise LaurentError(f"duplicate exponent {key} in serialized terms")
            v = Fraction(c)
            if v:
                out[key] = v
        return cls._raw(out)


def _term_text(e: Exponent, coeff: Fraction) -> str:
    num_factors = []
    den_factors = []
    for name, k in zip(AXES, e):
        if k > 0:
            num_factors.append(name if k == 1 else f"{name}^{k}")
        elif k < 0:
            den_factors.append(name if k == -1 else f"{name}^{-k}")
    if coeff.numerator != 1 or not num_factors:
        num_factors.insert(0, str(coeff.numerator))
    if coeff.denominator != 1:
        den_factors.insert(0, str(coeff.denominator))
    text = "*".join(num_factors)
    if den_factors:
        den = "*".join(den_factors)
        text += "/" + (den if len(den_factors) == 1 else f"({den})")
    return text


# -- parser -----------------------------------------------------------

_TOKEN_RE = re.compile(r"(?P<int>\d+)|(?P<var>[xyz])|(?P<op>[-+*/^()])|(?P<ws>\s+)")

_MONO = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> LaurentPolynomial:
        result = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> LaurentPolynomial:
        result = self.power()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.power()
            elif kind == "op" and value == "/":
                self.advance()
                divisor = self.power()
                result = self._divide(result, divisor, pos)
            elif kind in ("int", "var") or (kind == "op" and value == "("):
                # juxtaposition, e.g. "2x", "xyz", "(x+1)(y+1)"
                result = result * self.power()
            else:
                return result

    def power(self) -> LaurentPolynomial:
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.advance()
            p = self.power()
            return p if value == "+" else -p
        base = self.atom()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "^":
                self.advance()
                ekind, evalue, epos = self.peek()
                if ekind != "int":
                    raise ParseError("exponent must be a nonnegative integer", epos)
                self.advance()
                base = base ** int(evalue)
            else:
                return base

    def atom(self) -> LaurentPolynomial:
        kind, value, pos = self.advance()
        if kind == "int":
            return LaurentPolynomial.constant(int(value))
        if kind == "var":
            return LaurentPolynomial.monomial(_MONO[value])
        if kind == "op" and value == "(":
            inner = self.expr()
            ckind, cvalue, cpos = self.advance()
            if not (ckind == "op" and cvalue == ")"):
                raise ParseError("expected ')'", cpos)
            return inner
        raise ParseError(f"unexpected token {value!r}" if value else "unexpected end of input", pos)

    @staticmethod
    def _divide(num: LaurentPolynomial, den: LaurentPolynomial, pos: int) -> LaurentPolynomial:
        if den.is_zero():
            raise ZeroMonomialDivisorError("division by zero", pos)
        if len(den) > 1:
            raise NonMonomialDivisorError(
                f"divisor has {len(den)} terms, expected a single monomial", pos
            )
        ((e, c),) = den.terms.items()
        return num * LaurentPolynomial.monomial((-e[0], -e[1], -e[2]), Fraction(1) / c)


def parse(text: str) -> LaurentPolynomial:
    """Parse an expression over x, y, z into a LaurentPolynomial.

    Grammar: integer literals, variables x/y/z, + - * ^ with nonnegative
    integer powers, parentheses, implicit multiplication by juxtaposition,
    and / whose right operand must expand to a single monomial.
    """
    parser = _Parser(text)
    poly = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected token {value!r}", pos)
    return poly
