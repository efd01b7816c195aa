import random
from fractions import Fraction

import pytest

from weaklg.laurent import (
    LaurentPolynomial,
    LaurentError,
    NonMonomialDivisorError,
    ParseError,
    ZeroMonomialDivisorError,
    parse,
)


def _naive_mul(f, g):
    """Nested-loop product over the stored term dicts, as an independent oracle."""
    out = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return LaurentPolynomial({e: c for e, c in out.items() if c})


def _random_poly(rng, nterms=4, span=2):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(-span, span) for _ in range(3))
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            terms[e] = terms.get(e, Fraction(0)) + c
    return LaurentPolynomial({e: c for e, c in terms.items() if c})


def _random_unimodular(rng):
    # product of elementary integer row operations keeps |det| = 1
    m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(6):
        i, j = rng.sample(range(3), 2)
        op = rng.randrange(3)
        if op == 0:
            k = rng.randint(-2, 2)
            for col in range(3):
                m[i][col] += k * m[j][col]
        elif op == 1:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-v for v in m[i]]
    return m


def test_parse_p3_tetrahedron():
    f = parse("x+y+z+1/(x*y*z)")
    assert dict(f.terms) == {
        (1, 0, 0): 1,
        (0, 1, 0): 1,
        (0, 0, 1): 1,
        (-1, -1, -1): 1,
    }


def test_parse_squared_numerator_over_monomial():
    f = parse("(x+1)^2/(xyz)+y/z+z")
    assert dict(f.terms) == {
        (1, -1, -1): 1,
        (0, -1, -1): 2,
        (-1, -1, -1): 1,
        (0, 1, -1): 1,
        (0, 0, 1): 1,
    }


def test_parse_zero():
    assert parse("0").is_zero()
    assert parse("0").terms == {}


def test_parse_juxtaposition_and_signs():
    assert parse("2x") == parse("2*x")
    assert parse("xyz") == parse("x*y*z")
    assert parse("(x+1)(y+1)") == parse("x*y + x + y + 1")
    # unary minus binds outside the power
    assert parse("-x^2") == -parse("x^2")
    assert parse("3 - -x") == parse("3 + x")


def test_parse_power_precedence():
    assert parse("2x^3") == LaurentPolynomial.monomial((3, 0, 0), 2)
    assert parse("(x+y)^2/x") == parse("x + 2y + y^2/x")


def test_parse_division_requires_monomial():
    with pytest.raises(NonMonomialDivisorError):
        parse("x/(x+1)")
    with pytest.raises(ZeroMonomialDivisorError):
        parse("x/0")
    with pytest.raises(ZeroMonomialDivisorError):
        parse("x/(x - x)")


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse("x + % y")
    assert exc.value.position == 4
    with pytest.raises(ParseError):
        parse("x + ")
    with pytest.raises(ParseError):
        parse("(x + y")
    with pytest.raises(ParseError):
        parse("x ^ y")
    with pytest.raises(ParseError):
        parse("x y )")


def test_mul_binomial_square():
    f = parse("x + 1/x")
    assert f * f == parse("x^2 + 2 + 1/x^2")


def test_mul_identity_and_zero():
    f = parse("(x+1)^2/(xyz)+y/z+z")
    assert f * LaurentPolynomial.one() == f
    assert f * LaurentPolynomial.zero() == LaurentPolynomial.zero()
    assert (f * 0).is_zero()


def test_sixteen_term_expansion_matches_naive_oracle():
    a, b, c, d = parse("x+1"), parse("y+1"), parse("z+1"), parse("x+y+1")
    expected = _naive_mul(_naive_mul(_naive_mul(a, b), c), d)
    expected = _naive_mul(expected, parse("1/(xyz)"))
    f = parse("(x+1)(y+1)(z+1)(x+y+1)/(xyz)")
    assert f == expected
    assert len(f) == 16


def test_constant_term():
    assert parse("x+y+z+1/(x*y*z)").constant_term() == 0
    assert parse("5 + x").constant_term() == 5
    g = parse("(x+1/x)(y+1/y)(z+1/z)")
    assert (g * g).constant_term() == 8


def test_substitute_identity_and_symmetry():
    f = parse("x+y+z+1/(x*y*z)")
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert f.substitute_unimodular(ident) == f
    swap_xy = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert f.substitute_unimodular(swap_xy) == f


def test_substitute_rejects_non_unimodular():
    f = parse("x")
    with pytest.raises(LaurentError):
        f.substitute_unimodular([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(LaurentError):
        f.substitute_unimodular([[1, 0, 0], [1, 0, 0], [0, 0, 1]])


def test_substitute_preserves_constant_terms_of_powers():
    rng = random.Random(7)
    f = parse("x+y+z+1/(x*y*z)")
    for _ in range(4):
        m = _random_unimodular(rng)
        g = f.substitute_unimodular(m)
        assert len(g) == len(f)
        for n in range(6):
            assert (g ** n).constant_term() == (f ** n).constant_term()


def test_substitute_composes():
    rng = random.Random(11)
    f = _random_poly(rng, nterms=5)
    m1 = _random_unimodular(rng)
    m2 = _random_unimodular(rng)
    composed = [
        [sum(m1[i][k] * m2[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]
    assert f.substitute_unimodular(m2).substitute_unimodular(m1) == f.substitute_unimodular(composed)


def test_scale_variable():
    f = parse("x + 1/x")
    assert f.scale_variable("x", 1) == f
    assert f.scale_variable("x", 2) == LaurentPolynomial(
        {(1, 0, 0): 2, (-1, 0, 0): Fraction(1, 2)}
    )
    with pytest.raises(LaurentError):
        f.scale_variable("x", 0)
    with pytest.raises(LaurentError):
        f.scale_variable("w", 2)


def test_scale_variable_preserves_constant_terms_of_powers():
    f = parse("(x+1)^2/(xyz)+y/z+z")
    g = f.scale_variable("y", Fraction(3, 2))
    for n in range(6):
        assert (g ** n).constant_term() == (f ** n).constant_term()


def test_log_gradient():
    f = parse("x+y+z+1/(x*y*z)")
    gx, gy, gz = f.log_gradient()
    assert gx == parse("x - 1/(xyz)")
    assert gy == parse("y - 1/(xyz)")
    assert gz == parse("z - 1/(xyz)")
    assert LaurentPolynomial.constant(9).log_gradient() == (
        LaurentPolynomial.zero(),
    ) * 3
    assert parse("x").log_gradient() == (parse("x"), parse("0"), parse("0"))


def test_ring_axioms_on_random_inputs():
    rng = random.Random(3)
    for _ in range(25):
        f = _random_poly(rng)
        g = _random_poly(rng)
        h = _random_poly(rng)
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f + (-f) == LaurentPolynomial.zero()
        assert f * g == _naive_mul(f, g)


def test_constant_term_of_product_is_support_convolution():
    rng = random.Random(5)
    for _ in range(20):
        f = _random_poly(rng)
        g = _random_poly(rng)
        direct = sum(
            (c * g.coefficient((-e[0], -e[1], -e[2])) for e, c in f.terms.items()),
            Fraction(0),
        )
        assert (f * g).constant_term() == direct


def test_text_round_trip():
    rng = random.Random(13)
    for _ in range(30):
        f = _random_poly(rng, nterms=rng.randint(0, 6))
        assert parse(f.to_text()) == f
    assert LaurentPolynomial.zero().to_text() == "0"
    assert parse("3x^2/(4y)").to_text() == "3*x^2/(4*y)"


def test_serialization_round_trip():
    f = parse("(x+1)^2/(xyz)+y/z+z")
    obj = f.to_obj()
    assert obj["vars"] == ["x", "y", "z"]
    assert obj["terms"] == sorted(obj["terms"])
    assert LaurentPolynomial.from_obj(obj) == f


def test_serialization_rejects_bad_documents():
    with pytest.raises(LaurentError):
        LaurentPolynomial.from_obj({"vars": ["x", "y"], "terms": []})
    with pytest.raises(LaurentError):
        LaurentPolynomial.from_obj(
            {"vars": ["x", "y", "z"], "terms": [[[0, 0, 0], "1"], [[0, 0, 0], "2"]]}
        )


def test_immutability():
    f = parse("x + y")
    with pytest.raises(AttributeError):
        f._terms = {}
    with pytest.raises(TypeError):
        f.terms[(0, 0, 0)] = Fraction(1)
