"""Shared helpers for the test suite."""

import random
from fractions import Fraction

from weaklg.laurent import LaurentPolynomial


def random_unimodular(rng: random.Random):
    """Random 3x3 integer matrix of determinant +-1 via elementary row ops.

    Entries are capped at 3 in magnitude so transformed supports stay small
    enough for exact lattice enumeration.
    """
    while True:
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
        if max(abs(v) for row in m for v in row) <= 3:
            return m


def random_laurent(rng: random.Random, nterms=4, span=2) -> LaurentPolynomial:
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(-span, span) for _ in range(3))
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            terms[e] = terms.get(e, Fraction(0)) + c
    return LaurentPolynomial({e: c for e, c in terms.items() if c})
