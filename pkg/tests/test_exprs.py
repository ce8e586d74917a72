import numpy as np
import pytest

from nctorus.cocycle import BilinearCocycle, Phase
from nctorus.exprs import (
    ParseError,
    parse_laurent,
    parse_word,
    render_laurent,
    render_word_poly,
    word_side,
    word_to_poly,
)
from nctorus.laurent import LaurentPoly
from nctorus.qweyl import Coeff, PeriodMatrix, QPolynomial


def test_parse_word_basic():
    atoms = parse_word("t1*g2^3*t2^-1", 2)
    assert atoms == [("t", 0, 1), ("g", 1, 3), ("t", 1, -1)]
    assert word_side(atoms) == "nc"


def test_parse_word_hatted_and_empty():
    atoms = parse_word("th2*gh1", 2)
    assert atoms == [("th", 1, 1), ("gh", 0, 1)]
    assert word_side(atoms) == "gerby"
    assert parse_word("1", 3) == []
    assert word_side([]) == "nc"


def test_parse_word_errors():
    with pytest.raises(ParseError):
        parse_word("t1*gh2", 2)          # mixed sides
    with pytest.raises(ParseError):
        parse_word("x3", 2)              # unknown atom
    with pytest.raises(ParseError):
        parse_word("t3", 2)              # index out of range
    with pytest.raises(ParseError):
        parse_word("t0", 2)
    with pytest.raises(ParseError):
        parse_word("t1^", 2)


def test_word_multiplies_with_reordering_phase():
    lam = BilinearCocycle([[0, 1], [0, 0]], 4)
    Q = PeriodMatrix.ones(2)
    poly = word_to_poly(parse_word("t2*t1", 2), lam, Q)
    assert poly.coeff((1, 1)) == Coeff(1.0, Phase(3, 4))
    ordered = word_to_poly(parse_word("t1*t2", 2), lam, Q)
    assert ordered.coeff((1, 1)) == Coeff(1.0)


def test_word_crossed_sides_differ():
    lam = BilinearCocycle([[0, 0], [0, 0]], 4)
    Q = PeriodMatrix([[1, 2], [3, 1]])
    nc = word_to_poly(parse_word("g2*t1", 2), lam, Q)
    gerby = word_to_poly(parse_word("gh2*th1", 2), lam, Q)
    assert abs(nc.coeff((1, 0), (0, 1)).scalar - 2.0) < 1e-12
    assert abs(gerby.coeff((1, 0), (0, 1)).scalar - 3.0) < 1e-12


def test_parse_laurent_values():
    p = parse_laurent("2*t1^2 - 3/4*t2 + i", 2)
    assert p.coeff((2, 0)) == 2.0
    assert p.coeff((0, 1)) == -0.75
    assert p.coeff((0, 0)) == 1j


def test_parse_laurent_complex_and_merges():
    p = parse_laurent("(1-1/2i)*t1 + t1 - 2i*t1^-1", 1)
    assert p.coeff((1,)) == 2.0 - 0.5j
    assert p.coeff((-1,)) == -2j


def test_parse_laurent_errors():
    with pytest.raises(ParseError):
        parse_laurent("2**t1", 2)
    with pytest.raises(ParseError):
        parse_laurent("(1+2i*t1", 1)
    with pytest.raises(ParseError):
        parse_laurent("t5", 2)
    with pytest.raises(ParseError):
        parse_laurent("q1", 1)


def test_render_laurent_frozen():
    p = LaurentPoly(2, {(0, 0): -1.0, (1, -2): 0.5, (2, 0): 1.0})
    # exact string, support sorted lexicographically
    assert render_laurent(p) == "-1 + 1/2*t1*t2^-2 + t1^2"


def test_render_laurent_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        terms = {}
        for _ in range(4):
            t = tuple(int(rng.integers(-2, 3)) for _ in range(2))
            terms[t] = complex(rng.integers(-4, 5), rng.integers(-4, 5))
        p = LaurentPoly(2, terms)
        assert parse_laurent(render_laurent(p), 2) == p


def test_render_zero():
    assert render_laurent(LaurentPoly.zero(2)) == "0"
    assert render_word_poly(QPolynomial.zero(2)) == "0"


def test_render_word_poly_with_phase():
    lam = BilinearCocycle([[0, 1], [0, 0]], 4)
    Q = PeriodMatrix.ones(2)
    poly = word_to_poly(parse_word("t2*t1", 2), lam, Q)
    assert render_word_poly(poly) == "w(3/4)*t1*t2"
    plain = QPolynomial.monomial(2, (1, 0), (0, 2), Coeff(-2.0))
    assert render_word_poly(plain) == "-2*t1*g2^2"
    assert render_word_poly(plain, hatted=True) == "-2*th1*gh2^2"


def test_render_word_poly_unit():
    assert render_word_poly(QPolynomial.one(2)) == "1"
