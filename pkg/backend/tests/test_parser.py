from fractions import Fraction

import pytest

from app.core.exceptions import AlphabetMismatch, ExpressionSyntaxError
from app.services.expression_parser import (
    ExprAST,
    Factor,
    Term,
    format_ast,
    parse_ast,
    parse_expr,
    parse_laurent,
    tokenize,
)
from app.services.laurent import Q
from app.services.ncpoly import Alphabet, Gen, NCPoly, gens

x, y, z = gens(Alphabet.U)
nx, ny, nz, x2, y2, z2 = gens(Alphabet.A)


def test_alphabet_is_detected():
    assert parse_expr("y*x").alphabet == Alphabet.U
    assert parse_expr("nx nx").alphabet == Alphabet.A
    assert parse_expr("3").alphabet == Alphabet.U
    assert parse_expr("3", Alphabet.A).alphabet == Alphabet.A


def test_coefficients_and_powers():
    assert parse_expr("2*q^-1*x^2*y") == 2 * Q ** -1 * x * x * y
    assert parse_expr("(q^3+q)*nx - q^4") == (Q ** 3 + Q) * nx - Q ** 4
    assert parse_expr("1/2 q y2 z2") == Fraction(1, 2) * Q * y2 * z2
    assert parse_expr("-x + (q - q^-1)^2") == -x + (Q - Q ** -1) ** 2


def test_generators_are_case_insensitive():
    assert parse_expr("NX*Z2") == nx * z2


def test_mixed_alphabets_are_rejected():
    with pytest.raises(AlphabetMismatch):
        parse_expr("x + nx")
    with pytest.raises(AlphabetMismatch):
        parse_expr("x*y", Alphabet.A)


@pytest.mark.parametrize(
    "source,position",
    [
        ("x +", 3),
        ("x$", 1),
        ("x^-1", 3),
        ("(q + x)", 5),
        ("w*x", 0),
        ("", 0),
        ("(q + 1", 6),
        ("z2^13", 3),
        ("q^513", 2),
        ("(q + 1)^-600", 9),
        ("nx^12*z2^12*x2", 0),
        ("1 + x^12*y^12*z", 4),
    ],
)
def test_syntax_errors_carry_positions(source, position):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expr(source)
    assert info.value.position == position


def test_zero_denominator():
    with pytest.raises(ExpressionSyntaxError):
        parse_expr("3/0*x")


def test_laurent_text():
    assert parse_laurent("q^2 - q^-2") == Q ** 2 - Q ** -2
    assert parse_laurent(5) == 5
    assert parse_laurent("-3/4") == Fraction(-3, 4)
    with pytest.raises(ExpressionSyntaxError):
        parse_laurent("x")


def test_printed_forms_parse_back():
    p = (Q ** 3 + Q) * nx + Q ** 4 * y2 * z2 - Q ** 4
    assert parse_expr(str(p), Alphabet.A) == p


def test_ast_keeps_factors_as_written():
    ast = parse_ast("q*x^2*y - 1")
    assert format_ast(ast) == "(q)*x^2*y + (-1)"
    assert parse_expr(format_ast(ast)) == ast.to_ncpoly()
    assert [f.gen for f in ast.terms[0].factors] == [Gen.X, Gen.Y]


def test_tokens():
    kinds = [t.kind for t in tokenize("2 nx^3")]
    assert kinds == ["number", "name", "op", "number"]


def _random_ast(rng):
    alphabet = rng.choice([Alphabet.U, Alphabet.A])
    letters = [g for g in Gen if g.alphabet == alphabet]
    terms = []
    for _ in range(rng.randint(1, 4)):
        coeff = sum(
            (Fraction(rng.randint(-5, 5), rng.randint(1, 4)) * Q ** rng.randint(-3, 3) for _ in range(rng.randint(1, 3))),
            0 * Q,
        )
        factors = tuple(Factor(rng.choice(letters), rng.randint(1, 3)) for _ in range(rng.randint(0, 3)))
        terms.append(Term(coeff, factors))
    return ExprAST(tuple(terms), alphabet)


def test_round_trip_of_random_asts(rng):
    for _ in range(1000):
        ast = _random_ast(rng)
        assert parse_ast(format_ast(ast), ast.alphabet) == ast


def test_largest_accepted_term():
    p = parse_expr("z2^12*nx^12 + q^512")
    assert max(len(w) for w in p.words()) == 24
