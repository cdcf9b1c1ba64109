import random

import pytest

from app.core.config import settings
from app.core.exceptions import AlphabetMismatch
from app.services import uq_oracle
from app.services.laurent import Q, LaurentPoly
from app.services.ncpoly import A_LETTERS, U_LETTERS, Alphabet, Gen, NCPoly, Word, gens
from app.services.uq_oracle import (
    RewriteStrategy,
    check_identity,
    equitable_relations,
    expand,
    expand_word,
    identity_witness,
    is_even,
    normalize,
    normalize_word,
    pbw_mul,
    word_exponents,
)

x, y, z = gens(Alphabet.U)


def test_flip_rules():
    assert str(normalize(y * x)) == "q^2*x*y - q^2 + 1"
    assert str(normalize(z * y)) == "q^2*y*z - q^2 + 1"
    assert str(normalize(z * x)) == "q^-2*x*z + 1 - q^-2"


def test_ordered_words_are_fixed():
    p = Q * x * x * y * z * z - 3
    assert normalize(p) == p


def test_pbw_terms_json():
    terms = normalize(y * x).to_json()
    assert {"r": 1, "s": 1, "t": 0, "coeff": "q^2"} in terms
    assert {"r": 0, "s": 0, "t": 0, "coeff": "-q^2 + 1"} in terms


def test_equitable_relations_vanish():
    for name, relation in equitable_relations():
        assert not normalize(relation), name


@pytest.mark.parametrize("strategy", list(RewriteStrategy))
def test_strategies_agree(strategy, rng):
    for _ in range(60):
        word = Word(tuple(rng.choice(U_LETTERS) for _ in range(rng.randint(0, 6))), Alphabet.U)
        assert normalize_word(word, strategy) == normalize_word(word)


def test_nu_elements_q_commute_with_letters():
    nx, ny, nz = (expand(g) for g in (Gen.NX, Gen.NY, Gen.NZ))
    assert check_identity(x * ny, Q ** 2 * ny * x)
    assert check_identity(x * nz, Q ** -2 * nz * x)
    assert check_identity(y * nz, Q ** 2 * nz * y)
    assert check_identity(z * nx, Q ** 2 * nx * z)


def test_witness_of_false_identity():
    witness = identity_witness(x * y, y * x)
    assert witness
    assert witness == normalize(x * y - y * x)


def test_expansions():
    assert expand(Gen.NZ) == Q - Q * x * y
    assert expand(Gen.Y2) == y * y
    with pytest.raises(AlphabetMismatch):
        expand(Gen.X)


def test_images_of_nu_words_are_even(rng):
    for _ in range(20):
        word = Word(tuple(rng.choice(A_LETTERS) for _ in range(rng.randint(0, 3))), Alphabet.A)
        assert is_even(normalize(expand_word(word)))


def test_normalize_rejects_nu_polynomials():
    with pytest.raises(AlphabetMismatch):
        normalize(NCPoly.gen(Gen.NX))


def test_word_exponents_needs_ordered_monomial():
    assert word_exponents(Word.of(Gen.X, Gen.Y, Gen.Y)) == (1, 2, 0)
    with pytest.raises(ValueError):
        word_exponents(Word.of(Gen.Y, Gen.X))


def test_pbw_product_is_associative():
    a = normalize(y * x).exponent_dict()
    b = normalize(z * z * y).exponent_dict()
    c = normalize(z * x + Q).exponent_dict()
    assert pbw_mul(pbw_mul(a, b), c) == pbw_mul(a, pbw_mul(b, c))
    assert pbw_mul(a, {(0, 0, 0): LaurentPoly.one()}) == a


def test_oracle_memos_are_bounded():
    normalize_word(Word.of(Gen.Z, Gen.Y, Gen.X), RewriteStrategy.LEFTMOST)
    for cached in (uq_oracle._times_letter, uq_oracle._insert_word, uq_oracle._monomial_product,
                   uq_oracle._rewrite_word):
        assert cached.cache_info().maxsize == settings.ORACLE_CACHE_SIZE
    assert uq_oracle.cache_info()["rewrites"] > 0
