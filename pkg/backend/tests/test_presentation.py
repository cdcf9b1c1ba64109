import threading

import pytest

from app.core.exceptions import AlphabetMismatch, NonTermination
from app.services.expression_parser import parse_expr
from app.services.laurent import Q
from app.services.ncpoly import A_LETTERS, Alphabet, Gen, NCPoly, Word
from app.services.presentation import (
    DEFINING_RELATIONS,
    PAIR_TABLE,
    REDUCTION_RULES,
    SQUARE_DEFINITIONS,
    PairStatus,
    ReductionOrder,
    Reducer,
    all_words,
    bar_is_ordered,
    bar_word,
    classify_pair,
    enumerate_allowed,
    is_allowed,
    leading_monomial,
    matches_basis_shape,
    pbw_normal_form,
    phi_image,
    reduce,
    rule_table,
    termination_measure,
)
from app.services.uq_oracle import expand_all, normalize

NX, NY, NZ, X2, Y2, Z2 = A_LETTERS


def test_pair_table_counts():
    statuses = list(PAIR_TABLE.values())
    assert statuses.count(PairStatus.ALLOWED) == 15
    assert statuses.count(PairStatus.FORBIDDEN) == 21
    assert set(REDUCTION_RULES) == {p for p, s in PAIR_TABLE.items() if s == PairStatus.FORBIDDEN}


def test_classify_pair():
    assert classify_pair(NZ, NX) == PairStatus.ALLOWED
    assert classify_pair(NX, NZ) == PairStatus.FORBIDDEN
    assert classify_pair(X2, NY) == PairStatus.ALLOWED
    with pytest.raises(AlphabetMismatch):
        classify_pair(Gen.X, Gen.Y)


def test_allowed_word_counts():
    assert len(enumerate_allowed(0)) == 1
    assert len(enumerate_allowed(1)) == 7
    assert len(enumerate_allowed(2)) == 22
    assert len(enumerate_allowed(4)) == 95
    with pytest.raises(ValueError):
        enumerate_allowed(-1)


def test_enumeration_order():
    words = [w.text() for w in enumerate_allowed(2)]
    assert words[:7] == ["1", "nx", "ny", "nz", "x2", "y2", "z2"]
    assert words[7] == "nx*z2"
    assert words[-1] == "z2^2"


def test_three_characterizations_of_allowed_words():
    for word in all_words(3):
        assert is_allowed(word) == matches_basis_shape(word) == bar_is_ordered(word), word.text()


def test_bar_word():
    assert bar_word(Word.of(NX, Z2)).text() == "y*z^3"


def test_rule_table_shape():
    rules = list(REDUCTION_RULES.values())
    assert len(rules) == 21
    assert [r.rule_id for r in rules] == [f"R{i:02d}" for i in range(1, 22)]
    assert sum(r.swap for r in rules) == 12
    for rule in rules:
        assert all(is_allowed(w) for w in rule.rhs.words())
        assert all(termination_measure(w) < termination_measure(rule.lhs) for w in rule.rhs.words())


def test_every_rule_is_sound():
    statuses = rule_table(check=True)
    assert all(s.verified for s in statuses)


def test_reduce_square_of_nu():
    assert str(reduce(parse_expr("nx*nx"))) == "q^4*y2*z2 + (q^3+q)*nx - q^4"


def test_reduce_swap_rule():
    assert reduce(parse_expr("z2*nx")) == Q ** 4 * NCPoly.gen(NX) * NCPoly.gen(Z2)


def test_allowed_words_are_fixed():
    for word in enumerate_allowed(3):
        p = NCPoly.from_word(word)
        assert reduce(p) == p


def test_reduction_preserves_phi(rng):
    for _ in range(40):
        word = Word(tuple(rng.choice(A_LETTERS) for _ in range(rng.randint(0, 4))), Alphabet.A)
        p = NCPoly.from_word(word)
        reduced = reduce(p)
        assert all(is_allowed(w) for w in reduced.words())
        assert phi_image(p) == phi_image(reduced)


def test_orders_agree(rng):
    for _ in range(40):
        word = Word(tuple(rng.choice(A_LETTERS) for _ in range(rng.randint(0, 5))), Alphabet.A)
        p = NCPoly.from_word(word)
        assert reduce(p, ReductionOrder.LEFTMOST) == reduce(p, ReductionOrder.RIGHTMOST)


def test_defining_relations_hold_and_reduce_to_zero():
    for name, relation in DEFINING_RELATIONS + SQUARE_DEFINITIONS:
        assert not phi_image(relation), name
        assert not reduce(relation), name


def test_step_cap():
    reducer = Reducer(max_steps=1)
    with pytest.raises(NonTermination):
        reducer.reduce(parse_expr("z2*z2*nx*nx"))


def test_reduce_rejects_equitable_polynomials():
    with pytest.raises(AlphabetMismatch):
        reduce(parse_expr("x*y"))


def test_phi_matches_expansion():
    p = parse_expr("nx*y2 - q*z2*nz + 1")
    assert phi_image(p) == normalize(expand_all(p))
    assert pbw_normal_form(p) == phi_image(p)
    assert pbw_normal_form(parse_expr("y*x")) == normalize(parse_expr("y*x"))


def test_leading_monomials():
    assert leading_monomial(Word.of(NX)) == (-Q, (0, 1, 1))
    assert leading_monomial(Word.of(NY)) == (-Q ** -1, (1, 0, 1))
    assert leading_monomial(Word.of(X2, NY, Z2)) == (-Q ** -1, (3, 0, 3))
    with pytest.raises(ValueError):
        leading_monomial(Word.of(Z2, NX))


class _PausingReducer(Reducer):
    """Holds the reduction running in the thread named 'first' after its first step"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.paused = threading.Event()
        self.resume = threading.Event()

    def _spend_step(self, letters):
        super()._spend_step(letters)
        if threading.current_thread().name == "first" and not self.paused.is_set():
            self.paused.set()
            self.resume.wait(10)


def test_step_cap_is_per_call_on_a_shared_reducer():
    reducer = _PausingReducer(max_steps=5)
    errors = []

    def long_reduction():
        try:
            reducer.reduce(parse_expr("z2^4*nx^4"))
        except NonTermination as e:
            errors.append(e)

    first = threading.Thread(target=long_reduction, name="first")
    first.start()
    assert reducer.paused.wait(10)
    # a second call on the same instance while the first is mid-way
    assert reducer.reduce(parse_expr("z2*nx")) == Q ** 4 * NCPoly.gen(NX) * NCPoly.gen(Z2)
    reducer.resume.set()
    first.join(10)
    assert len(errors) == 1


def test_reducer_memo_is_bounded():
    reducer = Reducer(cache_size=4)
    expected = reduce(parse_expr("z2^3*nx^3"))
    assert reducer.reduce(parse_expr("z2^3*nx^3")) == expected
    info = reducer.cache_info()
    assert info.maxsize == 4
    assert info.currsize <= 4
