"""
Presented Subalgebra - Allowed words, reduction rules and the map into U_q(sl2)
Words in nx, ny, nz, x2, y2, z2 are reduced to allowed words with 21 rewriting rules;
phi sends each letter to its expansion in x, y, z.
"""

from __future__ import annotations

import re
from contextvars import ContextVar
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from app.core.config import settings
from app.core.exceptions import AlphabetMismatch, NonTermination
from app.core.logging import get_logger
from app.services.expression_parser import parse_expr
from app.services.laurent import Q, LaurentPoly
from app.services.ncpoly import A_LETTERS, Alphabet, Gen, NCPoly, Word
from app.services.uq_oracle import (
    PBWDict,
    PBWForm,
    _accumulate,
    check_identity,
    expand,
    identity_witness,
    normalize,
    pbw_mul,
)

logger = get_logger(__name__)

NX, NY, NZ, X2, Y2, Z2 = A_LETTERS


class PairStatus(str, Enum):
    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"


class ReductionOrder(str, Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


# row letter -> letters that may follow it
_ALLOWED_SUCCESSORS: Dict[Gen, frozenset] = {
    NX: frozenset({Z2}),
    NY: frozenset({Z2}),
    NZ: frozenset({NX, Y2, Z2}),
    X2: frozenset(A_LETTERS),
    Y2: frozenset({NX, Y2, Z2}),
    Z2: frozenset({Z2}),
}

PAIR_TABLE: Dict[Tuple[Gen, Gen], PairStatus] = {
    (g1, g2): PairStatus.ALLOWED if g2 in _ALLOWED_SUCCESSORS[g1] else PairStatus.FORBIDDEN
    for g1 in A_LETTERS
    for g2 in A_LETTERS
}


def _require_a(word: Word) -> None:
    if word.alphabet != Alphabet.A:
        raise AlphabetMismatch("expected a word in nx, ny, nz, x2, y2, z2")


def classify_pair(g1: Gen, g2: Gen) -> PairStatus:
    if Gen(g1).alphabet != Alphabet.A or Gen(g2).alphabet != Alphabet.A:
        raise AlphabetMismatch("pairs are classified over the nu/square alphabet")
    return PAIR_TABLE[(Gen(g1), Gen(g2))]


def _pair_allowed(g1: Gen, g2: Gen) -> bool:
    return g2 in _ALLOWED_SUCCESSORS[g1]


def is_allowed(word: Word) -> bool:
    _require_a(word)
    letters = word.letters
    return all(_pair_allowed(letters[i], letters[i + 1]) for i in range(len(letters) - 1))


def enumerate_allowed(max_len: int) -> List[Word]:
    """All allowed words of length <= max_len, ordered by length then lexicographically"""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    layer: List[Tuple[Gen, ...]] = [()]
    words: List[Word] = [Word.empty(Alphabet.A)]
    for _ in range(max_len):
        layer = [
            prefix + (g,)
            for prefix in layer
            for g in A_LETTERS
            if not prefix or _pair_allowed(prefix[-1], g)
        ]
        words.extend(Word(letters, Alphabet.A) for letters in layer)
    return words


def all_words(max_len: int) -> List[Word]:
    layer: List[Tuple[Gen, ...]] = [()]
    words: List[Word] = [Word.empty(Alphabet.A)]
    for _ in range(max_len):
        layer = [prefix + (g,) for prefix in layer for g in A_LETTERS]
        words.extend(Word(letters, Alphabet.A) for letters in layer)
    return words


# Shape grammar: x2^r nz? y2^s nx? z2^t  or  x2^r ny z2^t
_SHAPE_CODES = {NX: "a", NY: "b", NZ: "c", X2: "x", Y2: "y", Z2: "z"}
_BASIS_SHAPE = re.compile(r"x*c?y*a?z*|x*bz*")


def matches_basis_shape(word: Word) -> bool:
    _require_a(word)
    return _BASIS_SHAPE.fullmatch("".join(_SHAPE_CODES[g] for g in word.letters)) is not None


_BAR_LETTERS = {
    NX: (Gen.Y, Gen.Z),
    NY: (Gen.X, Gen.Z),
    NZ: (Gen.X, Gen.Y),
    X2: (Gen.X, Gen.X),
    Y2: (Gen.Y, Gen.Y),
    Z2: (Gen.Z, Gen.Z),
}


def bar_word(word: Word) -> Word:
    """Letterwise substitution nu_x -> yz, nu_y -> xz, nu_z -> xy, squares -> doubled letters"""
    _require_a(word)
    return Word(tuple(g for letter in word.letters for g in _BAR_LETTERS[letter]), Alphabet.U)


def bar_is_ordered(word: Word) -> bool:
    ranks = [g.rank for g in bar_word(word).letters]
    return ranks == sorted(ranks)


def leading_monomial(word: Word) -> Tuple[LaurentPoly, Tuple[int, int, int]]:
    """Top-degree PBW term of phi(word) for an allowed word"""
    if not is_allowed(word):
        raise ValueError(f"{word} is not allowed")
    letters = word.letters
    if NY in letters:
        r, t = letters.count(X2), letters.count(Z2)
        return -Q ** -1, (2 * r + 1, 0, 2 * t + 1)
    d1, d2 = letters.count(NZ), letters.count(NX)
    r, s, t = letters.count(X2), letters.count(Y2), letters.count(Z2)
    return (-Q) ** (d1 + d2), (2 * r + d1, 2 * s + d1 + d2, 2 * t + d2)


def forbidden_pair_count(word: Word) -> int:
    """Number of positions i < j with (g_i, g_j) forbidden"""
    letters = word.letters
    return sum(
        1
        for i in range(len(letters))
        for j in range(i + 1, len(letters))
        if not _pair_allowed(letters[i], letters[j])
    )


def termination_measure(word: Word) -> Tuple[int, int]:
    return len(word), forbidden_pair_count(word)


# Reduction rules: (first letter, second letter, right-hand side, rule id)
RULE_TABLE: Tuple[Tuple[str, str, str, str], ...] = (
    ("nx", "nx", "q^4*y2*z2 + (q^3+q)*nx - q^4", "R01"),
    ("nx", "ny", "-q^-1*nz*z2 + q^-2*z2 + q^-3*nx + q*ny - q^-2", "R02"),
    ("nx", "nz", "q^2*nz*nx + (q^2-1)*y2 - q^2 + 1", "R03"),
    ("nx", "x2", "x2*nx - (q^2-q^-2)*ny + (q^2-q^-2)*nz", "R04"),
    ("nx", "y2", "q^4*y2*nx", "R05"),
    ("ny", "nx", "-q*nz*z2 + q^2*z2 + q^-1*nx + q^3*ny - q^2", "R06"),
    ("ny", "ny", "q^-4*x2*z2 + (q^-1+q^-3)*ny - q^-4", "R07"),
    ("ny", "nz", "-q^-1*x2*nx + q^-2*x2 + q*ny + q^-3*nz - q^-2", "R08"),
    ("ny", "x2", "q^-4*x2*ny", "R09"),
    ("ny", "y2", "-q*nz*nx + q^-1*y2 + q^-2*nz + q^2*nx - q^-1", "R10"),
    ("nz", "ny", "-q*x2*nx + q^2*x2 + q^3*ny + q^-1*nz - q^2", "R11"),
    ("nz", "nz", "q^4*x2*y2 + (q^3+q)*nz - q^4", "R12"),
    ("nz", "x2", "q^4*x2*nz", "R13"),
    ("y2", "ny", "-q*nz*nx + q^-1*y2 + q^2*nz + q^-2*nx - q^-1", "R14"),
    ("y2", "nz", "q^4*nz*y2", "R15"),
    ("y2", "x2", "q^8*x2*y2 + (q^7+q^5-q^3-q)*nz - q^8 + 1", "R16"),
    ("z2", "nx", "q^4*nx*z2", "R17"),
    ("z2", "ny", "q^-4*ny*z2", "R18"),
    ("z2", "nz", "nz*z2 + (q^2-q^-2)*nx - (q^2-q^-2)*ny", "R19"),
    ("z2", "x2", "q^-8*x2*z2 + (q^-5+q^-7-q^-1-q^-3)*ny - q^-8 + 1", "R20"),
    ("z2", "y2", "q^8*y2*z2 + (q^7+q^5-q^3-q)*nx - q^8 + 1", "R21"),
)


@dataclass(frozen=True)
class ReductionRule:
    lhs: Word
    rhs: NCPoly
    rule_id: str
    tilde: Word = field(init=False)

    def __post_init__(self):
        pairs = [w for w in self.rhs.words() if len(w) == 2]
        if len(pairs) != 1 or any(len(w) > 2 for w in self.rhs.words()):
            raise ValueError(f"rule for {self.lhs} must have exactly one length-2 word on the right")
        object.__setattr__(self, "tilde", pairs[0])

    @property
    def swap(self) -> bool:
        """The distinguished allowed word is the lhs with its letters exchanged"""
        return self.tilde.letters == self.lhs.letters[::-1]

    @property
    def lhs_poly(self) -> NCPoly:
        return NCPoly.from_word(self.lhs)

    def is_sound(self) -> bool:
        return check_identity(self.lhs_poly, self.rhs)

    def witness(self) -> PBWForm:
        return identity_witness(self.lhs_poly, self.rhs)


def _build_rules() -> Dict[Tuple[Gen, Gen], ReductionRule]:
    rules: Dict[Tuple[Gen, Gen], ReductionRule] = {}
    for first, second, rhs_text, rule_id in RULE_TABLE:
        lhs = Word.of(Gen.from_name(first), Gen.from_name(second))
        rules[lhs.letters] = ReductionRule(lhs, parse_expr(rhs_text, Alphabet.A), rule_id)
    return rules


REDUCTION_RULES: Dict[Tuple[Gen, Gen], ReductionRule] = _build_rules()


@dataclass
class RuleStatus:
    rule: ReductionRule
    verified: Optional[bool] = None


def rule_table(check: bool = False) -> List[RuleStatus]:
    statuses = []
    for rule in REDUCTION_RULES.values():
        status = RuleStatus(rule, rule.is_sound() if check else None)
        if check and not status.verified:
            logger.warning("reduction rule unsound", lhs=rule.lhs.text(), rule_id=rule.rule_id)
        statuses.append(status)
    if check:
        logger.info("rule table verified", sound=sum(1 for s in statuses if s.verified), total=len(statuses))
    return statuses


# Reduction


@dataclass
class _StepBudget:
    remaining: int
    cap: int


_BUDGET: ContextVar[Optional[_StepBudget]] = ContextVar("reduction_budget", default=None)


class Reducer:
    """Memoized rewriting of words to allowed words; one instance per selection order.

    The memo is shared and bounded; the step cap is counted per reduce() call in the caller's context.
    """

    def __init__(self, order: ReductionOrder = ReductionOrder.LEFTMOST,
                 max_steps: Optional[int] = None, assert_termination: Optional[bool] = None,
                 cache_size: Optional[int] = None):
        self.order = ReductionOrder(order)
        self.max_steps = max_steps or settings.MAX_REDUCTION_STEPS
        self.assert_termination = (
            settings.ASSERT_TERMINATION if assert_termination is None else assert_termination
        )
        self._reduce_letters = lru_cache(maxsize=cache_size or settings.REDUCER_CACHE_SIZE)(self._rewrite)

    def cache_info(self):
        return self._reduce_letters.cache_info()

    def _forbidden_position(self, letters: Tuple[Gen, ...]) -> Optional[int]:
        positions = range(len(letters) - 1)
        if self.order == ReductionOrder.RIGHTMOST:
            positions = reversed(positions)
        for i in positions:
            if not _pair_allowed(letters[i], letters[i + 1]):
                return i
        return None

    def _spend_step(self, letters: Tuple[Gen, ...]) -> None:
        budget = _BUDGET.get()
        if budget is None:
            return
        budget.remaining -= 1
        if budget.remaining < 0:
            logger.error("reduction step cap exceeded", cap=budget.cap)
            raise NonTermination(f"reduction exceeded {budget.cap} steps",
                                 word=Word(letters, Alphabet.A).text())

    def _rewrite(self, letters: Tuple[Gen, ...]) -> Tuple[Tuple[Tuple[Gen, ...], LaurentPoly], ...]:
        i = self._forbidden_position(letters)
        if i is None:
            return ((letters, LaurentPoly.one()),)

        self._spend_step(letters)
        rule = REDUCTION_RULES[(letters[i], letters[i + 1])]
        prefix, suffix = letters[:i], letters[i + 2:]
        before = termination_measure(Word(letters, Alphabet.A))
        result: Dict[Tuple[Gen, ...], LaurentPoly] = {}
        for word, coefficient in rule.rhs.terms():
            rewritten = prefix + word.letters + suffix
            if self.assert_termination:
                after = termination_measure(Word(rewritten, Alphabet.A))
                if not after < before:
                    raise NonTermination(
                        f"rule {rule.rule_id} did not decrease the termination measure",
                        word=Word(letters, Alphabet.A).text(),
                    )
            for reduced, c in self._reduce_letters(rewritten):
                total = result.get(reduced, LaurentPoly.zero()) + c * coefficient
                if total:
                    result[reduced] = total
                else:
                    result.pop(reduced, None)
        return tuple(result.items())

    def reduce(self, p: NCPoly) -> NCPoly:
        if p.alphabet != Alphabet.A:
            raise AlphabetMismatch("reduce expects a polynomial in nx, ny, nz, x2, y2, z2")
        token = _BUDGET.set(_StepBudget(self.max_steps, self.max_steps))
        try:
            terms: Dict[Word, LaurentPoly] = {}
            for word, coefficient in p.terms():
                for letters, c in self._reduce_letters(word.letters):
                    reduced = Word(letters, Alphabet.A)
                    terms[reduced] = terms.get(reduced, LaurentPoly.zero()) + c * coefficient
        finally:
            _BUDGET.reset(token)
        return NCPoly(terms, Alphabet.A)


_DEFAULT_REDUCERS: Dict[ReductionOrder, Reducer] = {
    order: Reducer(order) for order in ReductionOrder
}


def get_reducer(order: ReductionOrder = ReductionOrder.LEFTMOST) -> Reducer:
    return _DEFAULT_REDUCERS[ReductionOrder(order)]


def reduce(p: NCPoly, order: ReductionOrder = ReductionOrder.LEFTMOST) -> NCPoly:
    """Normal form over allowed words"""
    return get_reducer(order).reduce(p)


# phi: presented algebra -> U_q(sl2)


@lru_cache(maxsize=None)
def _letter_image(letter: Gen) -> Tuple[Tuple[Tuple[int, int, int], LaurentPoly], ...]:
    return tuple(normalize(expand(letter)).exponent_dict().items())


@lru_cache(maxsize=settings.ORACLE_CACHE_SIZE)
def _phi_letters(letters: Tuple[Gen, ...]) -> Tuple[Tuple[Tuple[int, int, int], LaurentPoly], ...]:
    if not letters:
        return (((0, 0, 0), LaurentPoly.one()),)
    prefix = dict(_phi_letters(letters[:-1]))
    return tuple(pbw_mul(prefix, dict(_letter_image(letters[-1]))).items())


def phi_word(word: Word) -> PBWDict:
    _require_a(word)
    return dict(_phi_letters(word.letters))


def phi_image(p: NCPoly) -> PBWForm:
    """normalize(expand_all(p)), computed multiplicatively with cached prefixes"""
    if p.alphabet != Alphabet.A:
        raise AlphabetMismatch("phi is defined on the nu/square alphabet")
    result: PBWDict = {}
    for word, coefficient in p.terms():
        _accumulate(result, _phi_letters(word.letters), coefficient)
    return PBWForm.from_exponents(result)


# Defining relations, moved to one side and cleared of denominators


def _cyclic(g: Gen, steps: int) -> Gen:
    """x -> y -> z -> x on nu-letters and squares"""
    nus, squares = (NX, NY, NZ), (X2, Y2, Z2)
    family = nus if g in nus else squares
    return family[(family.index(g) + steps) % 3]


def _rotate(p: NCPoly, steps: int) -> NCPoly:
    return p.map_words(
        lambda w: NCPoly.from_word(Word(tuple(_cyclic(g, steps) for g in w.letters), Alphabet.A)),
        Alphabet.A,
    )


def _build_defining_relations() -> List[Tuple[str, NCPoly]]:
    nx, ny, nz = (NCPoly.gen(g) for g in (NX, NY, NZ))
    c = (Q ** 2 - Q ** -2) * (Q - Q ** -1)
    unit = Q - Q ** -1
    cubic_left = Q ** 3 * nx * nx * ny - (Q + Q ** -1) * nx * ny * nx + Q ** -3 * ny * nx * nx - c * nx
    cubic_right = Q ** -3 * ny * ny * nx - (Q + Q ** -1) * ny * nx * ny + Q ** 3 * nx * ny * ny - c * ny
    mixed_left = (
        nx * (Q * ny * nz - Q ** -1 * nz * ny)
        - unit * (nx - Q ** -2 * ny - Q ** 2 * nz)
        - (Q ** 2 * ny * nz - Q ** -2 * nz * ny)
    )
    mixed_right = (
        (Q * ny * nz - Q ** -1 * nz * ny) * nx
        - unit * (nx - Q ** 2 * ny - Q ** -2 * nz)
        - (Q ** 2 * ny * nz - Q ** -2 * nz * ny)
    )
    relations: List[Tuple[str, NCPoly]] = []
    for name, base in (("cubic-left", cubic_left), ("cubic-right", cubic_right),
                       ("mixed-left", mixed_left), ("mixed-right", mixed_right)):
        for steps, suffix in enumerate(("x", "y", "z")):
            relations.append((f"{name}-{suffix}", _rotate(base, steps)))
    return relations


def _build_square_definitions() -> List[Tuple[str, NCPoly]]:
    """(q - q^-1)(x^2 - 1) + q nu_y nu_z - q^-1 nu_z nu_y = 0 and its cyclic images"""
    nx, ny, nz = (NCPoly.gen(g) for g in (NX, NY, NZ))
    x2 = NCPoly.gen(X2)
    base = (Q - Q ** -1) * (x2 - 1) + Q * ny * nz - Q ** -1 * nz * ny
    return [(f"square-{suffix}", _rotate(base, steps)) for steps, suffix in enumerate(("x", "y", "z"))]


DEFINING_RELATIONS: List[Tuple[str, NCPoly]] = _build_defining_relations()
SQUARE_DEFINITIONS: List[Tuple[str, NCPoly]] = _build_square_definitions()


def pbw_normal_form(p: NCPoly) -> PBWForm:
    """PBW form of a polynomial over either alphabet"""
    return phi_image(p) if p.alphabet == Alphabet.A else normalize(p)
