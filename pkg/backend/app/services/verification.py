"""
Verification Suites - Registered identity and module checks with machine-readable reports
Checks run concurrently in worker threads; reports are ordered by check id.
"""

import asyncio
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.exceptions import AlgebraError
from app.core.logging import get_logger
from app.services import linalg, modules
from app.services.laurent import Q, LaurentPoly, QValue
from app.services.ncpoly import A_LETTERS, U_LETTERS, Alphabet, Gen, NCPoly, Word
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
    enumerate_allowed,
    get_reducer,
    is_allowed,
    leading_monomial,
    matches_basis_shape,
    phi_image,
    phi_word,
    termination_measure,
)
from app.services.uq_oracle import (
    RewriteStrategy,
    expand,
    expand_all,
    is_even,
    normalize,
    normalize_word,
    pbw_mul,
)

logger = get_logger(__name__)

NX, NY, NZ, X2, Y2, Z2 = A_LETTERS
QQ_SUM = Q + Q ** -1


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    FLAGGED = "flagged"


class SuiteName(str, Enum):
    RELATIONS = "relations"
    RULES = "rules"
    PRESENTATION = "presentation"
    MODULES = "modules"
    CLASSIFICATION = "classification"
    ALL = "all"


@dataclass(frozen=True)
class SuiteBounds:
    max_word_len: int
    max_d: int
    q: Optional[QValue] = None
    random_samples: int = 2000
    random_word_len: int = 6
    oracle_samples: int = 1000
    oracle_word_len: int = 8
    independence_word_len: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.max_word_len < 0 or self.max_d < 0:
            raise ValueError("max_word_len and max_d must be non-negative")

    @classmethod
    def from_settings(cls, max_word_len: Optional[int] = None, max_d: Optional[int] = None,
                      q: Optional[QValue] = None) -> "SuiteBounds":
        if q is None and settings.DEFAULT_Q:
            q = QValue.parse(settings.DEFAULT_Q)
        return cls(
            max_word_len=settings.MAX_WORD_LEN if max_word_len is None else max_word_len,
            max_d=settings.MAX_D if max_d is None else max_d,
            q=q,
            random_samples=settings.RANDOM_SAMPLES,
            random_word_len=settings.RANDOM_WORD_LEN,
            oracle_samples=settings.ORACLE_SAMPLES,
            oracle_word_len=settings.ORACLE_WORD_LEN,
            independence_word_len=settings.INDEPENDENCE_WORD_LEN,
            seed=settings.RANDOM_SEED,
        )

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


@dataclass
class CheckOutcome:
    check_id: str
    location: str
    status: CheckStatus
    witness: Optional[str] = None
    detail: Optional[str] = None
    literal: Optional[str] = None
    corrected: Optional[str] = None


@dataclass
class Verdict:
    status: CheckStatus
    witness: Optional[str] = None
    detail: Optional[str] = None
    literal: Optional[str] = None
    corrected: Optional[str] = None


@dataclass
class SuiteReport:
    suite: str
    bounds: SuiteBounds
    results: List[CheckOutcome] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def counts(self) -> Dict[str, int]:
        tally = Counter(r.status for r in self.results)
        return {status.value: tally.get(status, 0) for status in CheckStatus}

    @property
    def failed(self) -> List[CheckOutcome]:
        return [r for r in self.results if r.status == CheckStatus.FAIL]

    @property
    def flagged(self) -> List[CheckOutcome]:
        return [r for r in self.results if r.status == CheckStatus.FLAGGED]

    @property
    def ok(self) -> bool:
        return not self.failed


# Registry

CheckFn = Callable[[SuiteBounds], Union[Verdict, List[CheckOutcome]]]


@dataclass(frozen=True)
class RegisteredCheck:
    check_id: str
    suite: SuiteName
    location: str
    fn: CheckFn


_REGISTRY: List[RegisteredCheck] = []


def register(suite: SuiteName, name: str, location: str) -> Callable[[CheckFn], CheckFn]:
    """Register a check; it returns a Verdict, or a list of outcomes for check families"""

    def decorator(fn: CheckFn) -> CheckFn:
        check_id = f"{suite.value}.{name}"
        if any(c.check_id == check_id for c in _REGISTRY):
            raise ValueError(f"duplicate check id {check_id}")
        _REGISTRY.append(RegisteredCheck(check_id, suite, location, fn))
        return fn

    return decorator


def registered_checks(suite: SuiteName = SuiteName.ALL) -> List[RegisteredCheck]:
    suite = SuiteName(suite)
    return [c for c in _REGISTRY if suite == SuiteName.ALL or c.suite == suite]


def _passed(ok: bool, witness: Optional[str] = None, detail: Optional[str] = None) -> Verdict:
    if ok:
        return Verdict(CheckStatus.PASS, detail=detail)
    return Verdict(CheckStatus.FAIL, witness=witness, detail=detail)


def _zero_form(p: NCPoly):
    return phi_image(p) if p.alphabet == Alphabet.A else normalize(expand_all(p))


def _all_vanish(identities: Sequence[Tuple[str, NCPoly]]) -> Verdict:
    """Each polynomial must normalize to zero; the first survivor is the witness"""
    for name, p in identities:
        form = _zero_form(p)
        if form:
            return _passed(False, witness=f"{name}: {form}")
    return _passed(True, detail=f"{len(identities)} identities")


def _first_failure(labels_and_results) -> Optional[str]:
    for label, ok in labels_and_results:
        if not ok:
            return str(label)
    return None


# Shared generators

_X, _Y, _Z = (NCPoly.gen(g) for g in U_LETTERS)
_NU_U = tuple(expand(g) for g in (NX, NY, NZ))
_NU_A = tuple(NCPoly.gen(g) for g in (NX, NY, NZ))
_SQ_A = tuple(NCPoly.gen(g) for g in (X2, Y2, Z2))
_SUFFIXES = ("x", "y", "z")


def _rotations(build: Callable[..., NCPoly], *families: Tuple[NCPoly, NCPoly, NCPoly],
               name: str) -> List[Tuple[str, NCPoly]]:
    """build applied to each family rotated x -> y -> z -> x"""
    result = []
    for step, suffix in enumerate(_SUFFIXES):
        rotated = [tuple(f[(k + step) % 3] for k in range(3)) for f in families]
        result.append((f"{name}-{suffix}", build(*rotated)))
    return result


def _random_word(rng: random.Random, letters: Sequence[Gen], max_len: int, alphabet: Alphabet) -> Word:
    length = rng.randint(0, max_len)
    return Word(tuple(rng.choice(letters) for _ in range(length)), alphabet)


# Relations suite


@register(SuiteName.RELATIONS, "flip", "equitable flip relations")
def _check_flips(bounds: SuiteBounds) -> Verdict:
    def build(u):
        a, b, _ = u
        return [
            a * b - (Q ** -2 * b * a - Q ** -2 + 1),
            b * a - (Q ** 2 * a * b - Q ** 2 + 1),
        ]

    identities = []
    for step, suffix in enumerate(_SUFFIXES):
        rotated = tuple((_X, _Y, _Z)[(k + step) % 3] for k in range(3))
        for k, p in enumerate(build(rotated)):
            identities.append((f"flip-{suffix}{k}", p))
    return _all_vanish(identities)


@register(SuiteName.RELATIONS, "nu-definition", "two forms of each nu element")
def _check_nu_definition(bounds: SuiteBounds) -> Verdict:
    identities = _rotations(
        lambda u: Q * (1 - u[1] * u[2]) - Q ** -1 * (1 - u[2] * u[1]),
        (_X, _Y, _Z), name="nu-forms",
    )
    return _all_vanish(identities)


@register(SuiteName.RELATIONS, "nu-pairs", "letter pairs through nu elements")
def _check_nu_pairs(bounds: SuiteBounds) -> Verdict:
    identities = _rotations(lambda u, nu: u[0] * u[1] - (1 - Q ** -1 * nu[2]), (_X, _Y, _Z), _NU_U,
                            name="forward")
    identities += _rotations(lambda u, nu: u[1] * u[0] - (1 - Q * nu[2]), (_X, _Y, _Z), _NU_U,
                             name="backward")
    return _all_vanish(identities)


def _nu_commutation() -> List[Tuple[str, NCPoly]]:
    identities = _rotations(lambda u, nu: u[0] * nu[1] - Q ** 2 * nu[1] * u[0], (_X, _Y, _Z), _NU_U,
                            name="up")
    identities += _rotations(lambda u, nu: u[0] * nu[2] - Q ** -2 * nu[2] * u[0], (_X, _Y, _Z), _NU_U,
                             name="down")
    return identities


@register(SuiteName.RELATIONS, "nu-commutation", "letters q-commuting with nu elements")
def _check_nu_commutation(bounds: SuiteBounds) -> Verdict:
    return _all_vanish(_nu_commutation())


@register(SuiteName.RELATIONS, "nu-commutation-printed", "printed square/nu commutation line")
def _check_nu_commutation_printed(bounds: SuiteBounds) -> Verdict:
    literal = _rotations(lambda u, nu: u[0] * u[0] * nu[2] - Q ** -2 * nu[2] * u[0], (_X, _Y, _Z), _NU_U,
                         name="printed")
    surviving = [(name, _zero_form(p)) for name, p in literal]
    corrected = _all_vanish(_rotations(lambda u, nu: u[0] * nu[2] - Q ** -2 * nu[2] * u[0],
                                       (_X, _Y, _Z), _NU_U, name="corrected"))
    texts = {
        "literal": "x^2*nz = q^-2*nz*x (and rotations)",
        "corrected": "x*nz = q^-2*nz*x (and rotations)",
    }
    if corrected.status == CheckStatus.FAIL:
        return Verdict(CheckStatus.FAIL, witness=corrected.witness, **texts)
    refuted = [(name, form) for name, form in surviving if form]
    if not refuted:
        return Verdict(CheckStatus.PASS, detail="literal reading holds", **texts)
    name, form = refuted[0]
    logger.info("printed identity refuted", check="nu-commutation-printed", refuted=len(refuted))
    return Verdict(CheckStatus.FLAGGED, witness=f"{name}: {form}",
                   detail=f"literal reading refuted in {len(refuted)} of 3 rotations; corrected reading holds",
                   **texts)


@register(SuiteName.RELATIONS, "squares-commutation", "squares q^4-commuting with nu elements")
def _check_squares_commutation(bounds: SuiteBounds) -> Verdict:
    identities = _rotations(lambda sq, nu: sq[0] * nu[1] - Q ** 4 * nu[1] * sq[0], _SQ_A, _NU_A, name="up")
    identities += _rotations(lambda sq, nu: sq[0] * nu[2] - Q ** -4 * nu[2] * sq[0], _SQ_A, _NU_A,
                             name="down")
    return _all_vanish(identities)


@register(SuiteName.RELATIONS, "squares-products", "products of two squares through nu elements")
def _check_squares_products(bounds: SuiteBounds) -> Verdict:
    identities = _rotations(
        lambda sq, nu: sq[0] * sq[1] - (1 - Q ** -2 * QQ_SUM * nu[2] + Q ** -4 * nu[2] * nu[2]),
        _SQ_A, _NU_A, name="ordered",
    )
    identities += _rotations(
        lambda sq, nu: sq[1] * sq[0] - (1 - Q ** 2 * QQ_SUM * nu[2] + Q ** 4 * nu[2] * nu[2]),
        _SQ_A, _NU_A, name="reversed",
    )
    return _all_vanish(identities)


@register(SuiteName.RELATIONS, "square-nu", "square times its own nu element")
def _check_square_nu(bounds: SuiteBounds) -> Verdict:
    identities = _rotations(
        lambda sq, nu: sq[0] * nu[0] - (Q ** -1 * sq[0] - Q ** -1 + Q ** 2 * nu[1] + Q ** -2 * nu[2]
                                        - Q * nu[1] * nu[2]),
        _SQ_A, _NU_A, name="left",
    )
    identities += _rotations(
        lambda sq, nu: nu[0] * sq[0] - (Q ** -1 * sq[0] - Q ** -1 + Q ** -2 * nu[1] + Q ** 2 * nu[2]
                                        - Q * nu[1] * nu[2]),
        _SQ_A, _NU_A, name="right",
    )
    return _all_vanish(identities)


@register(SuiteName.RELATIONS, "square-definitions", "squares through nu commutators")
def _check_square_definitions(bounds: SuiteBounds) -> Verdict:
    return _all_vanish(SQUARE_DEFINITIONS)


@register(SuiteName.RELATIONS, "nu-from-squares", "nu elements through square commutators")
def _check_nu_from_squares(bounds: SuiteBounds) -> Verdict:
    width = Q ** 2 - Q ** -2
    identities = _rotations(
        lambda sq, nu: (QQ_SUM * width * nu[0] - (Q ** 2 + Q ** -2) * width
                        + (Q ** 4 * sq[1] * sq[2] - Q ** -4 * sq[2] * sq[1])),
        _SQ_A, _NU_A, name="cleared",
    )
    return _all_vanish(identities)


@register(SuiteName.RELATIONS, "defining-relations", "cubic and mixed relations of the nu elements")
def _check_defining_relations(bounds: SuiteBounds) -> Verdict:
    return _all_vanish(DEFINING_RELATIONS)


@register(SuiteName.RELATIONS, "even-closure", "images of nu/square words have even degree")
def _check_even_closure(bounds: SuiteBounds) -> Verdict:
    words = all_words(min(bounds.max_word_len, 3))
    odd = [w for w in words if not is_even(phi_image(NCPoly.from_word(w)))]
    return _passed(not odd, witness=odd[0].text() if odd else None, detail=f"{len(words)} words")


@register(SuiteName.RELATIONS, "oracle-confluence", "insertion and flip-rewriting normal forms agree")
def _check_oracle_confluence(bounds: SuiteBounds) -> Verdict:
    rng = bounds.rng("oracle")
    max_len = min(bounds.oracle_word_len, 2 * bounds.max_word_len)
    for _ in range(bounds.oracle_samples):
        word = _random_word(rng, U_LETTERS, max_len, Alphabet.U)
        forms = [normalize_word(word, s) for s in RewriteStrategy]
        if any(f != forms[0] for f in forms[1:]):
            return _passed(False, witness=word.text())
    return _passed(True, detail=f"{bounds.oracle_samples} words of length <= {max_len}")


@register(SuiteName.RELATIONS, "homomorphism", "phi is multiplicative on nu/square words")
def _check_homomorphism(bounds: SuiteBounds) -> Verdict:
    rng = bounds.rng("homomorphism")
    max_len = min(bounds.max_word_len, 3)
    samples = min(bounds.oracle_samples, 100)
    for _ in range(samples):
        u = _random_word(rng, A_LETTERS, max_len, Alphabet.A)
        v = _random_word(rng, A_LETTERS, max_len, Alphabet.A)
        product = pbw_mul(phi_word(u), phi_word(v))
        direct = normalize(expand_all(NCPoly.from_word(u * v))).exponent_dict()
        if product != phi_word(u * v) or product != direct:
            return _passed(False, witness=f"{u.text()} | {v.text()}")
    return _passed(True, detail=f"{samples} pairs")


# Rules suite


@register(SuiteName.RULES, "table", "reduction rule table")
def _check_rules(bounds: SuiteBounds) -> List[CheckOutcome]:
    outcomes = []
    for rule in REDUCTION_RULES.values():
        witness = rule.witness()
        outcomes.append(CheckOutcome(
            check_id=f"{SuiteName.RULES.value}.{rule.rule_id}",
            location=f"reduction rule for {rule.lhs.text()}",
            status=CheckStatus.FAIL if witness else CheckStatus.PASS,
            witness=str(witness) if witness else None,
        ))
    logger.info("rule table verified", sound=sum(o.status == CheckStatus.PASS for o in outcomes),
                total=len(outcomes))
    return outcomes


# Presentation suite


@register(SuiteName.PRESENTATION, "pair-table", "allowed and forbidden letter pairs")
def _check_pair_table(bounds: SuiteBounds) -> Verdict:
    allowed = [p for p, s in PAIR_TABLE.items() if s == PairStatus.ALLOWED]
    forbidden = {p for p, s in PAIR_TABLE.items() if s == PairStatus.FORBIDDEN}
    ok = len(allowed) == 15 and forbidden == set(REDUCTION_RULES) and len(forbidden) == 21
    return _passed(ok, witness=f"{len(allowed)} allowed, {len(forbidden)} forbidden")


@register(SuiteName.PRESENTATION, "rule-shape", "rule right-hand sides and termination order")
def _check_rule_shape(bounds: SuiteBounds) -> Verdict:
    swaps = 0
    for rule in REDUCTION_RULES.values():
        before = termination_measure(rule.lhs)
        for word in rule.rhs.words():
            if not is_allowed(word):
                return _passed(False, witness=f"{rule.rule_id}: {word.text()} is forbidden")
            if not termination_measure(word) < before:
                return _passed(False, witness=f"{rule.rule_id}: {word.text()} does not decrease the measure")
        swaps += rule.swap
    return _passed(swaps == 12, witness=f"{swaps} swap rules", detail="12 swap rules")


@register(SuiteName.PRESENTATION, "allowed-shapes", "allowed words, basis shapes and ordered bar images")
def _check_allowed_shapes(bounds: SuiteBounds) -> Verdict:
    words = all_words(bounds.max_word_len)
    for word in words:
        verdicts = {is_allowed(word), matches_basis_shape(word), bar_is_ordered(word)}
        if len(verdicts) != 1:
            return _passed(False, witness=word.text())
    allowed = sum(1 for w in words if is_allowed(w))
    return _passed(allowed == len(enumerate_allowed(bounds.max_word_len)),
                   witness=f"{allowed} allowed words", detail=f"{len(words)} words")


@register(SuiteName.PRESENTATION, "phi-consistency", "phi(w) = phi(reduce(w))")
def _check_phi_consistency(bounds: SuiteBounds) -> Verdict:
    reducer = get_reducer(ReductionOrder.LEFTMOST)
    words = all_words(bounds.max_word_len)
    for word in words:
        reduced = reducer.reduce(NCPoly.from_word(word))
        if phi_word(word) != phi_image(reduced).exponent_dict():
            return _passed(False, witness=word.text())
    small = all_words(min(bounds.max_word_len, 3))
    for word in small:
        if phi_word(word) != normalize(expand_all(NCPoly.from_word(word))).exponent_dict():
            return _passed(False, witness=f"multiplicative phi differs on {word.text()}")
    return _passed(True, detail=f"{len(words)} words")


@register(SuiteName.PRESENTATION, "termination", "measure decreases at every rewrite")
def _check_termination(bounds: SuiteBounds) -> Verdict:
    reducer = Reducer(ReductionOrder.RIGHTMOST, assert_termination=True)
    words = all_words(bounds.max_word_len)
    for word in words:
        reduced = reducer.reduce(NCPoly.from_word(word))
        if not all(is_allowed(w) for w in reduced.words()):
            return _passed(False, witness=word.text())
    return _passed(True, detail=f"{len(words)} words")


@register(SuiteName.PRESENTATION, "defining-relations", "relations reduce to zero")
def _check_relations_reduce(bounds: SuiteBounds) -> Verdict:
    reducer = get_reducer()
    for name, relation in DEFINING_RELATIONS + SQUARE_DEFINITIONS:
        reduced = reducer.reduce(relation)
        if reduced:
            return _passed(False, witness=f"{name}: {reduced}")
    return _passed(True)


def _sample_q(bounds: SuiteBounds) -> QValue:
    return bounds.q or QValue(Fraction(2))


@register(SuiteName.PRESENTATION, "independence", "phi images of allowed words are independent")
def _check_independence(bounds: SuiteBounds) -> Verdict:
    max_len = min(bounds.independence_word_len, bounds.max_word_len)
    words = enumerate_allowed(max_len)
    images = [phi_word(w) for w in words]
    columns = sorted({m for image in images for m in image})
    q = _sample_q(bounds)
    rows = [tuple(image.get(m, LaurentPoly.zero()).evaluate(q) for m in columns) for image in images]
    found = linalg.rank(rows, q)
    return _passed(found == len(words), witness=f"rank {found} of {len(words)}",
                   detail=f"{len(words)} allowed words at q = {q}")


@register(SuiteName.PRESENTATION, "leading-monomials", "leading terms biject onto even monomials")
def _check_leading_monomials(bounds: SuiteBounds) -> Verdict:
    max_len = min(bounds.independence_word_len, bounds.max_word_len)
    words = enumerate_allowed(max_len)
    seen = set()
    for word in words:
        coefficient, monomial = leading_monomial(word)
        top = {m: c for m, c in phi_word(word).items() if sum(m) == 2 * len(word)}
        if top != {monomial: coefficient}:
            return _passed(False, witness=word.text())
        seen.add(monomial)
    even = {
        (r, s, t)
        for r in range(2 * max_len + 1)
        for s in range(2 * max_len + 1)
        for t in range(2 * max_len + 1)
        if (r + s + t) % 2 == 0 and r + s + t <= 2 * max_len
    }
    return _passed(seen == even and len(seen) == len(words),
                   witness=f"{len(seen)} leading monomials, {len(even)} even monomials",
                   detail=f"{len(words)} allowed words")


@register(SuiteName.PRESENTATION, "confluence", "leftmost and rightmost reduction agree")
def _check_confluence(bounds: SuiteBounds) -> Verdict:
    rng = bounds.rng("confluence")
    max_len = min(bounds.random_word_len, bounds.max_word_len + 1)
    left, right = get_reducer(ReductionOrder.LEFTMOST), get_reducer(ReductionOrder.RIGHTMOST)
    for _ in range(bounds.random_samples):
        p = NCPoly.from_word(_random_word(rng, A_LETTERS, max_len, Alphabet.A))
        if left.reduce(p) != right.reduce(p):
            return _passed(False, witness=str(p))
    return _passed(True, detail=f"{bounds.random_samples} words of length <= {max_len}")


# Modules suite


def _ds(bounds: SuiteBounds) -> range:
    return range(bounds.max_d + 1)


@register(SuiteName.MODULES, "l-eps-relations", "equitable relations on L(d, eps)")
def _check_l_eps_relations(bounds: SuiteBounds) -> Verdict:
    failure = _first_failure(
        ((d, eps), modules.check_module_relations(modules.build_L_eps(d, eps, bounds.q)).ok)
        for d in _ds(bounds) for eps in (1, -1)
    )
    return _passed(failure is None, witness=failure)


@register(SuiteName.MODULES, "l-relations", "defining relations on L(d)")
def _check_l_relations(bounds: SuiteBounds) -> Verdict:
    failure = _first_failure(
        (d, modules.check_module_relations(modules.build_L(d, bounds.q)).ok) for d in _ds(bounds)
    )
    return _passed(failure is None, witness=failure)


@register(SuiteName.MODULES, "mutation", "a perturbed module violates a relation")
def _check_mutation(bounds: SuiteBounds) -> Verdict:
    d = min(2, bounds.max_d)
    broken = modules.perturb(modules.build_L(d, bounds.q), NX, 0, 0)
    report = modules.check_module_relations(broken)
    return _passed(not report.ok, witness=f"perturbed L({d}) passed every relation",
                   detail=f"{len(report.failed)} relations fail")


@register(SuiteName.MODULES, "restriction", "L(d, eps) restricted is L(d) for both eps")
def _check_restriction(bounds: SuiteBounds) -> Verdict:
    def same(d: int, eps: int) -> bool:
        restricted = modules.restrict(modules.build_L_eps(d, eps, bounds.q))
        target = modules.build_L(d, bounds.q)
        return all(linalg.matrices_equal(restricted.actions[g], target.actions[g]) for g in A_LETTERS)

    failure = _first_failure(((d, eps), same(d, eps)) for d in _ds(bounds) for eps in (1, -1))
    return _passed(failure is None, witness=failure)


@register(SuiteName.MODULES, "x2-table-printed", "printed x^2 action coefficient")
def _check_x2_table_printed(bounds: SuiteBounds) -> Verdict:
    texts = {
        "literal": "u_(i-1) coefficient q^(d-2i+1)*(q+q^-1)*(q^-d - d^(d-2i+2)), d read as a number",
        "corrected": "u_(i-1) coefficient q^(d-2i+1)*(q+q^-1)*(q^-d - q^(d-2i+2))",
    }
    refuted, corrected_fails = [], []
    for d in range(max(bounds.max_d, 1) + 1):
        x = modules.build_L_eps(d, 1, bounds.q).matrix(Gen.X)
        product = linalg.matmul(x, x)
        if not linalg.matrices_equal(modules.x2_table(d, literal=True, q=bounds.q), product):
            refuted.append(d)
        if not linalg.matrices_equal(modules.x2_table(d, q=bounds.q), product):
            corrected_fails.append(d)
    if corrected_fails:
        return Verdict(CheckStatus.FAIL, witness=f"corrected table fails at d = {corrected_fails[0]}", **texts)
    if not refuted:
        return Verdict(CheckStatus.PASS, detail="literal reading holds", **texts)
    logger.info("printed identity refuted", check="x2-table-printed", degrees=refuted)
    return Verdict(CheckStatus.FLAGGED, witness=f"literal table differs from x*x at d = {refuted[0]}",
                   detail=f"literal reading refuted for d in {refuted}; corrected reading holds", **texts)


@register(SuiteName.MODULES, "y2-table", "tabulated y^2 action equals y*y")
def _check_y2_table(bounds: SuiteBounds) -> Verdict:
    def same(d: int) -> bool:
        y = modules.build_L_eps(d, 1, bounds.q).matrix(Gen.Y)
        return linalg.matrices_equal(modules.y2_table(d, bounds.q), linalg.matmul(y, y))

    failure = _first_failure((d, same(d)) for d in _ds(bounds))
    return _passed(failure is None, witness=failure)


@register(SuiteName.MODULES, "z2-spectrum", "z^2 is diagonal with distinct eigenvalues q^(4i-2d)")
def _check_z2_spectrum(bounds: SuiteBounds) -> Verdict:
    def spectrum_ok(d: int) -> bool:
        z2 = modules.build_L(d, bounds.q).matrix(Z2)
        values = [z2[i][i] for i in range(d + 1)]
        expected = [linalg.coerce(Q ** (4 * i - 2 * d), bounds.q) for i in range(d + 1)]
        return linalg.is_diagonal(z2) and values == expected and len(set(values)) == d + 1

    failure = _first_failure((d, spectrum_ok(d)) for d in _ds(bounds))
    return _passed(failure is None, witness=failure)


@register(SuiteName.MODULES, "irreducible", "irreducibility of L(d) and its failure on sums")
def _check_irreducible(bounds: SuiteBounds) -> Verdict:
    failure = _first_failure(
        (f"L({d})", modules.check_irreducible(modules.build_L(d, bounds.q))) for d in _ds(bounds)
    )
    if failure:
        return _passed(False, witness=failure)
    if bounds.max_d >= 1:
        split = modules.direct_sum(modules.build_L(0, bounds.q), modules.build_L(1, bounds.q))
        if modules.check_irreducible(split):
            return _passed(False, witness="L(0) + L(1) reported irreducible")
    q = _sample_q(bounds)
    d = min(2, bounds.max_d)
    p = modules.random_unimodular(d + 1, bounds.rng("irreducible"))
    conjugated = modules.conjugate(modules.build_L(d, q), p)
    return _passed(modules.check_irreducible(conjugated), witness=f"conjugated L({d}) at q = {q}")


@register(SuiteName.MODULES, "nilpotency", "nu elements act nilpotently")
def _check_nilpotency(bounds: SuiteBounds) -> Verdict:
    for d in _ds(bounds):
        m = modules.build_L(d, bounds.q)
        nx = modules.nilpotency_index(m.matrix(NX), bounds.q)
        ny = modules.nilpotency_index(m.matrix(NY), bounds.q)
        nz = modules.nilpotency_index(m.matrix(NZ), bounds.q)
        if nx != d + 1 or ny != d + 1 or nz is None or nz > d + 1:
            return _passed(False, witness=f"d = {d}: indices {nx}, {ny}, {nz}")
    return _passed(True)


@register(SuiteName.MODULES, "commuting-kernel", "z^2 and ny*nx commute and preserve ker(ny)")
def _check_commuting_kernel(bounds: SuiteBounds) -> Verdict:
    failure = _first_failure(
        (d, modules.check_commuting_on_kernel(modules.build_L(d, bounds.q))) for d in _ds(bounds)
    )
    return _passed(failure is None, witness=failure)


# Classification suite


@register(SuiteName.CLASSIFICATION, "solve-alpha", "alpha recurrence and boundary conditions")
def _check_solve_alpha(bounds: SuiteBounds) -> Verdict:
    for d in _ds(bounds):
        modules.solve_alpha(d)
    return _passed(True, detail=f"d <= {bounds.max_d}")


@register(SuiteName.CLASSIFICATION, "extract", "highest-weight data of L(d)")
def _check_extract(bounds: SuiteBounds) -> Verdict:
    for d in _ds(bounds):
        hw = modules.extract_highest_weight(modules.build_L(d, bounds.q))
        expected = modules.solve_alpha(d)
        alpha = tuple(linalg.coerce(a, bounds.q) for a in expected.alpha)
        if hw.d != d or hw.lam != linalg.coerce(expected.lam, bounds.q) or hw.alpha != alpha:
            return _passed(False, witness=f"d = {d}")
    return _passed(True)


@register(SuiteName.CLASSIFICATION, "v-basis", "v-basis action entrywise and through identities")
def _check_v_basis(bounds: SuiteBounds) -> Verdict:
    for d in _ds(bounds):
        tables = modules.build_v_basis_action(d, bounds.q)
        derived = modules.v_basis_from_identities(d, bounds.q)
        for g in A_LETTERS:
            if not linalg.matrices_equal(tables.actions[g], derived.actions[g]):
                return _passed(False, witness=f"d = {d}, {g.value}")
        if not modules.check_module_relations(tables).ok:
            return _passed(False, witness=f"d = {d}: relations fail on the v-basis")
    return _passed(True)


@register(SuiteName.CLASSIFICATION, "gamma", "gamma map intertwines the v-basis action with L(d)")
def _check_gamma(bounds: SuiteBounds) -> Verdict:
    failure = _first_failure((d, modules.gamma_iso(d).verified) for d in _ds(bounds))
    if failure:
        return _passed(False, witness=f"d = {failure}")
    q = _sample_q(bounds)
    for d in range(min(5, bounds.max_d) + 1):
        dim = modules.hom_space(modules.build_v_basis_action(d, q), modules.build_L(d, q))
        if dim != 1:
            return _passed(False, witness=f"d = {d}: intertwiners span dimension {dim}")
    return _passed(True)


@register(SuiteName.CLASSIFICATION, "hom-eps", "Hom dimensions between the two types")
def _check_hom_eps(bounds: SuiteBounds) -> Verdict:
    q = _sample_q(bounds)
    for d in range(min(5, bounds.max_d) + 1):
        plus, minus = modules.build_L_eps(d, 1, q), modules.build_L_eps(d, -1, q)
        dims = (
            modules.hom_space(modules.restrict(plus), modules.restrict(minus)),
            modules.hom_space(plus, minus),
            modules.hom_space(plus, plus),
        )
        if dims != (1, 0, 1):
            return _passed(False, witness=f"d = {d}: dimensions {dims}")
    return _passed(True, detail=f"q = {q}")


@register(SuiteName.CLASSIFICATION, "conjugated-extract", "extraction after a random change of basis")
def _check_conjugated_extract(bounds: SuiteBounds) -> Verdict:
    q = bounds.q or QValue(Fraction(3, 2))
    d = min(3, bounds.max_d)
    p = modules.random_unimodular(d + 1, bounds.rng("conjugated-extract"))
    m = modules.conjugate(modules.build_L(d, q), p)
    hw = modules.extract_highest_weight(m)
    alpha = tuple(linalg.coerce(a, q) for a in modules.solve_alpha(d).alpha)
    if hw.d != d or hw.lam != linalg.coerce(modules.expected_lambda(d), q) or hw.alpha != alpha:
        return _passed(False, witness=f"d = {hw.d}, lambda = {hw.lam}")
    return _passed(modules.classify(m).verified, witness="induced map is not an isomorphism",
                   detail=f"L({d}) at q = {q}")


@register(SuiteName.CLASSIFICATION, "unique-irreducible", "every extracted module is isomorphic to L(d)")
def _check_unique_irreducible(bounds: SuiteBounds) -> Verdict:
    for d in _ds(bounds):
        for m in (modules.build_L(d, bounds.q), modules.restrict(modules.build_L_eps(d, -1, bounds.q))):
            if not modules.classify(m).verified:
                return _passed(False, witness=f"d = {d}")
    return _passed(True)


# Runner


def _execute(check: RegisteredCheck, bounds: SuiteBounds) -> List[CheckOutcome]:
    try:
        result = check.fn(bounds)
    except (AlgebraError, ValueError, ArithmeticError) as e:
        logger.warning("check raised", check_id=check.check_id, error=str(e))
        return [CheckOutcome(check.check_id, check.location, CheckStatus.FAIL,
                             detail=f"{type(e).__name__}: {e}")]
    if isinstance(result, list):
        return result
    return [CheckOutcome(check.check_id, check.location, result.status, result.witness,
                         result.detail, result.literal, result.corrected)]


async def run_suite(name: Union[SuiteName, str], bounds: Optional[SuiteBounds] = None) -> SuiteReport:
    """Run every check of a suite ('all' for the union); failures are report entries"""
    suite = SuiteName(name)
    bounds = bounds or SuiteBounds.from_settings()
    checks = registered_checks(suite)
    semaphore = asyncio.Semaphore(settings.MAX_CONCURRENT_CHECKS)

    async def run_one(check: RegisteredCheck) -> List[CheckOutcome]:
        async with semaphore:
            return await asyncio.to_thread(_execute, check, bounds)

    logger.info("suite started", suite=suite.value, checks=len(checks),
                max_word_len=bounds.max_word_len, max_d=bounds.max_d,
                q=None if bounds.q is None else str(bounds.q))
    started = time.perf_counter()
    batches = await asyncio.gather(*(run_one(c) for c in checks))
    results = sorted((o for batch in batches for o in batch), key=lambda o: o.check_id)
    report = SuiteReport(suite.value, bounds, results, round(time.perf_counter() - started, 3))

    for outcome in report.flagged:
        logger.info("flagged check", check_id=outcome.check_id, detail=outcome.detail)
    for outcome in report.failed:
        logger.warning("failed check", check_id=outcome.check_id, witness=outcome.witness)
    logger.info("suite finished", suite=suite.value, elapsed=report.elapsed, **report.counts)
    return report


def run_suite_sync(name: Union[SuiteName, str], bounds: Optional[SuiteBounds] = None) -> SuiteReport:
    return asyncio.run(run_suite(name, bounds))
