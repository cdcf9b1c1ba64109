"""
PBW Oracle - Normal forms in the equitable presentation of U_q(sl2)
Rewrites words in x, y, z into the ordered basis x^r y^s z^t using the three flip relations
    yx -> q^2 xy + (1 - q^2)
    zy -> q^2 yz + (1 - q^2)
    zx -> q^-2 xz + (1 - q^-2)
and expands the nu/square alphabet into equitable words.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

from app.core.config import settings
from app.core.exceptions import AlphabetMismatch, NonTermination
from app.core.logging import get_logger
from app.services.laurent import Q, LaurentPoly
from app.services.ncpoly import Alphabet, Gen, NCPoly, Word

logger = get_logger(__name__)

Exponents = Tuple[int, int, int]
PBWDict = Dict[Exponents, LaurentPoly]

ONE = LaurentPoly.one()
_LETTER_INDEX = {Gen.X: 0, Gen.Y: 1, Gen.Z: 2}
_INDEX_LETTER = (Gen.X, Gen.Y, Gen.Z)

# (later letter, earlier letter) -> (coefficient of the swapped word, constant term)
_FLIP_RULES: Dict[Tuple[int, int], Tuple[LaurentPoly, LaurentPoly]] = {
    (1, 0): (Q ** 2, 1 - Q ** 2),
    (2, 1): (Q ** 2, 1 - Q ** 2),
    (2, 0): (Q ** -2, 1 - Q ** -2),
}


class RewriteStrategy(str, Enum):
    INSERTION = "insertion"
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


class PBWForm(NCPoly):
    """U-alphabet polynomial supported on ordered monomials x^r y^s z^t"""

    __slots__ = ()

    @classmethod
    def from_exponents(cls, terms: PBWDict) -> "PBWForm":
        form = cls.__new__(cls)
        form.alphabet = Alphabet.U
        form._terms = {monomial_word(m): c for m, c in terms.items() if c}
        return form

    def exponent_terms(self) -> List[Tuple[int, int, int, LaurentPoly]]:
        return [(*word_exponents(w), c) for w, c in self.terms()]

    def exponent_dict(self) -> PBWDict:
        return {word_exponents(w): c for w, c in self._terms.items()}

    def to_json(self) -> List[Dict[str, object]]:
        return [{"r": r, "s": s, "t": t, "coeff": str(c)} for r, s, t, c in self.exponent_terms()]


def monomial_word(exponents: Exponents) -> Word:
    r, s, t = exponents
    return Word((Gen.X,) * r + (Gen.Y,) * s + (Gen.Z,) * t, Alphabet.U)


def word_exponents(word: Word) -> Exponents:
    letters = word.letters
    counts = (letters.count(Gen.X), letters.count(Gen.Y), letters.count(Gen.Z))
    if word != monomial_word(counts):
        raise ValueError(f"{word} is not an ordered monomial")
    return counts


def _accumulate(target: PBWDict, source: Iterable[Tuple[Exponents, LaurentPoly]], factor: LaurentPoly) -> None:
    for monomial, coefficient in source:
        product = coefficient * factor
        if monomial in target:
            total = target[monomial] + product
            if total:
                target[monomial] = total
            else:
                del target[monomial]
        elif product:
            target[monomial] = product


# Insertion strategy: one letter at a time into an ordered monomial


@lru_cache(maxsize=settings.ORACLE_CACHE_SIZE)
def _times_letter(monomial: Exponents, letter: int) -> Tuple[Tuple[Exponents, LaurentPoly], ...]:
    """x^r y^s z^t * letter, in PBW form"""
    r, s, t = monomial
    if letter == 2:
        return (((r, s, t + 1), ONE),)
    if letter == 1 and t == 0:
        return (((r, s + 1, 0), ONE),)
    if letter == 0 and t == 0 and s == 0:
        return (((r + 1, 0, 0), ONE),)

    result: PBWDict = {}
    if t > 0:
        # m' z * letter with letter in {x, y}: flip z against it, then restore z on the right
        shorter = (r, s, t - 1)
        swap, constant = _FLIP_RULES[(2, letter)]
        for (r1, s1, t1), c in _times_letter(shorter, letter):
            _accumulate(result, [((r1, s1, t1 + 1), c)], swap)
        _accumulate(result, [(shorter, ONE)], constant)
    else:
        # x^r y^s * x with s > 0
        shorter = (r, s - 1, 0)
        swap, constant = _FLIP_RULES[(1, 0)]
        for (r1, s1, t1), c in _times_letter(shorter, 0):
            _accumulate(result, [((r1, s1 + 1, t1), c)], swap)
        _accumulate(result, [(shorter, ONE)], constant)
    return tuple(result.items())


@lru_cache(maxsize=settings.ORACLE_CACHE_SIZE)
def _insert_word(letters: Tuple[int, ...]) -> Tuple[Tuple[Exponents, LaurentPoly], ...]:
    if not letters:
        return (((0, 0, 0), ONE),)
    result: PBWDict = {}
    for monomial, coefficient in _insert_word(letters[:-1]):
        _accumulate(result, _times_letter(monomial, letters[-1]), coefficient)
    return tuple(result.items())


@lru_cache(maxsize=settings.ORACLE_CACHE_SIZE)
def _monomial_product(left: Exponents, right: Exponents) -> Tuple[Tuple[Exponents, LaurentPoly], ...]:
    current: PBWDict = {left: ONE}
    r, s, t = right
    for letter in (0,) * r + (1,) * s + (2,) * t:
        following: PBWDict = {}
        for monomial, coefficient in current.items():
            _accumulate(following, _times_letter(monomial, letter), coefficient)
        current = following
    return tuple(current.items())


def pbw_mul(a: PBWDict, b: PBWDict) -> PBWDict:
    """Product of two PBW expansions given as exponent dictionaries"""
    result: PBWDict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            _accumulate(result, _monomial_product(m1, m2), c1 * c2)
    return result


# Generic rewriting: eliminate one inversion at a time, leftmost or rightmost first


def _inversions(letters: Tuple[int, ...]) -> int:
    return sum(1 for i in range(len(letters)) for j in range(i + 1, len(letters)) if letters[i] > letters[j])


@lru_cache(maxsize=settings.ORACLE_CACHE_SIZE)
def _rewrite_word(letters: Tuple[int, ...], leftmost: bool) -> Tuple[Tuple[Exponents, LaurentPoly], ...]:
    positions = [i for i in range(len(letters) - 1) if letters[i] > letters[i + 1]]
    if not positions:
        return (((letters.count(0), letters.count(1), letters.count(2)), ONE),)

    i = positions[0] if leftmost else positions[-1]
    later, earlier = letters[i], letters[i + 1]
    swap, constant = _FLIP_RULES[(later, earlier)]
    swapped = letters[:i] + (earlier, later) + letters[i + 2:]
    shorter = letters[:i] + letters[i + 2:]
    if settings.ASSERT_TERMINATION and not _inversions(swapped) < _inversions(letters):
        raise NonTermination(f"flip at position {i} did not remove an inversion", word=letters)
    result: PBWDict = {}
    _accumulate(result, _rewrite_word(swapped, leftmost), swap)
    _accumulate(result, _rewrite_word(shorter, leftmost), constant)
    return tuple(result.items())


def _word_indices(word: Word) -> Tuple[int, ...]:
    if word.alphabet != Alphabet.U:
        raise AlphabetMismatch("the oracle only normalizes words in x, y, z")
    return tuple(_LETTER_INDEX[g] for g in word.letters)


def normalize_word(word: Word, strategy: RewriteStrategy = RewriteStrategy.INSERTION) -> PBWDict:
    letters = _word_indices(word)
    if strategy == RewriteStrategy.INSERTION:
        return dict(_insert_word(letters))
    return dict(_rewrite_word(letters, strategy == RewriteStrategy.LEFTMOST))


def normalize(p: NCPoly, strategy: RewriteStrategy = RewriteStrategy.INSERTION) -> PBWForm:
    """PBW normal form of a U-alphabet polynomial"""
    if p.alphabet != Alphabet.U:
        raise AlphabetMismatch("normalize expects a polynomial in x, y, z; expand nu-letters first")
    strategy = RewriteStrategy(strategy)
    result: PBWDict = {}
    for word, coefficient in p.terms():
        _accumulate(result, normalize_word(word, strategy).items(), coefficient)
    return PBWForm.from_exponents(result)


# nu/square alphabet -> equitable words

_X, _Y, _Z = (NCPoly.gen(g) for g in _INDEX_LETTER)

_EXPANSIONS: Dict[Gen, NCPoly] = {
    Gen.NX: Q - Q * _Y * _Z,
    Gen.NY: Q - Q * _Z * _X,
    Gen.NZ: Q - Q * _X * _Y,
    Gen.X2: _X * _X,
    Gen.Y2: _Y * _Y,
    Gen.Z2: _Z * _Z,
}


def expand(sym: Gen) -> NCPoly:
    """nu_x = q(1 - yz), nu_y = q(1 - zx), nu_z = q(1 - xy); squares map to doubled letters"""
    sym = Gen(sym)
    if sym.alphabet != Alphabet.A:
        raise AlphabetMismatch(f"{sym.value} is not a nu/square letter")
    return _EXPANSIONS[sym]


def expand_word(word: Word) -> NCPoly:
    result = NCPoly.scalar(1, Alphabet.U)
    for letter in word.letters:
        result = result * expand(letter)
    return result


def expand_all(p: NCPoly) -> NCPoly:
    if p.alphabet == Alphabet.U:
        return p
    return p.map_words(expand_word, Alphabet.U)


def identity_witness(lhs: NCPoly, rhs: NCPoly) -> PBWForm:
    """Normal form of lhs - rhs; zero exactly when the identity holds"""
    return normalize(expand_all(lhs) - expand_all(rhs))


def check_identity(lhs: NCPoly, rhs: NCPoly) -> bool:
    return not identity_witness(lhs, rhs)


def pbw_terms(p: NCPoly) -> List[Tuple[int, int, int, LaurentPoly]]:
    return normalize(expand_all(p)).exponent_terms()


def is_even(form: PBWForm) -> bool:
    """Supported on monomials of even total degree"""
    return all((r + s + t) % 2 == 0 for r, s, t, _ in form.exponent_terms())


def equitable_relations() -> List[Tuple[str, NCPoly]]:
    """q xy - q^-1 yx = q - q^-1 and its cyclic images, moved to one side"""
    unit = Q - Q ** -1
    return [
        ("xy", Q * _X * _Y - Q ** -1 * _Y * _X - unit),
        ("yz", Q * _Y * _Z - Q ** -1 * _Z * _Y - unit),
        ("zx", Q * _Z * _X - Q ** -1 * _X * _Z - unit),
    ]


def cache_info() -> Dict[str, int]:
    return {
        "letter_products": _times_letter.cache_info().currsize,
        "insertions": _insert_word.cache_info().currsize,
        "products": _monomial_product.cache_info().currsize,
        "rewrites": _rewrite_word.cache_info().currsize,
    }
