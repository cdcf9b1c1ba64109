"""
Noncommutative Polynomials - Words over a generator alphabet and their Laurent-linear combinations
Shared term algebra for the equitable generators and the nu/square alphabet
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from app.core.exceptions import AlphabetMismatch
from app.services.laurent import LaurentPoly


class Alphabet(str, Enum):
    U = "U"
    A = "A"


class Gen(str, Enum):
    """Generator symbols; the value is the text name used by the parser and printer"""
    X = "x"
    Y = "y"
    Z = "z"
    NX = "nx"
    NY = "ny"
    NZ = "nz"
    X2 = "x2"
    Y2 = "y2"
    Z2 = "z2"

    @property
    def alphabet(self) -> Alphabet:
        return _ALPHABET_OF[self]

    @property
    def rank(self) -> int:
        """Position in the canonical order of its alphabet"""
        return _RANK_OF[self]

    @classmethod
    def from_name(cls, name: str) -> "Gen":
        return cls(name.lower())


U_LETTERS: Tuple[Gen, ...] = (Gen.X, Gen.Y, Gen.Z)
A_LETTERS: Tuple[Gen, ...] = (Gen.NX, Gen.NY, Gen.NZ, Gen.X2, Gen.Y2, Gen.Z2)

_ALPHABET_OF = {**{g: Alphabet.U for g in U_LETTERS}, **{g: Alphabet.A for g in A_LETTERS}}
_RANK_OF = {**{g: i for i, g in enumerate(U_LETTERS)}, **{g: i for i, g in enumerate(A_LETTERS)}}


def letters_of(alphabet: Alphabet) -> Tuple[Gen, ...]:
    return U_LETTERS if Alphabet(alphabet) == Alphabet.U else A_LETTERS


@dataclass(frozen=True)
class Word:
    letters: Tuple[Gen, ...]
    alphabet: Alphabet

    def __post_init__(self):
        for letter in self.letters:
            if letter.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"letter {letter.value} does not belong to the {self.alphabet.value}-alphabet"
                )

    @classmethod
    def of(cls, *letters: Gen, alphabet: Optional[Alphabet] = None) -> "Word":
        if alphabet is None:
            if not letters:
                raise ValueError("the empty word needs an explicit alphabet")
            alphabet = letters[0].alphabet
        return cls(tuple(letters), Alphabet(alphabet))

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Word":
        return cls((), Alphabet(alphabet))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch("cannot concatenate words over different alphabets")
        return Word(self.letters + other.letters, self.alphabet)

    def __pow__(self, exponent: int) -> "Word":
        return Word(self.letters * exponent, self.alphabet)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return len(self.letters), tuple(g.rank for g in self.letters)

    def text(self) -> str:
        """Letters joined by '*', runs written as powers: 'x^2*y'"""
        if not self.letters:
            return "1"
        pieces: List[str] = []
        run_letter, run_length = self.letters[0], 0
        for letter in self.letters + (None,):
            if letter == run_letter:
                run_length += 1
                continue
            pieces.append(run_letter.value if run_length == 1 else f"{run_letter.value}^{run_length}")
            run_letter, run_length = letter, 1
        return "*".join(pieces)

    def __str__(self) -> str:
        return self.text()


Scalar = Union[LaurentPoly, int, Fraction]


class NCPoly:
    """Finite sum of words with nonzero Laurent coefficients, tagged with one alphabet"""

    __slots__ = ("_terms", "alphabet")

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None, alphabet: Alphabet = Alphabet.U):
        self.alphabet = Alphabet(alphabet)
        cleaned: Dict[Word, LaurentPoly] = {}
        for word, coefficient in (terms or {}).items():
            if word.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"word {word} is over the {word.alphabet.value}-alphabet, "
                    f"expected {self.alphabet.value}"
                )
            coefficient = LaurentPoly.coerce(coefficient)
            if coefficient:
                cleaned[word] = cleaned.get(word, LaurentPoly.zero()) + coefficient
        self._terms = {w: c for w, c in cleaned.items() if c}

    @classmethod
    def _from_clean(cls, terms: Dict[Word, LaurentPoly], alphabet: Alphabet) -> "NCPoly":
        poly = cls.__new__(cls)
        poly.alphabet = alphabet
        poly._terms = {w: c for w, c in terms.items() if c}
        return poly

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "NCPoly":
        return cls._from_clean({}, Alphabet(alphabet))

    @classmethod
    def scalar(cls, coefficient: Scalar, alphabet: Alphabet) -> "NCPoly":
        return cls({Word.empty(alphabet): coefficient}, alphabet)

    @classmethod
    def from_word(cls, word: Word, coefficient: Scalar = 1) -> "NCPoly":
        return cls({word: coefficient}, word.alphabet)

    @classmethod
    def gen(cls, letter: Gen) -> "NCPoly":
        return cls.from_word(Word.of(letter))

    # Inspection

    def terms(self) -> List[Tuple[Word, LaurentPoly]]:
        """Terms in canonical order: by length, then lexicographic"""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def coefficient(self, word: Word) -> LaurentPoly:
        return self._terms.get(word, LaurentPoly.zero())

    def words(self) -> List[Word]:
        return [w for w, _ in self.terms()]

    def is_scalar(self) -> bool:
        return all(len(w) == 0 for w in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # Arithmetic

    def _coerce(self, other) -> Optional["NCPoly"]:
        if isinstance(other, NCPoly):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"cannot combine {self.alphabet.value}-alphabet and "
                    f"{other.alphabet.value}-alphabet polynomials"
                )
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return NCPoly.scalar(other, self.alphabet)
        return None

    def __add__(self, other) -> "NCPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        result = dict(self._terms)
        for word, coefficient in other._terms.items():
            result[word] = result[word] + coefficient if word in result else coefficient
        return NCPoly._from_clean(result, self.alphabet)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._from_clean({w: -c for w, c in self._terms.items()}, self.alphabet)

    def __sub__(self, other) -> "NCPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "NCPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, factor: Scalar) -> "NCPoly":
        factor = LaurentPoly.coerce(factor)
        return NCPoly._from_clean({w: c * factor for w, c in self._terms.items()}, self.alphabet)

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        result: Dict[Word, LaurentPoly] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                word = Word(w1.letters + w2.letters, self.alphabet)
                product = c1 * c2
                result[word] = result[word] + product if word in result else product
        return NCPoly._from_clean(result, self.alphabet)

    def __rmul__(self, other) -> "NCPoly":
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "NCPoly":
        if exponent < 0:
            raise ValueError("negative powers of noncommutative polynomials are undefined")
        result = NCPoly.scalar(1, self.alphabet)
        for _ in range(exponent):
            result = result * self
        return result

    def map_words(self, image: Callable[[Word], "NCPoly"], alphabet: Alphabet) -> "NCPoly":
        """Linear extension of a word -> polynomial map"""
        total = NCPoly.zero(alphabet)
        for word, coefficient in self._terms.items():
            total = total + image(word).scale(coefficient)
        return total

    # Comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPoly):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch("cannot compare polynomials over different alphabets")
            return self._terms == other._terms
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self._terms == NCPoly.scalar(other, self.alphabet)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.alphabet, frozenset(self._terms.items())))

    # Text

    def display_terms(self) -> List[Tuple[Word, LaurentPoly]]:
        """Printing order: longer words first, lexicographic within a length"""
        return sorted(self._terms.items(), key=lambda item: (-len(item[0]), item[0].sort_key()[1]))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[Tuple[bool, str]] = []
        for word, coefficient in self.display_terms():
            if not word.letters:
                parts.extend(coefficient.signed_parts())
            elif coefficient == 1:
                parts.append((False, word.text()))
            elif coefficient == -1:
                parts.append((True, word.text()))
            elif coefficient.is_monomial():
                ((negative, text),) = coefficient.signed_parts()
                parts.append((negative, f"{text}*{word.text()}"))
            else:
                parts.append((False, f"({coefficient.compact()})*{word.text()}"))
        pieces = []
        for index, (negative, text) in enumerate(parts):
            if index == 0:
                pieces.append(f"-{text}" if negative else text)
            else:
                pieces.append(f" - {text}" if negative else f" + {text}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"NCPoly[{self.alphabet.value}]({str(self)!r})"

    def to_json(self) -> List[Dict[str, str]]:
        return [{"word": w.text(), "coeff": str(c)} for w, c in self.terms()]


def gens(alphabet: Alphabet) -> Tuple[NCPoly, ...]:
    return tuple(NCPoly.gen(g) for g in letters_of(alphabet))


class NCOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    SCALE = "scale"


def nc_arith(a: NCPoly, b: Union[NCPoly, Scalar], op: NCOp) -> NCPoly:
    op = NCOp(op)
    if op == NCOp.SCALE:
        return a.scale(b)
    if not isinstance(b, NCPoly) or a.alphabet != b.alphabet:
        raise AlphabetMismatch("nc_arith needs two polynomials over the same alphabet")
    if op == NCOp.ADD:
        return a + b
    if op == NCOp.SUB:
        return a - b
    return a * b


def nc_eq(a: NCPoly, b: NCPoly) -> bool:
    return a == b


def nc_sum(polys: Iterable[NCPoly], alphabet: Alphabet) -> NCPoly:
    total = NCPoly.zero(alphabet)
    for poly in polys:
        total = total + poly
    return total
