"""
Expression Parser - Text front end for Laurent polynomials and noncommutative expressions

Grammar (whitespace and '*' both separate items of a term):
    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := item (['*'] item)*
    item   := atom ['^' int]
    atom   := number | 'q' | generator | '(' expr ')'
Generators are x, y, z or nx, ny, nz, x2, y2, z2; parenthesized groups hold scalars only.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from app.core.config import settings
from app.core.exceptions import AlphabetMismatch, ExpressionSyntaxError
from app.services.laurent import Q, LaurentPoly
from app.services.ncpoly import Alphabet, Gen, NCPoly, Word

_TOKEN = re.compile(
    r"(?P<space>\s+)|(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*^()])"
)
_GENERATOR_NAMES = {g.value: g for g in Gen}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


@dataclass(frozen=True)
class Factor:
    gen: Gen
    power: int = 1

    def text(self) -> str:
        return self.gen.value if self.power == 1 else f"{self.gen.value}^{self.power}"


@dataclass(frozen=True)
class Term:
    coeff: LaurentPoly
    factors: Tuple[Factor, ...] = ()


@dataclass(frozen=True)
class ExprAST:
    terms: Tuple[Term, ...]
    alphabet: Alphabet

    def to_ncpoly(self) -> NCPoly:
        total = NCPoly.zero(self.alphabet)
        for term in self.terms:
            letters = tuple(f.gen for f in term.factors for _ in range(f.power))
            total = total + NCPoly.from_word(Word(letters, self.alphabet), term.coeff)
        return total


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(source):
        match = _TOKEN.match(source, position)
        if match is None:
            raise ExpressionSyntaxError(f"unexpected character {source[position]!r}", position, source)
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, source: str, alphabet: Optional[Alphabet]):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0
        self.alphabet = Alphabet(alphabet) if alphabet is not None else None

    # Token helpers

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _error(self, message: str) -> ExpressionSyntaxError:
        token = self._peek()
        position = token.position if token else len(self.source)
        return ExpressionSyntaxError(message, position, self.source)

    def _accept_op(self, *ops: str) -> Optional[Token]:
        token = self._peek()
        if token is not None and token.kind == "op" and token.text in ops:
            self.index += 1
            return token
        return None

    def _starts_item(self) -> bool:
        token = self._peek()
        if token is None:
            return False
        return token.kind in ("number", "name") or (token.kind == "op" and token.text == "(")

    # Grammar

    def parse(self, scalar_only: bool = False) -> List[Term]:
        if not self.tokens:
            raise self._error("empty expression")
        terms = self._sum(scalar_only)
        if self._peek() is not None:
            raise self._error(f"unexpected {self._peek().text!r}")
        return terms

    def _sum(self, scalar_only: bool) -> List[Term]:
        sign = -1 if self._accept_op("+", "-") and self.tokens[self.index - 1].text == "-" else 1
        terms = [self._term(sign, scalar_only)]
        while True:
            op = self._accept_op("+", "-")
            if op is None:
                return terms
            terms.append(self._term(-1 if op.text == "-" else 1, scalar_only))

    def _term(self, sign: int, scalar_only: bool) -> Term:
        if not self._starts_item():
            raise self._error("expected a number, q, a generator or '('")
        start = self._peek().position
        coefficient = LaurentPoly.constant(sign)
        factors: List[Factor] = []
        while True:
            coefficient = self._item(coefficient, factors, scalar_only)
            if self._accept_op("*"):
                if not self._starts_item():
                    raise self._error("expected an item after '*'")
                continue
            if not self._starts_item():
                length = sum(f.power for f in factors)
                if length > settings.MAX_TERM_LENGTH:
                    raise ExpressionSyntaxError(
                        f"term has {length} letters, more than {settings.MAX_TERM_LENGTH}", start, self.source
                    )
                return Term(coefficient, tuple(factors))

    def _exponent(self, allow_negative: bool, limit: Optional[int] = None) -> Optional[int]:
        if not self._accept_op("^"):
            return None
        negative = self._accept_op("-") is not None
        if negative and not allow_negative:
            raise self._error("negative exponents are only allowed on q and numbers")
        token = self._peek()
        if token is None or token.kind != "number" or "/" in token.text:
            raise self._error("expected an integer exponent")
        self.index += 1
        limit = settings.MAX_SCALAR_EXPONENT if limit is None else limit
        if int(token.text) > limit:
            raise ExpressionSyntaxError(f"exponent {token.text} exceeds {limit}", token.position, self.source)
        return -int(token.text) if negative else int(token.text)

    def _item(self, coefficient: LaurentPoly, factors: List[Factor], scalar_only: bool) -> LaurentPoly:
        token = self._peek()
        self.index += 1

        if token.kind == "number":
            try:
                value = Fraction(token.text)
            except ZeroDivisionError:
                raise ExpressionSyntaxError("zero denominator", token.position, self.source)
            power = self._exponent(allow_negative=True)
            if power is not None:
                if power < 0 and value == 0:
                    raise ExpressionSyntaxError("zero to a negative power", token.position, self.source)
                value = value ** power
            return coefficient * value

        if token.kind == "op":  # '('
            inner = sum((t.coeff for t in self._sum(scalar_only=True)), LaurentPoly.zero())
            if not self._accept_op(")"):
                raise self._error("expected ')'")
            power = self._exponent(allow_negative=True)
            if power is not None:
                inner = inner ** power
            return coefficient * inner

        name = token.text.lower()
        if name == "q":
            power = self._exponent(allow_negative=True)
            return coefficient * (Q ** (1 if power is None else power))

        gen = _GENERATOR_NAMES.get(name)
        if gen is None:
            raise ExpressionSyntaxError(f"unknown symbol {token.text!r}", token.position, self.source)
        if scalar_only:
            raise ExpressionSyntaxError(
                f"generator {token.text!r} inside a scalar group", token.position, self.source
            )
        if self.alphabet is None:
            self.alphabet = gen.alphabet
        elif gen.alphabet != self.alphabet:
            raise AlphabetMismatch(
                f"{token.text!r} at position {token.position} is not in the "
                f"{self.alphabet.value}-alphabet",
                position=token.position,
            )
        power = self._exponent(allow_negative=False, limit=settings.MAX_GENERATOR_POWER)
        if power is not None and power < 1:
            raise ExpressionSyntaxError("generator powers must be positive", token.position, self.source)
        factors.append(Factor(gen, power or 1))
        return coefficient


def parse_ast(source: str, alphabet: Optional[Alphabet] = None) -> ExprAST:
    """Parse into terms; with alphabet None the first generator decides it (U when there is none)"""
    parser = _Parser(source, alphabet)
    terms = parser.parse()
    return ExprAST(tuple(terms), parser.alphabet or Alphabet.U)


def parse_expr(source: str, alphabet: Optional[Alphabet] = None) -> NCPoly:
    return parse_ast(source, alphabet).to_ncpoly()


def parse_laurent(source) -> LaurentPoly:
    """Laurent polynomial from text; plain ints pass through"""
    if isinstance(source, int) and not isinstance(source, bool):
        return LaurentPoly.constant(source)
    terms = _Parser(str(source), None).parse(scalar_only=True)
    return sum((t.coeff for t in terms), LaurentPoly.zero())


def format_ast(ast: ExprAST) -> str:
    """Inverse of parse_ast: every coefficient parenthesized, factors kept as written"""
    if not ast.terms:
        return "(0)"
    pieces = []
    for term in ast.terms:
        text = f"({term.coeff.compact()})"
        if term.factors:
            text += "*" + "*".join(f.text() for f in term.factors)
        pieces.append(text)
    return " + ".join(pieces)
