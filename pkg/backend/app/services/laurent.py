"""
Laurent Polynomials - Exact arithmetic in Q[q, q^-1]
Sparse immutable polynomials with rational coefficients, exact division and evaluation
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import sympy

from app.core.exceptions import DivisionByZero, InvalidQValue, NotDivisible

Coefficient = Union[int, Fraction]
Q_SYMBOL = sympy.Symbol("q")


def _normalize_coefficient(value) -> Coefficient:
    if isinstance(value, bool) or not isinstance(value, Rational):
        raise TypeError(f"Laurent coefficients must be exact rationals, got {type(value).__name__}")
    value = Fraction(value)
    if value.denominator == 1:
        return int(value.numerator)
    return value


def _monomial_text(coefficient: Coefficient, exponent: int) -> str:
    """Text for |coefficient| * q^exponent; the caller handles the sign"""
    magnitude = abs(coefficient)
    if exponent == 0:
        return str(magnitude)
    power = "q" if exponent == 1 else f"q^{exponent}"
    if magnitude == 1:
        return power
    return f"{magnitude}*{power}"


class LaurentPoly:
    """Exact Laurent polynomial in q; stored as exponent -> nonzero rational"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, Coefficient]] = None):
        cleaned: Dict[int, Coefficient] = {}
        if terms:
            for exponent, coefficient in terms.items():
                coefficient = _normalize_coefficient(coefficient)
                if coefficient:
                    cleaned[int(exponent)] = coefficient
        self._terms = cleaned
        self._hash: Optional[int] = None

    # Construction

    @classmethod
    def _from_clean(cls, terms: Dict[int, Coefficient]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._terms = {k: v for k, v in terms.items() if v}
        poly._hash = None
        return poly

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._from_clean({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._from_clean({0: 1})

    @classmethod
    def constant(cls, value: Coefficient) -> "LaurentPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, coefficient: Coefficient = 1) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @classmethod
    def coerce(cls, value) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        return cls.constant(value)

    # Inspection

    def items(self) -> Iterator[Tuple[int, Coefficient]]:
        """(exponent, coefficient) pairs in ascending exponent order"""
        return iter(sorted(self._terms.items()))

    def coefficient(self, exponent: int) -> Coefficient:
        return self._terms.get(exponent, 0)

    @property
    def degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    @property
    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # Arithmetic

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, int, Fraction)):
            return NotImplemented
        other = LaurentPoly.coerce(other)
        result = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            result[exponent] = result.get(exponent, 0) + coefficient
        return LaurentPoly._from_clean({k: _normalize_coefficient(v) for k, v in result.items()})

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._from_clean({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, int, Fraction)):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._from_clean(
                {k: _normalize_coefficient(v * other) for k, v in self._terms.items()}
            )
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: Dict[int, Coefficient] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly._from_clean({k: _normalize_coefficient(v) for k, v in result.items()})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            if not self.is_monomial():
                raise NotDivisible(f"{self} is not a unit in the Laurent ring")
            ((k, c),) = self._terms.items()
            return LaurentPoly.monomial(-k * (-exponent), Fraction(1) / Fraction(c) ** (-exponent))
        result = LaurentPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def div_exact(self, divisor) -> "LaurentPoly":
        """Quotient c with divisor * c == self; raises when the Laurent ring has none"""
        divisor = LaurentPoly.coerce(divisor)
        if not divisor:
            raise DivisionByZero("division by the zero Laurent polynomial")
        if not self:
            return LaurentPoly.zero()

        shift_a, shift_b = self.valuation, divisor.valuation
        remainder: Dict[int, Fraction] = {k - shift_a: Fraction(v) for k, v in self._terms.items()}
        denominator = {k - shift_b: Fraction(v) for k, v in divisor._terms.items()}
        top = max(denominator)
        lead = denominator[top]

        quotient: Dict[int, Fraction] = {}
        while remainder and max(remainder) >= top:
            k = max(remainder)
            factor = remainder[k] / lead
            quotient[k - top] = factor
            for e, c in denominator.items():
                updated = remainder.get(e + k - top, 0) - factor * c
                if updated:
                    remainder[e + k - top] = updated
                else:
                    remainder.pop(e + k - top, None)

        if remainder:
            raise NotDivisible(f"{self.compact()} is not divisible by {divisor.compact()}",
                               dividend=self, divisor=divisor)
        return LaurentPoly({k + shift_a - shift_b: v for k, v in quotient.items()})

    def evaluate(self, at: Union["QValue", Rational]) -> Fraction:
        value = at.value if isinstance(at, QValue) else Fraction(at)
        if not value and any(k < 0 for k in self._terms):
            raise DivisionByZero("negative powers of q at q = 0")
        total = Fraction(0)
        for exponent, coefficient in self._terms.items():
            total += coefficient * value ** exponent
        return total

    # Comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == LaurentPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._terms.get(0, 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # Text

    def signed_parts(self) -> Iterable[Tuple[bool, str]]:
        for exponent in sorted(self._terms, reverse=True):
            coefficient = self._terms[exponent]
            yield coefficient < 0, _monomial_text(coefficient, exponent)

    def __str__(self) -> str:
        """Descending exponents with spaced signs, e.g. 'q^2 - 1 + 1/2*q^-3'"""
        if not self._terms:
            return "0"
        pieces = []
        for index, (negative, text) in enumerate(self.signed_parts()):
            if index == 0:
                pieces.append(f"-{text}" if negative else text)
            else:
                pieces.append(f" - {text}" if negative else f" + {text}")
        return "".join(pieces)

    def compact(self) -> str:
        """Same as str() without spaces; used inside parentheses"""
        return str(self).replace(" ", "")

    def __repr__(self) -> str:
        return f"LaurentPoly({self.compact()!r})"

    # sympy bridge

    def to_sympy(self, symbol: sympy.Symbol = Q_SYMBOL) -> sympy.Expr:
        return sympy.Add(*[
            sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * symbol ** k
            for k, c in self._terms.items()
        ])

    @classmethod
    def from_sympy(cls, expr, symbol: sympy.Symbol = Q_SYMBOL) -> "LaurentPoly":
        """Convert an expression whose denominator is a monomial in q"""
        numerator, denominator = sympy.fraction(sympy.cancel(sympy.sympify(expr)))
        num_poly = sympy.Poly(numerator, symbol)
        den_poly = sympy.Poly(denominator, symbol)
        if len(den_poly.terms()) != 1:
            raise NotDivisible(f"{expr} is not a Laurent polynomial in {symbol}")
        ((den_exp,), den_coeff) = den_poly.terms()[0]
        den_coeff = Fraction(int(den_coeff.p), int(den_coeff.q))
        return cls({
            exp - den_exp: Fraction(int(c.p), int(c.q)) / den_coeff
            for (exp,), c in num_poly.terms()
        })


Q = LaurentPoly.monomial(1)
Q_INV = LaurentPoly.monomial(-1)


@dataclass(frozen=True)
class QValue:
    """Rational evaluation point for q; excludes 0 and the square roots of 1"""

    value: Fraction

    def __post_init__(self):
        try:
            value = Fraction(self.value)
        except (TypeError, ValueError) as e:
            raise InvalidQValue(f"not a rational number: {self.value!r}") from e
        if value in (0, 1, -1):
            raise InvalidQValue(f"q = {value} violates q != 0 and q^2 != 1")
        object.__setattr__(self, "value", value)

    @classmethod
    def parse(cls, text: str) -> "QValue":
        try:
            return cls(Fraction(text.strip()))
        except ValueError as e:
            raise InvalidQValue(f"not a rational number: {text!r}") from e

    def __str__(self) -> str:
        return str(self.value)


class ArithOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: ArithOp) -> LaurentPoly:
    op = ArithOp(op)
    if op == ArithOp.ADD:
        return a + b
    if op == ArithOp.SUB:
        return a - b
    return a * b


def lp_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return LaurentPoly.coerce(a).div_exact(b)


def lp_eval(a: LaurentPoly, at: QValue) -> Fraction:
    return LaurentPoly.coerce(a).evaluate(at)
