"""
Integer polynomials in q (class polynomials) and in several parameters q0, q1, ... (Hecke character tables).

Both wrap sympy Poly objects over ZZ and are immutable. The zero polynomial has degree NEG_INFINITY
and leading coefficient 1.
"""
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import Expr, Poly, ZZ, Symbol, factor, sstr, symbols, sympify
from sympy.core.sympify import SympifyError
from sympy.polys.polyerrors import BasePolynomialError

from errors import DomainError

NEG_INFINITY = float("-inf")

q = Symbol("q")


def format_degree(degree) -> str:
    return "-inf" if degree == NEG_INFINITY else str(degree)


class PolyZq:
    __slots__ = ("poly",)

    def __init__(self, value=0):
        if isinstance(value, PolyZq):
            poly = value.poly
        elif isinstance(value, Poly):
            poly = Poly(value.as_expr(), q, domain=ZZ)
        else:
            poly = Poly(value, q, domain=ZZ)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, key, value):
        raise AttributeError("PolyZq is immutable")

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[int]) -> "PolyZq":
        """Coefficients in ascending degree."""
        return cls(Poly.from_list(list(reversed([int(c) for c in coefficients])) or [0], q, domain=ZZ))

    @classmethod
    def zero(cls) -> "PolyZq":
        return cls(0)

    @classmethod
    def one(cls) -> "PolyZq":
        return cls(1)

    @classmethod
    def q_power(cls, k: int) -> "PolyZq":
        return cls(q ** k)

    @classmethod
    def q_minus_one(cls) -> "PolyZq":
        return cls(q - 1)

    @classmethod
    def parse(cls, text: str) -> "PolyZq":
        try:
            return cls(sympify(text, locals={"q": q}))
        except (SympifyError, BasePolynomialError, TypeError, ValueError) as e:
            raise DomainError(f"'{text}' is not an integer polynomial in q: {e}")

    @staticmethod
    def _coerce(other) -> "PolyZq":
        return other if isinstance(other, PolyZq) else PolyZq(other)

    def __add__(self, other):
        return PolyZq(self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return PolyZq(self.poly - self._coerce(other).poly)

    def __rsub__(self, other):
        return PolyZq(self._coerce(other).poly - self.poly)

    def __neg__(self):
        return PolyZq(-self.poly)

    def __mul__(self, other):
        return PolyZq(self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        return PolyZq(self.poly ** exponent)

    def __eq__(self, other):
        if isinstance(other, (int, PolyZq)):
            return self.coefficients() == self._coerce(other).coefficients()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coefficients()))

    def __bool__(self):
        return not self.poly.is_zero

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    @property
    def degree(self) -> int | float:
        return NEG_INFINITY if self.poly.is_zero else self.poly.degree()

    @property
    def leading_coefficient(self) -> int:
        return 1 if self.poly.is_zero else int(self.poly.LC())

    def coefficients(self) -> list[int]:
        """Ascending degree, no trailing zeros; [] for zero."""
        if self.poly.is_zero:
            return []
        return [int(c) for c in reversed(self.poly.all_coeffs())]

    def coefficient(self, k: int) -> int:
        coefficients = self.coefficients()
        return coefficients[k] if 0 <= k < len(coefficients) else 0

    def evaluate(self, value) -> int | Fraction:
        result = Fraction(0)
        for c in reversed(self.coefficients()):
            result = result * value + c
        return int(result) if result.denominator == 1 else result

    def q_minus_one_coefficients(self) -> list[int]:
        """c_k with self = sum c_k (q - 1)^k."""
        if self.poly.is_zero:
            return []
        return [int(c) for c in reversed(self.poly.shift(1).all_coeffs())]

    def is_q_minus_one_positive(self) -> bool:
        return all(c >= 0 for c in self.q_minus_one_coefficients())

    def as_expr(self) -> Expr:
        return self.poly.as_expr()

    def __str__(self):
        return sstr(self.poly.as_expr(), order="lex")

    def __repr__(self):
        return f"PolyZq({self})"


def parameters(count: int) -> tuple[Symbol, ...]:
    return symbols(f"q0:{count}") if count > 1 else (q,)


class MPoly:
    """Integer polynomial in a fixed tuple of parameter symbols; graded-lex canonical form."""
    __slots__ = ("poly",)

    def __init__(self, value, gens: Sequence[Symbol]):
        gens = tuple(gens)
        if isinstance(value, MPoly):
            value = value.as_expr()
        poly = Poly(sympify(value), *gens, domain=ZZ)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, key, value):
        raise AttributeError("MPoly is immutable")

    @property
    def gens(self) -> tuple[Symbol, ...]:
        return self.poly.gens

    def _coerce(self, other) -> "MPoly":
        return other if isinstance(other, MPoly) else MPoly(other, self.gens)

    def __add__(self, other):
        return MPoly(self.poly + self._coerce(other).poly, self.gens)

    __radd__ = __add__

    def __sub__(self, other):
        return MPoly(self.poly - self._coerce(other).poly, self.gens)

    def __neg__(self):
        return MPoly(-self.poly, self.gens)

    def __mul__(self, other):
        return MPoly(self.poly * self._coerce(other).poly, self.gens)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, MPoly)):
            return (self.poly - self._coerce(other).poly).is_zero
        return NotImplemented

    def __hash__(self):
        return hash(self.canonical())

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def as_expr(self) -> Expr:
        return self.poly.as_expr()

    def substitute(self, values: dict) -> Expr:
        return self.poly.as_expr().subs(values)

    def canonical(self) -> str:
        return sstr(self.poly.as_expr(), order="grlex")

    def factored(self) -> str:
        return sstr(factor(self.poly.as_expr()))

    def __str__(self):
        return self.canonical()

    def __repr__(self):
        return f"MPoly({self.canonical()})"


def total(polys: Iterable[PolyZq]) -> PolyZq:
    result = PolyZq.zero()
    for p in polys:
        result = result + p
    return result
