"""
Exact coefficient arithmetic for the skein engine.

``HalfLaurent`` is a Laurent polynomial in ``a`` and ``q^(1/2)`` with integer
coefficients. Exponents of ``q`` are stored in half-units, so ``q^(1/2)`` has
exponent 1 and ``q`` has exponent 2.

``SkeinValue`` is the fraction field over ``HalfLaurent``. Values are kept in a
canonical reduced form so equal values have identical representations:

- numerator and denominator share no non-unit factor (gcd computed with sympy);
- the denominator's exponents are balanced (min + max is 0 or 1 in each variable);
- the denominator's leading coefficient is positive.

``FormalPolynomial`` is a polynomial in one formal variable (``z`` or the unknot
``○``) with ``HalfLaurent`` coefficients.
"""

import logging
import math
import re
from functools import reduce
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Tuple, Union

import sympy as sp
from sympy.polys.polyerrors import ExactQuotientFailed

from settings.config import settings
from utils.exceptions import NonDivisibleError, ParseError, SkeinZeroDivisionError

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

Exponent = Tuple[int, int]

_A_SYMBOL, _T_SYMBOL = sp.symbols("a t")


class HalfLaurent:
    """Immutable Laurent polynomial in (a, q^(1/2)) with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, int]] = None):
        clean: Dict[Exponent, int] = {}
        for (e_a, e_q), coeff in (terms or {}).items():
            coeff = int(coeff)
            if coeff:
                clean[(int(e_a), int(e_q))] = coeff
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def monomial(cls, e_a: int = 0, e_q: int = 0, coeff: int = 1) -> "HalfLaurent":
        return cls({(e_a, e_q): coeff})

    @classmethod
    def constant(cls, value: int) -> "HalfLaurent":
        return cls({(0, 0): value})

    @classmethod
    def parse(cls, text: str) -> "HalfLaurent":
        return _ExpressionParser(text).parse_polynomial()

    @property
    def terms(self) -> Mapping[Exponent, int]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0, 0), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_exponents(self) -> Exponent:
        return (min(e_a for e_a, _ in self._terms), min(e_q for _, e_q in self._terms))

    def max_exponents(self) -> Exponent:
        return (max(e_a for e_a, _ in self._terms), max(e_q for _, e_q in self._terms))

    def leading_term(self) -> Tuple[Exponent, int]:
        key = max(self._terms)
        return key, self._terms[key]

    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for c in self._terms.values()), 0)

    def depends_on_a(self) -> bool:
        return any(e_a != 0 for e_a, _ in self._terms)

    def shift(self, e_a: int, e_q: int) -> "HalfLaurent":
        return HalfLaurent({(ka + e_a, kq + e_q): c for (ka, kq), c in self._terms.items()})

    def invert_q(self) -> "HalfLaurent":
        """Apply q -> q^(-1)."""
        return HalfLaurent({(ka, -kq): c for (ka, kq), c in self._terms.items()})

    def _divide_content(self, divisor: int) -> "HalfLaurent":
        return HalfLaurent({key: c // divisor for key, c in self._terms.items()})

    def __add__(self, other):
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, 0) + coeff
        return HalfLaurent(terms)

    __radd__ = __add__

    def __neg__(self) -> "HalfLaurent":
        return HalfLaurent({key: -c for key, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        terms: Dict[Exponent, int] = {}
        for (a1, q1), c1 in self._terms.items():
            for (a2, q2), c2 in other._terms.items():
                key = (a1 + a2, q1 + q2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return HalfLaurent(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "HalfLaurent":
        if exponent < 0:
            if not self.is_monomial():
                raise NonDivisibleError(f"Cannot invert the non-monomial {self}")
            (e_a, e_q), coeff = self.leading_term()
            if abs(coeff) != 1:
                raise NonDivisibleError(f"Cannot invert {self} over the integers")
            return HalfLaurent.monomial(e_a * exponent, e_q * exponent, coeff ** (-exponent))
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        return render_laurent(self)

    def __repr__(self) -> str:
        return f"HalfLaurent('{render_laurent(self)}')"


def _coerce_laurent(value) -> Optional[HalfLaurent]:
    if isinstance(value, HalfLaurent):
        return value
    if isinstance(value, int):
        return HalfLaurent.constant(value)
    return None


ZERO = HalfLaurent()
ONE = HalfLaurent.constant(1)
A = HalfLaurent.monomial(1, 0)
A_INV = HalfLaurent.monomial(-1, 0)
Q_HALF = HalfLaurent.monomial(0, 1)
Q_HALF_INV = HalfLaurent.monomial(0, -1)
Q = HalfLaurent.monomial(0, 2)
Z = Q_HALF - Q_HALF_INV


def add(x: HalfLaurent, y: HalfLaurent) -> HalfLaurent:
    return x + y


def mul(x: HalfLaurent, y: HalfLaurent) -> HalfLaurent:
    return x * y


def _to_poly(x: HalfLaurent) -> Tuple[sp.Poly, Exponent]:
    """Shift ``x`` into a genuine polynomial; return it with the shift undone by ``_from_poly``."""
    shift = x.min_exponents()
    rep = {(e_a - shift[0], e_q - shift[1]): c for (e_a, e_q), c in x.items()}
    return sp.Poly.from_dict(rep, _A_SYMBOL, _T_SYMBOL, domain=sp.ZZ), shift


def _from_poly(poly: sp.Poly, shift: Exponent) -> HalfLaurent:
    return HalfLaurent(
        {(e_a + shift[0], e_q + shift[1]): int(c) for (e_a, e_q), c in poly.as_dict().items()}
    )


def exact_div(x: HalfLaurent, y: HalfLaurent) -> HalfLaurent:
    """
    Divide in the Laurent ring.

    Raises:
        SkeinZeroDivisionError: if ``y`` is zero
        NonDivisibleError: if ``y`` does not divide ``x``
    """
    if y.is_zero():
        raise SkeinZeroDivisionError("Division by the zero polynomial")
    if x.is_zero():
        return ZERO
    if y.is_monomial():
        (e_a, e_q), coeff = y.leading_term()
        if any(c % coeff for _, c in x.items()):
            raise NonDivisibleError(f"{y} does not divide {x}")
        return HalfLaurent({(ka - e_a, kq - e_q): c // coeff for (ka, kq), c in x.items()})
    px, sx = _to_poly(x)
    py, sy = _to_poly(y)
    try:
        quotient = px.exquo(py)
    except ExactQuotientFailed:
        raise NonDivisibleError(f"{y} does not divide {x}")
    return _from_poly(quotient, (sx[0] - sy[0], sx[1] - sy[1]))


def _balance_shift(low: int, high: int) -> int:
    return -((low + high) // 2)


def _canonical_pair(num: HalfLaurent, den: HalfLaurent) -> Tuple[HalfLaurent, HalfLaurent]:
    if den.is_zero():
        raise SkeinZeroDivisionError("Denominator of a skein value is zero")
    if num.is_zero():
        return ZERO, ONE
    if den.is_monomial():
        (e_a, e_q), coeff = den.leading_term()
        num = num.shift(-e_a, -e_q)
        common = math.gcd(num.content(), abs(coeff))
        if coeff < 0:
            num = -num
        return num._divide_content(common), HalfLaurent.constant(abs(coeff) // common)

    p_num, s_num = _to_poly(num)
    p_den, s_den = _to_poly(den)
    common = p_num.gcd(p_den)
    if common.total_degree() > 0 or abs(common.LC()) != 1:
        p_num = p_num.exquo(common)
        p_den = p_den.exquo(common)
    num = _from_poly(p_num, s_num)
    den = _from_poly(p_den, s_den)
    if den.is_monomial():
        return _canonical_pair(num, den)

    (low_a, low_q), (high_a, high_q) = den.min_exponents(), den.max_exponents()
    shift_a, shift_q = _balance_shift(low_a, high_a), _balance_shift(low_q, high_q)
    num, den = num.shift(shift_a, shift_q), den.shift(shift_a, shift_q)
    if den.leading_term()[1] < 0:
        num, den = -num, -den
    return num, den


ScalarLike = Union["SkeinValue", HalfLaurent, int]


class SkeinValue:
    """Element of the localized scalar ring: a reduced ratio of HalfLaurent values."""

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator: Union[HalfLaurent, int], denominator: Union[HalfLaurent, int] = 1):
        num = _coerce_laurent(numerator)
        den = _coerce_laurent(denominator)
        if num is None or den is None:
            raise TypeError("SkeinValue expects HalfLaurent or int parts")
        self.numerator, self.denominator = _canonical_pair(num, den)
        self._hash: Optional[int] = None

    @classmethod
    def zero(cls) -> "SkeinValue":
        return cls(ZERO)

    @classmethod
    def one(cls) -> "SkeinValue":
        return cls(ONE)

    @classmethod
    def rational(cls, numerator: int, denominator: int = 1) -> "SkeinValue":
        return cls(HalfLaurent.constant(numerator), HalfLaurent.constant(denominator))

    @classmethod
    def parse(cls, text: str) -> "SkeinValue":
        return _ExpressionParser(text).parse_value()

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_one(self) -> bool:
        return self.numerator == ONE and self.denominator == ONE

    def is_constant(self) -> bool:
        return self.numerator.is_constant() and self.denominator.is_constant()

    def depends_on_a(self) -> bool:
        return self.numerator.depends_on_a() or self.denominator.depends_on_a()

    def invert_q(self) -> "SkeinValue":
        return SkeinValue(self.numerator.invert_q(), self.denominator.invert_q())

    def __add__(self, other):
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        if self.denominator == other.denominator:
            return SkeinValue(self.numerator + other.numerator, self.denominator)
        return SkeinValue(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "SkeinValue":
        return SkeinValue(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return SkeinValue.zero()
        return SkeinValue(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise SkeinZeroDivisionError(f"Division of {self} by zero")
        return SkeinValue(self.numerator * other.denominator, self.denominator * other.numerator)

    def __rtruediv__(self, other):
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "SkeinValue":
        if exponent < 0:
            if self.is_zero():
                raise SkeinZeroDivisionError("Negative power of zero")
            return SkeinValue(self.denominator ** (-exponent), self.numerator ** (-exponent))
        return SkeinValue(self.numerator ** exponent, self.denominator ** exponent)

    def __eq__(self, other) -> bool:
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.numerator, self.denominator))
        return self._hash

    def __str__(self) -> str:
        return render_value(self)

    def __repr__(self) -> str:
        return f"SkeinValue('{render_value(self)}')"


def _coerce_value(value) -> Optional[SkeinValue]:
    if isinstance(value, SkeinValue):
        return value
    if isinstance(value, (HalfLaurent, int)):
        return SkeinValue(value)
    return None


def value_arith(operation: str, x: ScalarLike, y: ScalarLike) -> SkeinValue:
    """Field arithmetic on skein values; ``operation`` is add, sub, mul or div."""
    x_value, y_value = _coerce_value(x), _coerce_value(y)
    if operation == "add":
        return x_value + y_value
    if operation == "sub":
        return x_value - y_value
    if operation == "mul":
        return x_value * y_value
    if operation == "div":
        return x_value / y_value
    raise ValueError(f"Unknown skein value operation: {operation}")


# Unknot with standard framing: (a - a^(-1)) / (q^(1/2) - q^(-1/2))
UNKNOT = SkeinValue(A - A_INV, Z)
Z_VALUE = SkeinValue(Z)


class FormalPolynomial:
    """Polynomial in one formal variable with HalfLaurent coefficients."""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Optional[Mapping[int, HalfLaurent]] = None):
        self._coefficients: Dict[int, HalfLaurent] = {
            int(k): c for k, c in (coefficients or {}).items() if not c.is_zero()
        }
        if any(k < 0 for k in self._coefficients):
            raise ValueError("Formal polynomials have non-negative degrees only")

    @classmethod
    def variable(cls) -> "FormalPolynomial":
        return cls({1: ONE})

    @classmethod
    def constant(cls, value: HalfLaurent) -> "FormalPolynomial":
        return cls({0: value})

    @classmethod
    def power(cls, degree: int, coeff: HalfLaurent = ONE) -> "FormalPolynomial":
        return cls({degree: coeff})

    @property
    def coefficients(self) -> Mapping[int, HalfLaurent]:
        return MappingProxyType(self._coefficients)

    def degree(self) -> int:
        return max(self._coefficients, default=-1)

    def is_zero(self) -> bool:
        return not self._coefficients

    def __add__(self, other: "FormalPolynomial") -> "FormalPolynomial":
        merged = dict(self._coefficients)
        for k, c in other._coefficients.items():
            merged[k] = merged.get(k, ZERO) + c
        return FormalPolynomial(merged)

    def __neg__(self) -> "FormalPolynomial":
        return FormalPolynomial({k: -c for k, c in self._coefficients.items()})

    def __sub__(self, other: "FormalPolynomial") -> "FormalPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "FormalPolynomial":
        if isinstance(other, (HalfLaurent, int)):
            factor = _coerce_laurent(other)
            return FormalPolynomial({k: c * factor for k, c in self._coefficients.items()})
        if not isinstance(other, FormalPolynomial):
            return NotImplemented
        product: Dict[int, HalfLaurent] = {}
        for k1, c1 in self._coefficients.items():
            for k2, c2 in other._coefficients.items():
                product[k1 + k2] = product.get(k1 + k2, ZERO) + c1 * c2
        return FormalPolynomial(product)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalPolynomial):
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash(frozenset(self._coefficients.items()))

    def substitute(self, value: HalfLaurent) -> HalfLaurent:
        """Horner evaluation at a HalfLaurent value."""
        result = ZERO
        for k in range(self.degree(), -1, -1):
            result = result * value + self._coefficients.get(k, ZERO)
        return result

    def evaluate(self, value: SkeinValue) -> SkeinValue:
        """Evaluate at a skein value, over the common denominator ``den^degree``."""
        top = self.degree()
        if top < 0:
            return SkeinValue.zero()
        num_powers: List[HalfLaurent] = [ONE]
        den_powers: List[HalfLaurent] = [ONE]
        for _ in range(top):
            num_powers.append(num_powers[-1] * value.numerator)
            den_powers.append(den_powers[-1] * value.denominator)
        total = ZERO
        for k, coeff in self._coefficients.items():
            total = total + coeff * num_powers[k] * den_powers[top - k]
        return SkeinValue(total, den_powers[top])

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {c}" for k, c in sorted(self._coefficients.items()))
        return f"FormalPolynomial({{{body}}})"


def substitute_z(x: FormalPolynomial) -> HalfLaurent:
    """Replace the formal z by q^(1/2) - q^(-1/2) and expand."""
    return x.substitute(Z)


# ---------------------------------------------------------------------------
# Text rendering and parsing
# ---------------------------------------------------------------------------

def _render_a(exponent: int) -> str:
    if exponent == 1:
        return "a"
    if exponent > 0:
        return f"a^{exponent}"
    return f"a^({exponent})"


def _render_q(half_units: int) -> str:
    if half_units % 2:
        return f"q^({half_units}/2)"
    whole = half_units // 2
    if whole == 1:
        return "q"
    if whole > 0:
        return f"q^{whole}"
    return f"q^({whole})"


def _render_monomial(e_a: int, e_q: int) -> str:
    factors = []
    if e_a:
        factors.append(_render_a(e_a))
    if e_q:
        factors.append(_render_q(e_q))
    return "*".join(factors)


def _render_term(key: Exponent, coeff: int) -> str:
    monomial = _render_monomial(*key)
    if not monomial:
        return str(abs(coeff))
    if abs(coeff) == 1:
        return monomial
    return f"{abs(coeff)}*{monomial}"


def render_laurent(x: HalfLaurent) -> str:
    """Canonical text form, terms in descending (a, q) exponent order."""
    if x.is_zero():
        return "0"
    pieces = []
    for index, key in enumerate(sorted(x.terms, reverse=True)):
        coeff = x.terms[key]
        body = _render_term(key, coeff)
        if index == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


def render_value(x: SkeinValue) -> str:
    if x.denominator == ONE:
        return render_laurent(x.numerator)
    return f"({render_laurent(x.numerator)})/({render_laurent(x.denominator)})"


_TOKEN_PATTERN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<var>[aq])|(?P<op>[\^()/*+\-]))")


class _ExpressionParser:
    """Recursive-descent parser for the canonical text grammar."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            if text[position:].strip() == "":
                break
            match = _TOKEN_PATTERN.match(text, position)
            if not match:
                stripped = len(text[position:]) - len(text[position:].lstrip())
                raise ParseError(f"Unexpected character {text[position + stripped]!r}", position + stripped, text)
            kind = match.lastgroup
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), start))
            position = match.end()
        self.index = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text)

    def _accept(self, value: str) -> bool:
        token = self._peek()
        if token and token[0] == "op" and token[1] == value:
            self.index += 1
            return True
        return False

    def _expect(self, value: str) -> None:
        if not self._accept(value):
            raise ParseError(f"Expected {value!r}", self._position(), self.text)

    def _number(self) -> int:
        token = self._peek()
        if not token or token[0] != "number":
            raise ParseError("Expected an integer", self._position(), self.text)
        self.index += 1
        return int(token[1])

    def _finish(self) -> None:
        if self._peek() is not None:
            raise ParseError("Unexpected trailing input", self._position(), self.text)

    def parse_polynomial(self) -> HalfLaurent:
        if not self.tokens:
            raise ParseError("Empty expression", 0, self.text)
        result = self._expression()
        self._finish()
        return result

    def parse_value(self) -> SkeinValue:
        if not self.tokens:
            raise ParseError("Empty expression", 0, self.text)
        numerator = self._expression()
        denominator = ONE
        if self._accept("/"):
            position = self._position()
            denominator = self._factor()
            if denominator.is_zero():
                raise ParseError("Zero denominator", position, self.text)
        self._finish()
        return SkeinValue(numerator, denominator)

    def _expression(self) -> HalfLaurent:
        sign = -1 if self._accept("-") else 1
        if sign == 1:
            self._accept("+")
        result = self._term() * sign
        while True:
            if self._accept("+"):
                result = result + self._term()
            elif self._accept("-"):
                result = result - self._term()
            else:
                return result

    def _term(self) -> HalfLaurent:
        result = self._factor()
        while self._accept("*"):
            result = result * self._factor()
        return result

    def _factor(self) -> HalfLaurent:
        token = self._peek()
        if token is None:
            raise ParseError("Unexpected end of input", len(self.text), self.text)
        if token[0] == "number":
            return HalfLaurent.constant(self._number())
        if token[0] == "var":
            self.index += 1
            e_num, e_den = self._exponent() if self._accept("^") else (1, 1)
            if token[1] == "a":
                if e_den != 1:
                    raise ParseError("Exponents of a must be integers", token[2], self.text)
                return HalfLaurent.monomial(e_num, 0)
            if e_den not in (1, 2):
                raise ParseError("Exponents of q must be half-integers", token[2], self.text)
            return HalfLaurent.monomial(0, e_num * (2 // e_den))
        if self._accept("("):
            inner = self._expression()
            self._expect(")")
            return inner
        raise ParseError(f"Unexpected token {token[1]!r}", token[2], self.text)

    def _exponent(self) -> Tuple[int, int]:
        if not self._accept("("):
            return self._number(), 1
        sign = -1 if self._accept("-") else 1
        numerator = sign * self._number()
        denominator = self._number() if self._accept("/") else 1
        self._expect(")")
        if denominator == 0:
            raise ParseError("Zero exponent denominator", self._position(), self.text)
        return numerator, denominator


def parse_laurent(text: str) -> HalfLaurent:
    return HalfLaurent.parse(text)


def parse_value(text: str) -> SkeinValue:
    return SkeinValue.parse(text)


def as_expression(x: SkeinValue, a_symbol: sp.Symbol = _A_SYMBOL) -> sp.Expr:
    """``x`` as a sympy rational function of ``a_symbol`` and t = q^(1/2)."""

    def laurent(y: HalfLaurent) -> sp.Expr:
        return sp.Add(*(coeff * a_symbol**e_a * _T_SYMBOL**e_q for (e_a, e_q), coeff in y.items()))

    return laurent(x.numerator) / laurent(x.denominator)
