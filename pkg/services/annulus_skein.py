"""
Positive skein of the solid torus in the W_λ basis.

``AnnulusElement`` holds Σ c_λ W_λ with scalar coefficients. ``TensorElement``
holds Σ n_{λμ} W_λ⊗W_μ where each coefficient is a ``FramedScalar``: a finite
sum of skein values times monomials γ^g a₁^k a₂^l in the formal parameter γ
and the framing variables of the two solid tori.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple, Union

from models.options import Orientation
from services.coefficients import A, A_INV, HalfLaurent, ONE, SkeinValue, UNKNOT, Z
from services.combinatorics import Partition, cells, content_polynomial, partitions_up_to
from settings.config import settings

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

Tag = Tuple[int, int, int]
UNTAGGED: Tag = (0, 0, 0)
A1_TAG: Tag = (0, 1, 0)
A2_TAG: Tag = (0, 0, 1)

Eigenvalue = Callable[[Partition], SkeinValue]


def _as_value(value: Union[SkeinValue, HalfLaurent, int]) -> SkeinValue:
    return value if isinstance(value, SkeinValue) else SkeinValue(value)


class FramedScalar:
    """Σ value · γ^g a₁^k a₂^l, keyed by the exponent tag (g, k, l)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Tag, Union[SkeinValue, int]]] = None):
        self.terms: Dict[Tag, SkeinValue] = {}
        for tag, value in (terms or {}).items():
            value = _as_value(value)
            if not value.is_zero():
                self.terms[tuple(tag)] = value

    @classmethod
    def of(cls, value: Union[SkeinValue, HalfLaurent, int], tag: Tag = UNTAGGED) -> "FramedScalar":
        return cls({tag: _as_value(value)})

    @classmethod
    def zero(cls) -> "FramedScalar":
        return cls()

    @classmethod
    def one(cls) -> "FramedScalar":
        return cls.of(1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self == FramedScalar.one()

    def __add__(self, other: "FramedScalar") -> "FramedScalar":
        merged = dict(self.terms)
        for tag, value in other.terms.items():
            merged[tag] = merged.get(tag, SkeinValue.zero()) + value
        return FramedScalar(merged)

    def __neg__(self) -> "FramedScalar":
        return FramedScalar({tag: -value for tag, value in self.terms.items()})

    def __sub__(self, other: "FramedScalar") -> "FramedScalar":
        return self + (-other)

    def __mul__(self, other) -> "FramedScalar":
        if isinstance(other, (SkeinValue, HalfLaurent, int)):
            factor = _as_value(other)
            return FramedScalar({tag: value * factor for tag, value in self.terms.items()})
        if not isinstance(other, FramedScalar):
            return NotImplemented
        product: Dict[Tag, SkeinValue] = {}
        for t1, v1 in self.terms.items():
            for t2, v2 in other.terms.items():
                tag = (t1[0] + t2[0], t1[1] + t2[1], t1[2] + t2[2])
                product[tag] = product.get(tag, SkeinValue.zero()) + v1 * v2
        return FramedScalar(product)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FramedScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def identify(self) -> "FramedScalar":
        """Set a₁ = a₂ = a, keeping γ formal."""
        collapsed: Dict[Tag, SkeinValue] = {}
        for (g, k, l), value in self.terms.items():
            shifted = value * HalfLaurent.monomial(k + l, 0)
            collapsed[(g, 0, 0)] = collapsed.get((g, 0, 0), SkeinValue.zero()) + shifted
        return FramedScalar(collapsed)

    def scalar(self) -> SkeinValue:
        """The plain skein value of an untagged scalar."""
        if any(tag != UNTAGGED for tag in self.terms):
            raise ValueError(f"Scalar carries framing or γ tags: {self.terms}")
        return self.terms.get(UNTAGGED, SkeinValue.zero())

    def items(self) -> Iterator[Tuple[Tag, SkeinValue]]:
        for tag in sorted(self.terms):
            yield tag, self.terms[tag]

    def __repr__(self) -> str:
        return f"FramedScalar({dict(self.items())})"


@dataclass(frozen=True)
class SignedMonomial:
    """A concrete value ±a₁^k a₂^l for γ."""

    sign: int = 1
    a1: int = 0
    a2: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("SignedMonomial sign must be +1 or -1")

    def power(self, exponent: int) -> FramedScalar:
        return FramedScalar.of(self.sign ** exponent, (0, self.a1 * exponent, self.a2 * exponent))


def gamma_power(exponent: int, gamma: Optional[SignedMonomial] = None) -> FramedScalar:
    """γ^exponent, formal when ``gamma`` is None."""
    if gamma is None:
        return FramedScalar.of(1, (exponent, 0, 0))
    return gamma.power(exponent)


class AnnulusElement:
    """Finite combination Σ c_λ W_λ with skein-value coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Optional[Mapping[Partition, Union[SkeinValue, int]]] = None):
        self.coefficients: Dict[Partition, SkeinValue] = {}
        for lam, value in (coefficients or {}).items():
            value = _as_value(value)
            if not value.is_zero():
                self.coefficients[lam] = value

    @classmethod
    def basis(cls, lam: Partition) -> "AnnulusElement":
        return cls({lam: SkeinValue.one()})

    def __add__(self, other: "AnnulusElement") -> "AnnulusElement":
        merged = dict(self.coefficients)
        for lam, value in other.coefficients.items():
            merged[lam] = merged.get(lam, SkeinValue.zero()) + value
        return AnnulusElement(merged)

    def __sub__(self, other: "AnnulusElement") -> "AnnulusElement":
        return self + other.scale(SkeinValue.rational(-1))

    def scale(self, factor: SkeinValue) -> "AnnulusElement":
        return AnnulusElement({lam: value * factor for lam, value in self.coefficients.items()})

    def is_zero(self) -> bool:
        return not self.coefficients

    def support(self) -> List[Partition]:
        return sorted(self.coefficients, key=lambda lam: lam.sort_key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnnulusElement):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __repr__(self) -> str:
        body = ", ".join(f"W_{lam}: {self.coefficients[lam]}" for lam in self.support())
        return f"AnnulusElement({{{body}}})"


class TensorElement:
    """Finite combination Σ n_{λμ} W_λ⊗W_μ with framed coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Optional[Mapping[Tuple[Partition, Partition], FramedScalar]] = None):
        self.coefficients: Dict[Tuple[Partition, Partition], FramedScalar] = {
            key: value for key, value in (coefficients or {}).items() if not value.is_zero()
        }

    @classmethod
    def basis(cls, lam: Partition, mu: Partition, coeff: Optional[FramedScalar] = None) -> "TensorElement":
        return cls({(lam, mu): coeff if coeff is not None else FramedScalar.one()})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        merged = dict(self.coefficients)
        for key, value in other.coefficients.items():
            merged[key] = merged.get(key, FramedScalar.zero()) + value
        return TensorElement(merged)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(FramedScalar.of(-1))

    def scale(self, factor: Union[FramedScalar, SkeinValue]) -> "TensorElement":
        return TensorElement({key: value * factor for key, value in self.coefficients.items()})

    def identify(self) -> "TensorElement":
        return TensorElement({key: value.identify() for key, value in self.coefficients.items()})

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_diagonal(self) -> bool:
        return all(lam == mu for lam, mu in self.coefficients)

    def support(self) -> List[Tuple[Partition, Partition]]:
        return sorted(self.coefficients, key=lambda key: (key[0].sort_key, key[1].sort_key))

    def items(self) -> Iterator[Tuple[Tuple[Partition, Partition], FramedScalar]]:
        for key in self.support():
            yield key, self.coefficients[key]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __repr__(self) -> str:
        body = ", ".join(f"W_{lam}⊗W_{mu}: {value!r}" for (lam, mu), value in self.items())
        return f"TensorElement({{{body}}})"


def meridian_eigenvalue(lam: Partition) -> SkeinValue:
    """○ + a z c_λ(q)"""
    return UNKNOT + SkeinValue(A * Z * content_polynomial(lam))


def framing_eigenvalue(lam: Partition) -> SkeinValue:
    """Full positive twist on W_λ: a^{|λ|} q^{Σ content}."""
    total_content = sum(cell.content for cell in cells(lam))
    return SkeinValue(HalfLaurent.monomial(lam.size, 2 * total_content))


def meridian_apply(x: AnnulusElement, eigenvalue: Eigenvalue = meridian_eigenvalue) -> AnnulusElement:
    return AnnulusElement({lam: value * eigenvalue(lam) for lam, value in x.coefficients.items()})


@lru_cache(maxsize=None)
def quantum_dimension(lam: Partition, orientation: Orientation = Orientation.STANDARD) -> SkeinValue:
    """
    S³ value of W_λ by the hook-content product.

    Args:
        lam: the partition
        orientation: STANDARD uses q^(c/2) in the numerator, CONJUGATED uses q^(-c/2)

    Returns:
        Π (a q^(±c/2) - a^(-1) q^(∓c/2)) / (q^(h/2) - q^(-h/2))
    """
    sign = 1 if Orientation(orientation) == Orientation.STANDARD else -1
    numerator, denominator = ONE, ONE
    for cell in cells(lam):
        shift = sign * cell.content
        numerator = numerator * (A * HalfLaurent.monomial(0, shift) - A_INV * HalfLaurent.monomial(0, -shift))
        denominator = denominator * (HalfLaurent.monomial(0, cell.hook) - HalfLaurent.monomial(0, -cell.hook))
    return SkeinValue(numerator, denominator)


def eval_s3(x: AnnulusElement, orientation: Orientation = Orientation.STANDARD) -> SkeinValue:
    total = SkeinValue.zero()
    for lam, value in x.coefficients.items():
        total = total + value * quantum_dimension(lam, orientation)
    return total


def _deviation(eigenvalue: Eigenvalue, lam: Partition) -> SkeinValue:
    return eigenvalue(lam) - UNKNOT


def ov_operator_apply(
    x: TensorElement,
    left_eigenvalue: Eigenvalue = meridian_eigenvalue,
    right_eigenvalue: Eigenvalue = meridian_eigenvalue,
) -> TensorElement:
    """
    Apply (P - ○)⊗a₂ - a₁⊗(P - ○), with P the meridian operator.

    Both eigenvalue callables default to the meridian eigenvalue.
    """
    result: Dict[Tuple[Partition, Partition], FramedScalar] = {}
    for (lam, mu), coeff in x.coefficients.items():
        factor = FramedScalar(
            {A2_TAG: _deviation(left_eigenvalue, lam)}
        ) - FramedScalar({A1_TAG: _deviation(right_eigenvalue, mu)})
        result[(lam, mu)] = coeff * factor
    return TensorElement(result)


def build_psi(n: int, gamma: Optional[SignedMonomial] = None) -> TensorElement:
    """Σ_{|λ| ≤ n} γ^{|λ|} W_λ⊗W_λ, with γ formal unless a monomial is given."""
    if n < 0:
        raise ValueError(f"Degree bound must be non-negative, got {n}")
    return TensorElement({(lam, lam): gamma_power(lam.size, gamma) for lam in partitions_up_to(n)})


def close_factor(
    psi: TensorElement,
    factor: int,
    orientation: Orientation = Orientation.STANDARD,
    dimension: Callable[[Partition, Orientation], SkeinValue] = quantum_dimension,
) -> Dict[Partition, FramedScalar]:
    """
    Evaluate one tensor factor in S³ and collect the other factor's coefficients.

    Args:
        psi: the tensor element
        factor: 1 closes the left factor, 2 the right one
        orientation: orientation used for the closed factor
        dimension: S³ evaluation of a basis element

    Returns:
        Map from the surviving partition to its framed coefficient
    """
    if factor not in (1, 2):
        raise ValueError(f"Tensor factor must be 1 or 2, got {factor}")
    collected: Dict[Partition, FramedScalar] = {}
    for (lam, mu), coeff in psi.coefficients.items():
        closed, kept = (lam, mu) if factor == 1 else (mu, lam)
        term = coeff * dimension(closed, orientation)
        collected[kept] = collected.get(kept, FramedScalar.zero()) + term
    return {lam: value for lam, value in collected.items() if not value.is_zero()}
