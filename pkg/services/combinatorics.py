"""
Partitions, Young diagram statistics and symmetric-function basis changes.

All conversions go through the power-sum basis:

- Schur to power sums by characters, s_λ = Σ_μ χ_λ(μ)/z_μ · p_μ
- complete and elementary to power sums through h_n = Σ p_μ/z_μ and e_n = Σ ε_μ p_μ/z_μ
- power sums to Schur by characters, p_μ = Σ_λ χ_λ(μ) s_λ
- Schur to complete / elementary by the (dual) Jacobi-Trudi determinant
"""

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, NamedTuple, Optional, Tuple

import sympy as sp

from models.options import SymBasis
from services.coefficients import HalfLaurent, SkeinValue, ZERO
from settings.config import settings
from utils.exceptions import ParseError

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"Partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"Partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read "[3,1]", "3,1" or "[]"."""
        stripped = text.strip()
        lead = len(text) - len(text.lstrip())
        opened, closed = stripped.startswith("["), stripped.endswith("]")
        if opened != closed:
            position = lead + len(stripped) if opened else lead
            raise ParseError(f"Unbalanced brackets in partition {text!r}", position, text)
        inner = stripped[1:-1] if opened else stripped
        match = re.fullmatch(r"\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)", inner)
        if not match:
            raise ParseError(f"Malformed partition {text!r}", lead + (1 if opened else 0), text)
        body = match.group(1).strip()
        parts = tuple(int(p) for p in body.split(",")) if body else ()
        try:
            return cls(parts)
        except ValueError as e:
            raise ParseError(str(e), 0, text)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Graded reverse-lexicographic order: (1) < (2) < (1,1) < (3) < (2,1) ..."""
        return self.size, tuple(-p for p in self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self.parts) + "]"

    def label(self, ascii_only: bool = False) -> str:
        if not self.parts:
            return "[]" if ascii_only else "∅"
        if ascii_only:
            return str(self)
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def multiplicities(self) -> Dict[int, int]:
        return dict(Counter(self.parts))


EMPTY = Partition(())


def union(first: Partition, second: Partition) -> Partition:
    """Partition whose parts are the multiset union of both."""
    return Partition(tuple(sorted(first.parts + second.parts, reverse=True)))


@lru_cache(maxsize=None)
def partitions(n: int) -> Tuple[Partition, ...]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        return ()

    def _generate(remaining: int, largest: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in _generate(remaining - first, first):
                yield (first,) + rest

    return tuple(Partition(p) for p in _generate(n, n))


def partitions_up_to(n: int) -> List[Partition]:
    return [lam for d in range(n + 1) for lam in partitions(d)]


def conjugate(lam: Partition) -> Partition:
    if not lam.parts:
        return EMPTY
    return Partition(tuple(sum(1 for p in lam.parts if p > j) for j in range(lam.parts[0])))


class Cell(NamedTuple):
    content: int
    hook: int


def cells(lam: Partition) -> List[Cell]:
    """
    Cells of the Young diagram in row-major order.

    Args:
        lam: the partition

    Returns:
        One ``Cell`` per box (i, j) with content j - i and hook arm + leg + 1
    """
    columns = conjugate(lam).parts
    result = []
    for i, row in enumerate(lam.parts, start=1):
        for j in range(1, row + 1):
            arm = row - j
            leg = columns[j - 1] - i
            result.append(Cell(content=j - i, hook=arm + leg + 1))
    return result


def content_polynomial(lam: Partition) -> HalfLaurent:
    """Σ over cells of q^content, in whole powers of q."""
    total = ZERO
    for cell in cells(lam):
        total = total + HalfLaurent.monomial(0, 2 * cell.content)
    return total


def content_collisions(max_size: int) -> List[Tuple[Partition, Partition]]:
    """Pairs of distinct partitions of size ≤ max_size sharing a content polynomial."""
    seen: Dict[HalfLaurent, Partition] = {}
    collisions = []
    for lam in partitions_up_to(max_size):
        key = content_polynomial(lam)
        if key in seen:
            collisions.append((seen[key], lam))
        else:
            seen[key] = lam
    return collisions


def centralizer_size(mu: Partition) -> int:
    """z_μ = Π i^{m_i} m_i!"""
    result = 1
    for part, count in Counter(mu.parts).items():
        result *= part ** count * math.factorial(count)
    return result


@lru_cache(maxsize=None)
def _murnaghan_nakayama(parts: Tuple[int, ...], rims: Tuple[int, ...]) -> int:
    if not rims:
        return 1 if not parts else 0
    rim, remaining = rims[0], rims[1:]
    length = len(parts)
    beta = [parts[i] + (length - 1 - i) for i in range(length)]
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - rim
        if target < 0 or target in occupied:
            continue
        height = sum(1 for x in beta if target < x < b)
        moved = sorted([x for x in beta if x != b] + [target], reverse=True)
        reduced = tuple(x - (length - 1 - i) for i, x in enumerate(moved))
        total += (-1) ** height * _murnaghan_nakayama(tuple(p for p in reduced if p > 0), remaining)
    return total


def character(lam: Partition, mu: Partition) -> int:
    """Symmetric group character χ_λ evaluated on the cycle type μ."""
    if lam.size != mu.size:
        raise ValueError(f"Character needs partitions of equal size, got {lam} and {mu}")
    return _murnaghan_nakayama(lam.parts, mu.parts)


class SymFunc:
    """Finitely supported symmetric function in one of the four classical bases."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: SymBasis, terms: Optional[Mapping[Partition, SkeinValue]] = None):
        self.basis = SymBasis(basis)
        self.terms: Dict[Partition, SkeinValue] = {}
        for lam, coeff in (terms or {}).items():
            value = coeff if isinstance(coeff, SkeinValue) else SkeinValue(coeff)
            if not value.is_zero():
                self.terms[lam] = value

    @classmethod
    def basis_element(cls, basis: SymBasis, lam: Partition) -> "SymFunc":
        return cls(basis, {lam: SkeinValue.one()})

    def __add__(self, other: "SymFunc") -> "SymFunc":
        if other.basis != self.basis:
            other = to_basis(self.basis, other)
        merged = dict(self.terms)
        for lam, coeff in other.terms.items():
            merged[lam] = merged.get(lam, SkeinValue.zero()) + coeff
        return SymFunc(self.basis, merged)

    def scale(self, factor: SkeinValue) -> "SymFunc":
        return SymFunc(self.basis, {lam: c * factor for lam, c in self.terms.items()})

    def degree(self) -> int:
        return max((lam.size for lam in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def to_dict(self) -> dict:
        ordered = sorted(self.terms.items(), key=lambda item: item[0].sort_key)
        return {
            "basis": self.basis.value,
            "terms": [{"partition": list(lam.parts), "coeff": str(c)} for lam, c in ordered],
        }

    def __repr__(self) -> str:
        return f"SymFunc({self.to_dict()})"


def _accumulate(target: Dict[Partition, SkeinValue], lam: Partition, value: SkeinValue) -> None:
    total = target.get(lam, SkeinValue.zero()) + value
    if total.is_zero():
        target.pop(lam, None)
    else:
        target[lam] = total


def _one_row_in_powersum(n: int, signed: bool) -> Dict[Partition, SkeinValue]:
    expansion: Dict[Partition, SkeinValue] = {}
    for mu in partitions(n):
        sign = (-1) ** (n - mu.length) if signed else 1
        expansion[mu] = SkeinValue.rational(sign, centralizer_size(mu))
    return expansion


def _multiply_powersum(
    left: Mapping[Partition, SkeinValue], right: Mapping[Partition, SkeinValue]
) -> Dict[Partition, SkeinValue]:
    product: Dict[Partition, SkeinValue] = {}
    for mu, c1 in left.items():
        for nu, c2 in right.items():
            _accumulate(product, union(mu, nu), c1 * c2)
    return product


@lru_cache(maxsize=None)
def _in_powersum(basis: SymBasis, lam: Partition) -> Tuple[Tuple[Partition, SkeinValue], ...]:
    if basis == SymBasis.POWERSUM:
        return ((lam, SkeinValue.one()),)
    if basis == SymBasis.SCHUR:
        z = {mu: centralizer_size(mu) for mu in partitions(lam.size)}
        return tuple(
            (mu, SkeinValue.rational(character(lam, mu), z[mu]))
            for mu in partitions(lam.size)
            if character(lam, mu)
        )
    signed = basis == SymBasis.ELEMENTARY
    expansion: Dict[Partition, SkeinValue] = {EMPTY: SkeinValue.one()}
    for part in lam.parts:
        expansion = _multiply_powersum(expansion, _one_row_in_powersum(part, signed))
    return tuple(expansion.items())


def _jacobi_trudi(rows: Tuple[int, ...]) -> Dict[Partition, int]:
    """Expand det(x_{rows_i - i + j}) as a combination of products x_μ."""
    if not rows:
        return {EMPTY: 1}
    top = sum(rows)
    symbols = sp.symbols(f"x1:{top + 1}")

    def entry(k: int):
        if k < 0:
            return sp.Integer(0)
        if k == 0:
            return sp.Integer(1)
        return symbols[k - 1]

    size = len(rows)
    matrix = sp.Matrix(size, size, lambda i, j: entry(rows[i] - i + j))
    determinant = sp.Poly(sp.expand(matrix.det(method="berkowitz")), *symbols)
    expansion: Dict[Partition, int] = {}
    for exponents, coeff in determinant.terms():
        parts: List[int] = []
        for index, power in enumerate(exponents, start=1):
            parts.extend([index] * power)
        expansion[Partition(tuple(sorted(parts, reverse=True)))] = int(coeff)
    return expansion


@lru_cache(maxsize=None)
def _from_powersum(basis: SymBasis, mu: Partition) -> Tuple[Tuple[Partition, SkeinValue], ...]:
    if basis == SymBasis.POWERSUM:
        return ((mu, SkeinValue.one()),)
    in_schur = {lam: character(lam, mu) for lam in partitions(mu.size) if character(lam, mu)}
    if basis == SymBasis.SCHUR:
        return tuple((lam, SkeinValue(c)) for lam, c in in_schur.items())
    expansion: Dict[Partition, SkeinValue] = {}
    for lam, chi in in_schur.items():
        rows = lam.parts if basis == SymBasis.HOMOGENEOUS else conjugate(lam).parts
        for nu, coeff in _jacobi_trudi(rows).items():
            _accumulate(expansion, nu, SkeinValue(chi * coeff))
    return tuple(expansion.items())


def to_basis(target: SymBasis, f: SymFunc) -> SymFunc:
    """
    Express ``f`` in the ``target`` basis.

    Args:
        target: basis tag of the result
        f: symmetric function in any basis

    Returns:
        The same symmetric function with coefficients over ``target``
    """
    target = SymBasis(target)
    if f.basis == target:
        return SymFunc(target, f.terms)
    in_powersum: Dict[Partition, SkeinValue] = {}
    for lam, coeff in f.terms.items():
        for mu, c in _in_powersum(f.basis, lam):
            _accumulate(in_powersum, mu, coeff * c)
    if target == SymBasis.POWERSUM:
        return SymFunc(target, in_powersum)
    result: Dict[Partition, SkeinValue] = {}
    for mu, coeff in in_powersum.items():
        for lam, c in _from_powersum(target, mu):
            _accumulate(result, lam, coeff * c)
    return SymFunc(target, result)


TensorKey = Tuple[Partition, Partition]


def _tensor_product(
    left: Mapping[TensorKey, SkeinValue], right: Mapping[TensorKey, SkeinValue], max_degree: int
) -> Dict[TensorKey, SkeinValue]:
    product: Dict[TensorKey, SkeinValue] = {}
    for (mu1, nu1), c1 in left.items():
        for (mu2, nu2), c2 in right.items():
            if mu1.size + mu2.size > max_degree:
                continue
            _accumulate(product, (union(mu1, mu2), union(nu1, nu2)), c1 * c2)
    return product


def cauchy_check(n: int, character_table: Optional[Callable[[Partition, Partition], int]] = None) -> bool:
    """
    Compare Σ_λ s_λ⊗s_λ with exp(Σ_k p_k⊗p_k / k) degree by degree up to ``n``.

    Both sides are expanded in the power-sum ⊗ power-sum basis with exact
    rational coefficients; the exponential is expanded as a truncated series.
    ``character_table`` replaces the characters used for the Schur side.
    """
    chi = character_table or character
    exponent = {
        (Partition((k,)), Partition((k,))): SkeinValue.rational(1, k) for k in range(1, n + 1)
    }
    series: Dict[TensorKey, SkeinValue] = {(EMPTY, EMPTY): SkeinValue.one()}
    power: Dict[TensorKey, SkeinValue] = {(EMPTY, EMPTY): SkeinValue.one()}
    for k in range(1, n + 1):
        power = _tensor_product(power, exponent, n)
        factor = SkeinValue.rational(1, math.factorial(k))
        for key, coeff in power.items():
            _accumulate(series, key, coeff * factor)

    for d in range(n + 1):
        lhs: Dict[TensorKey, SkeinValue] = {}
        for lam in partitions(d):
            schur = {
                mu: SkeinValue.rational(chi(lam, mu), centralizer_size(mu)) for mu in partitions(d)
            }
            for mu, c1 in schur.items():
                for nu, c2 in schur.items():
                    _accumulate(lhs, (mu, nu), c1 * c2)
        rhs = {key: c for key, c in series.items() if key[0].size == d}
        if lhs != rhs:
            logger.warning(f"Cauchy identity fails in degree {d}")
            return False
    return True


def orthogonality_defects(n: int) -> List[Tuple[Partition, Partition, SkeinValue]]:
    """Entries where Σ_μ χ_λ(μ)χ_ν(μ)/z_μ differs from δ_λν, for all sizes up to ``n``."""
    defects = []
    for d in range(n + 1):
        shapes = partitions(d)
        for lam in shapes:
            for nu in shapes:
                total = SkeinValue.zero()
                for mu in shapes:
                    total = total + SkeinValue.rational(
                        character(lam, mu) * character(nu, mu), centralizer_size(mu)
                    )
                expected = SkeinValue.one() if lam == nu else SkeinValue.zero()
                if total != expected:
                    defects.append((lam, nu, total))
    return defects

