"""
Degree-by-degree solution of the annulus annihilation constraint.

The operator (P - ○)⊗a₂ - a₁⊗(P - ○) is diagonal on W_λ⊗W_μ. After the
identification a₁ = a₂ = a its kernel on bidegree (d, d) is spanned by the
diagonal vectors W_λ⊗W_λ; the closure constraints of the unknot then fix the
diagonal coefficients to γ^{|λ|}.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import sympy as sp

from models.options import LinkName, Orientation
from services.annulus_skein import (
    A1_TAG,
    A2_TAG,
    FramedScalar,
    SignedMonomial,
    TensorElement,
    build_psi,
    close_factor,
    gamma_power,
    meridian_eigenvalue,
    ov_operator_apply,
    quantum_dimension,
)
from services.coefficients import A, HalfLaurent, SkeinValue, as_expression
from services.combinatorics import Partition, partitions, partitions_up_to
from services.homfly_engine import BraidWord, colored_homfly
from settings.config import settings
from utils.exceptions import InconsistentClosureError, ScopeLimitError, SkeinError

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

Index = Tuple[Partition, Partition]
Eigenvalue = Callable[[Partition], SkeinValue]
Dimension = Callable[[Partition, Orientation], SkeinValue]

PARTITION_VARIABLE_LABEL = "a = Q^(1/2); framing monomials absorb the 4-chain choice"

# framing variables of the first and second tensor factor
FACTOR_SYMBOLS = {1: sp.Symbol("a1"), 2: sp.Symbol("a2")}


@dataclass
class ConstraintSystem:
    """Linear system of the annihilation operator on one bidegree, with a₁ = a₂ = a."""

    bidegree: Tuple[int, int]
    unknowns: List[Index]
    matrix: List[List[SkeinValue]]

    def diagonal_entry(self, index: Index) -> SkeinValue:
        position = self.unknowns.index(index)
        return self.matrix[position][position]

    def is_diagonal(self) -> bool:
        return all(
            value.is_zero()
            for i, row in enumerate(self.matrix)
            for j, value in enumerate(row)
            if i != j
        )


def build_constraint_system(
    d1: int,
    d2: int,
    left_eigenvalue: Eigenvalue = meridian_eigenvalue,
    right_eigenvalue: Eigenvalue = meridian_eigenvalue,
) -> ConstraintSystem:
    unknowns = [(lam, mu) for lam in partitions(d1) for mu in partitions(d2)]
    position = {index: i for i, index in enumerate(unknowns)}
    size = len(unknowns)
    matrix = [[SkeinValue.zero() for _ in range(size)] for _ in range(size)]
    for column, (lam, mu) in enumerate(unknowns):
        image = ov_operator_apply(TensorElement.basis(lam, mu), left_eigenvalue, right_eigenvalue).identify()
        for index, coeff in image.coefficients.items():
            matrix[position[index]][column] = coeff.scalar()
    return ConstraintSystem(bidegree=(d1, d2), unknowns=unknowns, matrix=matrix)


def kernel_basis(matrix: List[List[SkeinValue]], columns: int) -> List[List[SkeinValue]]:
    """
    Exact kernel of a matrix over the scalar field by reduced row echelon form.

    Returns:
        One vector per free column, with that column set to 1
    """
    rows = [list(row) for row in matrix]
    pivots: List[int] = []
    pivot_row = 0
    for column in range(columns):
        found = next((r for r in range(pivot_row, len(rows)) if not rows[r][column].is_zero()), None)
        if found is None:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        pivot = rows[pivot_row][column]
        rows[pivot_row] = [value / pivot for value in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and not rows[r][column].is_zero():
                factor = rows[r][column]
                rows[r] = [value - factor * base for value, base in zip(rows[r], rows[pivot_row])]
        pivots.append(column)
        pivot_row += 1
        if pivot_row == len(rows):
            break

    basis = []
    for free in (c for c in range(columns) if c not in pivots):
        vector = [SkeinValue.zero() for _ in range(columns)]
        vector[free] = SkeinValue.one()
        for r, column in enumerate(pivots):
            vector[column] = -rows[r][free]
        basis.append(vector)
    return basis


def solve_kernel(
    d: int,
    left_eigenvalue: Eigenvalue = meridian_eigenvalue,
    right_eigenvalue: Eigenvalue = meridian_eigenvalue,
) -> List[TensorElement]:
    """
    Kernel of the annihilation operator on bidegree (d, d).

    Args:
        d: degree
        left_eigenvalue: meridian eigenvalue on the first factor
        right_eigenvalue: meridian eigenvalue on the second factor

    Returns:
        Kernel basis vectors as tensor elements
    """
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}")
    system = build_constraint_system(d, d, left_eigenvalue, right_eigenvalue)
    vectors = kernel_basis(system.matrix, len(system.unknowns))
    result = []
    for vector in vectors:
        result.append(
            TensorElement(
                {index: FramedScalar.of(value) for index, value in zip(system.unknowns, vector)}
            )
        )
    logger.debug(f"Kernel at bidegree ({d}, {d}) has dimension {len(result)}")
    return result


@dataclass(frozen=True)
class CertificateEntry:
    lam: Partition
    mu: Partition
    eigenvalue: FramedScalar


def offdiagonal_certificate(d: int) -> List[CertificateEntry]:
    """
    Operator eigenvalues a₁a₂z(c_λ - c_μ) for all ordered pairs λ ≠ μ of size ``d``.

    Each value is read off the constraint system and divided by a² to restore
    the a₁a₂ prefactor; every entry is nonzero.
    """
    if d < 1:
        raise ValueError(f"Off-diagonal certificates need degree at least 1, got {d}")
    system = build_constraint_system(d, d)
    entries = []
    for lam in partitions(d):
        for mu in partitions(d):
            if lam == mu:
                continue
            value = system.diagonal_entry((lam, mu)) / SkeinValue(A * A)
            if value.is_zero():
                raise SkeinError(f"Off-diagonal eigenvalue for {lam}, {mu} is {value}")
            entries.append(CertificateEntry(lam, mu, FramedScalar.of(value, (0, 1, 1))))
    return entries


@dataclass(frozen=True)
class BranchReport:
    """Outcome of one choice of closure orientations for the two factors."""

    first: Orientation
    second: Orientation
    consistent: bool
    witness: Optional[Partition] = None
    first_candidate: Optional[SkeinValue] = None
    second_candidate: Optional[SkeinValue] = None
    non_monomial_in_both: bool = False


@dataclass
class NormalizationResult:
    psi: TensorElement
    coefficients: Dict[Partition, FramedScalar]
    branches: List[BranchReport] = field(default_factory=list)

    def contradiction(self) -> Optional[BranchReport]:
        for branch in self.branches:
            if branch.first == Orientation.CONJUGATED and branch.second == Orientation.CONJUGATED:
                return branch if not branch.consistent else None
        return None


def _closure_ratios(
    n: int, orientation: Orientation, factor: int, dimension: Dimension
) -> Dict[Partition, SkeinValue]:
    """n_λ / γ^{|λ|} forced by closing ``factor`` of the diagonal solution in ``orientation``."""
    unit = build_psi(n, SignedMonomial())
    closed = close_factor(unit, factor, orientation, dimension)
    ratios = {}
    for lam in partitions_up_to(n):
        target = dimension(lam, Orientation.STANDARD)
        ratios[lam] = target / closed[lam].scalar()
    return ratios


def _agree_across_factors(first: SkeinValue, second: SkeinValue) -> bool:
    """True when the candidates coincide as functions of independent a₁ and a₂."""
    difference = as_expression(first, FACTOR_SYMBOLS[1]) - as_expression(second, FACTOR_SYMBOLS[2])
    return sp.cancel(sp.together(difference)) == 0


def _is_monomial(value: SkeinValue) -> bool:
    return value.denominator == HalfLaurent.constant(1) and value.numerator.is_monomial()


def normalize_unknot(n: int, dimension: Dimension = quantum_dimension) -> NormalizationResult:
    """
    Fix the diagonal coefficients n_λ from the unknot counts of both closures.

    Closing the first (second) factor of Σ n_λ W_λ⊗W_λ in a chosen orientation
    must reproduce Σ γ^{|λ|}⟨W_λ⟩ W_λ, which determines n_λ as a function of the
    closed factor's framing variable: a₁ for the first factor, a₂ for the
    second. A branch is consistent when the two candidates coincide with a₁ and
    a₂ kept independent. All four orientation branches are reported.

    Raises:
        InconsistentClosureError: if the standard/standard branch has no solution
    """
    if n < 0:
        raise ValueError(f"Degree bound must be non-negative, got {n}")
    orientations = (Orientation.STANDARD, Orientation.CONJUGATED)
    ratios = {
        (orientation, factor): _closure_ratios(n, orientation, factor, dimension)
        for orientation in orientations
        for factor in (1, 2)
    }

    branches = []
    for first in orientations:
        for second in orientations:
            report = BranchReport(first, second, True)
            for lam in partitions_up_to(n):
                c1, c2 = ratios[(first, 1)][lam], ratios[(second, 2)][lam]
                if _agree_across_factors(c1, c2):
                    continue
                report = BranchReport(
                    first,
                    second,
                    False,
                    witness=lam,
                    first_candidate=c1,
                    second_candidate=c2,
                    non_monomial_in_both=not _is_monomial(c1) and not _is_monomial(c2),
                )
                break
            branches.append(report)
            logger.debug(f"Closure branch {first.value}/{second.value}: consistent={report.consistent}")

    standard = branches[0]
    if not standard.consistent:
        raise InconsistentClosureError(
            f"Standard closures disagree at {standard.witness}: "
            f"{standard.first_candidate} vs {standard.second_candidate}"
        )

    coefficients = {
        lam: gamma_power(lam.size) * ratios[(Orientation.STANDARD, 1)][lam] for lam in partitions_up_to(n)
    }
    psi = TensorElement({(lam, lam): value for lam, value in coefficients.items()})
    return NormalizationResult(psi=psi, coefficients=coefficients, branches=branches)


@dataclass(frozen=True)
class FramingConstraint:
    gamma_first: FramedScalar
    gamma_second: FramedScalar
    holds: bool


def framing_constraint() -> FramingConstraint:
    """
    Read γ₁ = a₂ and γ₂ = -a₁ off the annihilating operator and check a₂γ₁ + a₁γ₂ = 0.

    The identity is checked after the a₁ = a₂ identification used by the solver.
    """
    gamma_first = FramedScalar.of(1, A2_TAG)
    gamma_second = FramedScalar.of(-1, A1_TAG)
    combination = FramedScalar.of(1, A2_TAG) * gamma_first + FramedScalar.of(1, A1_TAG) * gamma_second
    return FramingConstraint(gamma_first, gamma_second, combination.identify().is_zero())


@dataclass
class PartitionFunction:
    link: LinkName
    truncation: int
    coefficients: Dict[Partition, SkeinValue]
    framing_monomials: Dict[Partition, SkeinValue]
    cross_checked: Dict[Partition, bool] = field(default_factory=dict)
    variable_label: str = PARTITION_VARIABLE_LABEL


UNKNOT_BRAID = BraidWord(1, ())
HOPF_BRAID = BraidWord(2, (1, 1))


def partition_function(
    link: LinkName, n: int, orientation: Orientation = Orientation.STANDARD
) -> PartitionFunction:
    """
    Coefficients P_{K,λ} of Σ_λ P_{K,λ} W_λ for the unknot and the Hopf link.

    For the Hopf link one component carries λ and the other the fundamental
    color, so P_λ is the meridian eigenvalue times the quantum dimension.
    Colors with at most two boxes are cross-checked against the cabling engine.

    Raises:
        ScopeLimitError: unsupported link, or a Hopf truncation beyond the engine limit
    """
    try:
        link = LinkName(link)
    except ValueError:
        raise ScopeLimitError(f"Unsupported link {link!r}; expected one of unknot, hopf")
    if n < 0:
        raise ValueError(f"Degree bound must be non-negative, got {n}")
    if link == LinkName.HOPF and n > 2:
        raise ScopeLimitError(f"Hopf partition functions are limited to degree 2, got {n}")

    coefficients: Dict[Partition, SkeinValue] = {}
    monomials: Dict[Partition, SkeinValue] = {}
    checks: Dict[Partition, bool] = {}
    for lam in partitions_up_to(n):
        value = quantum_dimension(lam, orientation)
        if link == LinkName.HOPF:
            value = meridian_eigenvalue(lam) * value
        coefficients[lam] = value
        monomials[lam] = SkeinValue.one()
        if 1 <= lam.size <= 2 and orientation == Orientation.STANDARD:
            braid = UNKNOT_BRAID if link == LinkName.UNKNOT else HOPF_BRAID
            colored = colored_homfly(braid, lam, components=[0])
            monomials[lam] = colored.framing_monomial
            checks[lam] = colored.value / colored.framing_monomial == value
            if not checks[lam]:
                logger.warning(f"Cabling cross-check failed for {link.value} colored {lam}")
    return PartitionFunction(
        link=link, truncation=n, coefficients=coefficients, framing_monomials=monomials, cross_checked=checks
    )
