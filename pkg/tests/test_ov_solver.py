import pytest

from models.options import LinkName, Orientation
from services.annulus_skein import (
    A1_TAG,
    A2_TAG,
    FramedScalar,
    gamma_power,
    meridian_eigenvalue,
    ov_operator_apply,
    quantum_dimension,
)
from services.coefficients import HalfLaurent, Q, SkeinValue, UNKNOT, Z_VALUE
from services.combinatorics import EMPTY, Partition, conjugate, partitions, partitions_up_to
from services.ov_solver import (
    build_constraint_system,
    framing_constraint,
    kernel_basis,
    normalize_unknot,
    offdiagonal_certificate,
    partition_function,
    solve_kernel,
)
from utils.exceptions import ScopeLimitError

TWO = Partition((2,))
ONE_ONE = Partition((1, 1))
BOX = Partition((1,))


@pytest.mark.parametrize("d, dimension", [(0, 1), (1, 1), (2, 2), (3, 3), (4, 5)])
def test_kernel_dimensions(d, dimension):
    kernel = solve_kernel(d)
    assert len(kernel) == dimension
    assert all(vector.is_diagonal() and len(vector.coefficients) == 1 for vector in kernel)
    assert {vector.support()[0] for vector in kernel} == {(lam, lam) for lam in partitions(d)}


def test_constraint_system_is_diagonal():
    system = build_constraint_system(2, 2)
    assert system.is_diagonal()
    assert system.diagonal_entry((TWO, TWO)).is_zero()
    assert not system.diagonal_entry((TWO, ONE_ONE)).is_zero()


def test_kernel_basis_of_a_rank_one_matrix():
    one, two = SkeinValue.one(), SkeinValue.rational(2)
    basis = kernel_basis([[one, two], [two, SkeinValue.rational(4)]], 2)
    assert basis == [[SkeinValue.rational(-2), one]]


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        solve_kernel(-1)


def test_offdiagonal_certificate():
    entries = offdiagonal_certificate(2)
    assert [(entry.lam, entry.mu) for entry in entries] == [(TWO, ONE_ONE), (ONE_ONE, TWO)]
    first = entries[0].eigenvalue
    q_inv = HalfLaurent.monomial(0, -2)
    assert first == FramedScalar.of(Z_VALUE * SkeinValue(Q - q_inv), (0, 1, 1))
    assert len(offdiagonal_certificate(3)) == 6
    with pytest.raises(ValueError):
        offdiagonal_certificate(0)


def test_normalize_unknot():
    result = normalize_unknot(4)
    for lam in partitions_up_to(4):
        assert result.coefficients[lam] == gamma_power(lam.size)
    assert result.psi.is_diagonal()
    assert len(result.branches) == 4
    assert result.branches[0].consistent


@pytest.mark.parametrize("n", range(7))
def test_normalized_solution_is_annihilated(n):
    psi = normalize_unknot(n).psi
    assert len(psi.coefficients) == len(partitions_up_to(n))
    assert ov_operator_apply(psi).identify().is_zero()


def test_conjugated_closures_are_contradictory():
    contradiction = normalize_unknot(4).contradiction()
    assert contradiction is not None
    assert contradiction.first == contradiction.second == Orientation.CONJUGATED
    assert contradiction.witness == TWO
    assert contradiction.non_monomial_in_both
    assert contradiction.first_candidate.depends_on_a()
    # same rational function, read in a₁ on one side and a₂ on the other
    assert contradiction.first_candidate == contradiction.second_candidate


def test_only_standard_closures_are_consistent():
    result = normalize_unknot(3)
    assert [branch.consistent for branch in result.branches] == [True, False, False, False]
    assert [(branch.first, branch.second) for branch in result.branches] == [
        (Orientation.STANDARD, Orientation.STANDARD),
        (Orientation.STANDARD, Orientation.CONJUGATED),
        (Orientation.CONJUGATED, Orientation.STANDARD),
        (Orientation.CONJUGATED, Orientation.CONJUGATED),
    ]


def test_degree_one_has_no_contradiction():
    assert normalize_unknot(1).contradiction() is None


def test_framing_constraint():
    constraint = framing_constraint()
    assert constraint.holds
    assert constraint.gamma_first == FramedScalar.of(1, A2_TAG)
    assert constraint.gamma_second == FramedScalar.of(-1, A1_TAG)


def test_unknot_partition_function():
    result = partition_function(LinkName.UNKNOT, 2)
    assert result.coefficients[EMPTY].is_one()
    for lam in partitions_up_to(2):
        assert result.coefficients[lam] == quantum_dimension(lam)
    assert result.cross_checked == {BOX: True, TWO: True, ONE_ONE: True}
    assert all(monomial.is_one() for monomial in result.framing_monomials.values())


def test_hopf_partition_function():
    result = partition_function(LinkName.HOPF, 2)
    assert result.coefficients[EMPTY] == UNKNOT
    assert result.coefficients[BOX] == UNKNOT * UNKNOT + Z_VALUE * SkeinValue(HalfLaurent.monomial(1, 0)) * UNKNOT
    assert result.coefficients[TWO] == meridian_eigenvalue(TWO) * quantum_dimension(TWO)
    assert all(result.cross_checked.values())
    assert len(result.cross_checked) == 3


def test_conjugated_partition_function():
    standard = partition_function(LinkName.UNKNOT, 3)
    conjugated = partition_function(LinkName.UNKNOT, 3, Orientation.CONJUGATED)
    for lam in partitions_up_to(3):
        assert conjugated.coefficients[lam] == standard.coefficients[conjugate(lam)]
    assert conjugated.cross_checked == {}


def test_partition_function_scope():
    with pytest.raises(ScopeLimitError):
        partition_function(LinkName.HOPF, 3)
    with pytest.raises(ScopeLimitError):
        partition_function("trefoil", 1)
    with pytest.raises(ValueError):
        partition_function(LinkName.UNKNOT, -1)
