import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from models.options import SymBasis
from services.coefficients import ONE, Q, HalfLaurent, SkeinValue
from services.combinatorics import (
    EMPTY,
    Partition,
    SymFunc,
    cauchy_check,
    cells,
    centralizer_size,
    character,
    conjugate,
    content_collisions,
    content_polynomial,
    orthogonality_defects,
    partitions,
    partitions_up_to,
    to_basis,
)
from utils.exceptions import ParseError

small_partitions = st.integers(0, 4).flatmap(lambda n: st.sampled_from(partitions(n)))
bases = st.sampled_from(list(SymBasis))


def test_partition_counts():
    assert [len(partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert len(partitions_up_to(8)) == 67


def test_reverse_lexicographic_order():
    assert partitions(3) == (Partition((3,)), Partition((2, 1)), Partition((1, 1, 1)))
    assert partitions_up_to(2) == [EMPTY, Partition((1,)), Partition((2,)), Partition((1, 1))]


def test_partition_parsing():
    assert Partition.parse("[3,1]") == Partition((3, 1))
    assert Partition.parse("3, 1") == Partition((3, 1))
    assert Partition.parse("[]") == EMPTY
    assert str(Partition((2, 1))) == "[2,1]"
    assert Partition((2, 1)).label() == "(2,1)"
    assert EMPTY.label() == "∅"


@pytest.mark.parametrize("text", ["[1,3]", "x", "[0]", "[2,,1]"])
def test_partition_parse_errors(text):
    with pytest.raises(ParseError):
        Partition.parse(text)


@pytest.mark.parametrize("text, position", [("[3,1", 4), ("3,1]", 0), ("  [2", 4), ("[", 1)])
def test_partition_unbalanced_brackets(text, position):
    with pytest.raises(ParseError) as excinfo:
        Partition.parse(text)
    assert excinfo.value.position == position


def test_cells_of_a_hook():
    assert [cell.content for cell in cells(Partition((3, 1)))] == [0, 1, 2, -1]
    assert [cell.hook for cell in cells(Partition((3, 1)))] == [4, 2, 1, 1]


@given(small_partitions)
def test_conjugation_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert sorted(c.content for c in cells(conjugate(lam))) == sorted(-c.content for c in cells(lam))


def test_content_polynomials():
    assert content_polynomial(Partition((2,))) == ONE + Q
    assert content_polynomial(Partition((1, 1))) == ONE + HalfLaurent.monomial(0, -2)
    assert content_polynomial(EMPTY).is_zero()


def test_content_polynomial_is_injective():
    assert content_collisions(12) == []


def test_centralizer_sizes():
    assert centralizer_size(Partition((2, 1, 1))) == 4
    assert centralizer_size(Partition((3,))) == 3
    assert sum(math.factorial(4) // centralizer_size(mu) for mu in partitions(4)) == math.factorial(4)


def test_characters():
    assert character(Partition((2, 1)), Partition((1, 1, 1))) == 2
    assert character(Partition((2, 1)), Partition((3,))) == -1
    assert character(Partition((2, 1)), Partition((2, 1))) == 0
    assert character(Partition((1, 1, 1)), Partition((2, 1))) == -1
    assert character(Partition((3, 1)), Partition((2, 2))) == -1
    with pytest.raises(ValueError):
        character(Partition((2,)), Partition((1,)))


@pytest.mark.parametrize("n", range(7))
def test_dimensions_square_sum(n):
    identity = Partition((1,) * n)
    assert sum(character(lam, identity) ** 2 for lam in partitions(n)) == math.factorial(n)


def test_character_orthogonality():
    assert orthogonality_defects(6) == []


def test_jacobi_trudi_expansion():
    schur = SymFunc.basis_element(SymBasis.SCHUR, Partition((2, 1)))
    assert to_basis(SymBasis.HOMOGENEOUS, schur).terms == {
        Partition((2, 1)): SkeinValue.one(),
        Partition((3,)): SkeinValue.rational(-1),
    }


def test_elementary_is_a_single_column():
    elementary = SymFunc.basis_element(SymBasis.ELEMENTARY, Partition((2,)))
    assert to_basis(SymBasis.SCHUR, elementary) == SymFunc.basis_element(SymBasis.SCHUR, Partition((1, 1)))


def test_power_sum_in_schur():
    power = SymFunc.basis_element(SymBasis.POWERSUM, Partition((3,)))
    assert to_basis(SymBasis.SCHUR, power).terms == {
        Partition((3,)): SkeinValue.one(),
        Partition((2, 1)): SkeinValue.rational(-1),
        Partition((1, 1, 1)): SkeinValue.one(),
    }


def test_symfunc_dict_form():
    payload = to_basis(SymBasis.SCHUR, SymFunc.basis_element(SymBasis.POWERSUM, Partition((3,)))).to_dict()
    assert payload["basis"] == "schur"
    assert [term["partition"] for term in payload["terms"]] == [[3], [2, 1], [1, 1, 1]]
    assert [SkeinValue.parse(term["coeff"]) for term in payload["terms"]] == [
        SkeinValue.one(),
        SkeinValue.rational(-1),
        SkeinValue.one(),
    ]


@given(small_partitions, bases, bases)
def test_change_of_basis_is_invertible(lam, source, target):
    f = SymFunc.basis_element(source, lam)
    assert to_basis(source, to_basis(target, f)) == f


def test_sum_converts_to_left_basis():
    h = SymFunc.basis_element(SymBasis.HOMOGENEOUS, Partition((2,)))
    e = SymFunc.basis_element(SymBasis.ELEMENTARY, Partition((1, 1)))
    total = to_basis(SymBasis.SCHUR, h + e)
    # h_2 + h_1^2 = 2 s_2 + s_11
    assert total.terms == {Partition((2,)): SkeinValue.rational(2), Partition((1, 1)): SkeinValue.one()}


def test_cauchy_identity():
    assert cauchy_check(6)


def test_cauchy_identity_detects_wrong_characters():
    assert not cauchy_check(3, lambda lam, mu: 1)
