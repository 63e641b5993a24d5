import pytest
from hypothesis import given
from hypothesis import strategies as st

from models.options import Orientation
from services.annulus_skein import (
    A1_TAG,
    A2_TAG,
    AnnulusElement,
    FramedScalar,
    SignedMonomial,
    TensorElement,
    build_psi,
    close_factor,
    eval_s3,
    framing_eigenvalue,
    gamma_power,
    meridian_apply,
    meridian_eigenvalue,
    ov_operator_apply,
    quantum_dimension,
)
from services.coefficients import A, HalfLaurent, SkeinValue, UNKNOT, Z_VALUE
from services.combinatorics import EMPTY, Partition, conjugate, partitions, partitions_up_to

TWO = Partition((2,))
ONE_ONE = Partition((1, 1))
BOX = Partition((1,))


def test_meridian_eigenvalues():
    assert meridian_eigenvalue(EMPTY) == UNKNOT
    assert meridian_eigenvalue(BOX) == UNKNOT + Z_VALUE * SkeinValue(A)


def test_meridian_is_diagonal():
    x = AnnulusElement({TWO: 1, ONE_ONE: SkeinValue(A)})
    image = meridian_apply(x)
    assert image.support() == x.support()
    assert image.coefficients[ONE_ONE] == SkeinValue(A) * meridian_eigenvalue(ONE_ONE)


def test_quantum_dimensions():
    assert quantum_dimension(EMPTY) == 1
    assert quantum_dimension(BOX) == UNKNOT
    # W_(1)^2 = W_(2) + W_(1,1)
    assert eval_s3(AnnulusElement({TWO: 1, ONE_ONE: 1})) == UNKNOT * UNKNOT


@given(st.integers(0, 5).flatmap(lambda n: st.sampled_from(partitions(n))))
def test_conjugated_orientation_matches_transpose(lam):
    assert quantum_dimension(conjugate(lam), Orientation.STANDARD) == quantum_dimension(lam, Orientation.CONJUGATED)


def test_framing_eigenvalues():
    assert framing_eigenvalue(TWO) == SkeinValue(HalfLaurent.monomial(2, 2))
    assert framing_eigenvalue(ONE_ONE) == SkeinValue(HalfLaurent.monomial(2, -2))
    assert framing_eigenvalue(EMPTY).is_one()


def test_framed_scalar_identification():
    difference = FramedScalar.of(1, A1_TAG) - FramedScalar.of(1, A2_TAG)
    assert not difference.is_zero()
    assert difference.identify().is_zero()
    assert FramedScalar.of(2, (1, 1, 1)).identify() == FramedScalar.of(SkeinValue(A * A * 2), (1, 0, 0))


def test_framed_scalar_rejects_tagged_scalar():
    with pytest.raises(ValueError):
        gamma_power(1).scalar()


def test_signed_monomial_powers():
    assert SignedMonomial(-1, 1, 0).power(3) == FramedScalar.of(-1, (0, 3, 0))
    assert gamma_power(2, SignedMonomial(1, 0, 1)) == FramedScalar.of(1, (0, 0, 2))
    with pytest.raises(ValueError):
        SignedMonomial(2)


def test_build_psi():
    psi = build_psi(1)
    assert psi.support() == [(EMPTY, EMPTY), (BOX, BOX)]
    assert psi.coefficients[(BOX, BOX)] == gamma_power(1)
    assert psi.is_diagonal()
    with pytest.raises(ValueError):
        build_psi(-1)


@pytest.mark.parametrize("n", range(7))
def test_diagonal_psi_is_annihilated(n):
    assert ov_operator_apply(build_psi(n)).identify().is_zero()


def test_off_diagonal_terms_survive():
    image = ov_operator_apply(TensorElement.basis(TWO, ONE_ONE)).identify()
    assert image.support() == [(TWO, ONE_ONE)]


def test_annihilation_needs_identified_framings():
    assert not ov_operator_apply(build_psi(1)).is_zero()


def test_close_factor():
    closed = close_factor(build_psi(2), 1)
    for lam in partitions_up_to(2):
        assert closed[lam] == gamma_power(lam.size) * quantum_dimension(lam)
    with pytest.raises(ValueError):
        close_factor(build_psi(1), 3)


def test_close_factor_in_conjugated_orientation():
    closed = close_factor(build_psi(2), 2, Orientation.CONJUGATED)
    assert closed[TWO] == gamma_power(2) * quantum_dimension(ONE_ONE)
