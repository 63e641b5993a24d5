import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from db.database import MemoStore
from models.options import Normalization
from services.annulus_skein import framing_eigenvalue, meridian_eigenvalue, quantum_dimension
from services.coefficients import A, A_INV, ONE, Q, SkeinValue, UNKNOT, Z_VALUE
from services.combinatorics import Partition
from services.homfly_engine import (
    BraidWord,
    CableExpression,
    SkeinReducer,
    cable,
    closure_value,
    colored_homfly,
    component_count,
    homfly,
    homfly_report,
    label_idempotents,
    markov_normalize,
    meridian_ratio,
    random_braid,
    two_strand_idempotents,
)
from utils.exceptions import ParseError, ReductionLimitError, ScopeLimitError

TWO = Partition((2,))
ONE_ONE = Partition((1, 1))
BOX = Partition((1,))

O = UNKNOT
a = SkeinValue(A)
z = Z_VALUE

HOPF = BraidWord(2, (1, 1))
TREFOIL = BraidWord(2, (1, 1, 1))
FIGURE_EIGHT = BraidWord(3, (1, -2, 1, -2))


def test_unknot_and_kinks():
    assert homfly(BraidWord(1)) == O
    assert homfly(BraidWord(2, (1,))) == a * O
    assert homfly(BraidWord(2, (-1,))) == SkeinValue(A_INV) * O


def test_unlinks():
    assert homfly(BraidWord(2)) == O * O
    assert homfly(BraidWord.parse("n=2; w=1,-1")) == O * O
    assert homfly(BraidWord(3, (2, 1, -1, -2))) == O ** 3


def test_hopf_link():
    assert homfly(HOPF) == O * O + z * a * O
    assert homfly(BraidWord(2, (-1, -1))) == O * O - z * SkeinValue(A_INV) * O


def test_trefoil():
    # σ³ = z + (1 + z²)σ in the two-strand algebra
    assert homfly(TREFOIL) == z * O * O + (1 + z * z) * a * O


def test_figure_eight():
    a_inv = SkeinValue(A_INV)
    assert FIGURE_EIGHT.writhe == 0
    assert homfly(FIGURE_EIGHT) == (a * a - 1 + a_inv * a_inv - z * z) * O


def test_figure_eight_is_amphichiral():
    mirror = BraidWord(3, tuple(-letter for letter in FIGURE_EIGHT.word))
    assert homfly(mirror) == homfly(FIGURE_EIGHT)


def test_skein_relation():
    word = (1, -2, 1)
    for i in (1, 2):
        plus = homfly(BraidWord(3, word + (i,)))
        minus = homfly(BraidWord(3, word + (-i,)))
        assert plus - minus == z * homfly(BraidWord(3, word))


def test_braid_relation_and_conjugation():
    assert homfly(BraidWord(3, (1, 2, 1, 1))) == homfly(BraidWord(3, (2, 1, 2, 1)))
    assert homfly(BraidWord(3, (1, 1, 2, -1))) == homfly(BraidWord(3, (2, 1, 1, -1)))
    assert homfly(BraidWord(4, (1, 3, -2))) == homfly(BraidWord(4, (3, 1, -2)))


def test_stabilization_multiplies_by_a():
    assert homfly(BraidWord(3, (1, 1, 2))) == a * homfly(HOPF)
    assert homfly(BraidWord(3, (1, 1, -2))) == SkeinValue(A_INV) * homfly(HOPF)


def test_resolution_as_written():
    reducer = SkeinReducer()
    assert reducer.evaluate_unreduced(BraidWord(2, (1, -1))) == O * O
    assert reducer.evaluate_unreduced(BraidWord(3, (2, 1, 1, 1, -2))) == homfly(BraidWord(3, (1, 1, 1)))
    assert reducer.evaluate_unreduced(BraidWord(3, (1, 1, 2))) == a * homfly(HOPF)
    assert reducer.evaluate_unreduced(BraidWord(1)) == O


@given(st.integers(0, 2**32 - 1))
def test_conjugates_resolved_as_written_agree(seed):
    rng = random.Random(seed)
    braid = random_braid(rng, max_strands=4, max_crossings=5, min_strands=2)
    g = tuple(rng.choice((1, -1)) * rng.randint(1, braid.strands - 1) for _ in range(rng.randint(1, 2)))
    inverse = tuple(-letter for letter in reversed(g))
    conjugate = BraidWord(braid.strands, g + braid.word + inverse)
    assert SkeinReducer().evaluate_unreduced(conjugate) == homfly(braid)


def test_skein_constants_can_be_replaced():
    twisted = SkeinReducer(kink=A * Q)
    assert twisted.evaluate_unreduced(BraidWord(2, (1,))) == SkeinValue(A * Q) * O
    assert twisted.evaluate_unreduced(BraidWord(2, (1,))) != a * O
    assert SkeinReducer(memo=MemoStore(10), kink=A * Q).memo is None
    with pytest.raises(ValueError):
        SkeinReducer(kink=A + Q)


@given(st.integers(0, 2**32 - 1))
def test_random_resolution_order_agrees(seed):
    braid = random_braid(random.Random(seed), max_strands=4, max_crossings=7)
    assert homfly(braid, rng=random.Random(seed + 1)) == homfly(braid)


def test_reduction_limit():
    with pytest.raises(ReductionLimitError) as excinfo:
        SkeinReducer(max_states=1).evaluate(TREFOIL)
    assert excinfo.value.limit == 1
    assert isinstance(excinfo.value, ScopeLimitError)


def test_braid_parsing():
    braid = BraidWord.parse("n=3; w=1, -2,1")
    assert braid == BraidWord(3, (1, -2, 1))
    assert str(braid) == "n=3; w=1,-2,1"
    assert BraidWord.parse("n=1; w=") == BraidWord(1)


@pytest.mark.parametrize(
    "text, position",
    [
        ("n=2; w=1,x", 9),
        ("strands=2", 0),
        ("n=2; w=2", 7),
        ("n=2; w=1,,1", 9),
        ("n=2; w=1,", 9),
        ("n=3; w=1, ,2", 10),
    ],
)
def test_braid_parse_errors(text, position):
    with pytest.raises(ParseError) as excinfo:
        BraidWord.parse(text)
    assert excinfo.value.position == position


def test_braid_validation():
    with pytest.raises(ValueError):
        BraidWord(0)
    with pytest.raises(ValueError):
        BraidWord(2, (0,))


def test_framing_report():
    framed = homfly_report(HOPF)
    assert framed.framing_monomial == a * a
    unframed = homfly_report(HOPF, Normalization.UNFRAMED)
    assert unframed.value == homfly(HOPF) / (a * a)
    assert unframed.normalization == Normalization.UNFRAMED


def test_markov_normalize():
    result = markov_normalize(BraidWord(3, (1, 1, 2)))
    assert result.braid == HOPF
    assert result.framing_factor == A

    result = markov_normalize(BraidWord(3, (1, -2)))
    assert result.braid == BraidWord(1)
    assert result.framing_factor == ONE

    result = markov_normalize(BraidWord(3, (1, -1, 2, 2)))
    assert result.braid == BraidWord(3, (2, 2))


def test_components():
    assert component_count(HOPF) == 2
    assert component_count(TREFOIL) == 1
    assert component_count(BraidWord(3, (1,))) == 2


def test_idempotents_in_the_pattern_algebra():
    positive, negative = two_strand_idempotents()
    identity = CableExpression.identity(2)
    assert (positive * positive).equals_in_algebra(positive)
    assert (negative * negative).equals_in_algebra(negative)
    assert (positive * negative).equals_in_algebra(CableExpression(2))
    assert (positive + negative).equals_in_algebra(identity)
    sigma = CableExpression.generator(2, 1)
    inverse = CableExpression.generator(2, -1)
    assert (sigma * inverse).equals_in_algebra(identity)


def test_idempotent_closures_are_quantum_dimensions():
    positive, negative = two_strand_idempotents()
    assert closure_value(positive) == quantum_dimension(TWO)
    assert closure_value(negative) == quantum_dimension(ONE_ONE)


def test_idempotent_labels():
    labels = label_idempotents()
    positive, negative = two_strand_idempotents()
    assert labels[TWO].equals_in_algebra(positive)
    assert labels[ONE_ONE].equals_in_algebra(negative)
    for lam in (TWO, ONE_ONE):
        assert meridian_ratio(labels[lam]) == meridian_eigenvalue(lam)


@pytest.mark.parametrize("lam", [BOX, TWO, ONE_ONE])
def test_colored_unknot(lam):
    result = colored_homfly(BraidWord(1), lam)
    assert result.value == quantum_dimension(lam)
    assert result.framing_monomial.is_one()


@pytest.mark.parametrize("lam", [BOX, TWO, ONE_ONE])
def test_colored_kink_picks_up_framing_eigenvalue(lam):
    result = colored_homfly(BraidWord(2, (1,)), lam)
    assert result.framing_monomial == framing_eigenvalue(lam)
    assert result.value == framing_eigenvalue(lam) * quantum_dimension(lam)


@pytest.mark.parametrize("lam", [TWO, ONE_ONE])
def test_colored_hopf_component(lam):
    result = colored_homfly(HOPF, lam, components=[0])
    assert result.components == (0,)
    assert result.value / result.framing_monomial == meridian_eigenvalue(lam) * quantum_dimension(lam)


def test_cable_with_identity_pattern():
    assert cable(TREFOIL, CableExpression.identity(1)) == homfly(TREFOIL)


def test_cable_component_range():
    with pytest.raises(ValueError):
        cable(HOPF, CableExpression.identity(1), components=[2])


def test_color_scope():
    with pytest.raises(ScopeLimitError):
        colored_homfly(BraidWord(1), Partition((3,)))
    with pytest.raises(ScopeLimitError):
        colored_homfly(BraidWord(1), Partition(()))
