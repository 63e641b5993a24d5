"""
Named checks of every algebraic identity the engine relies on.

Each check takes a ``CheckContext`` and returns None on success or a witness
string describing the first mismatch. ``run_all`` runs the checks on a thread
pool and returns one ``CheckReport`` per check in a fixed order.
"""

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from db.database import get_memo_store
from models.options import CheckStatus, Orientation
from models.verification import CheckReport
from services.annulus_skein import (
    AnnulusElement,
    build_psi,
    close_factor,
    framing_eigenvalue,
    gamma_power,
    meridian_apply,
    meridian_eigenvalue,
    ov_operator_apply,
    quantum_dimension,
)
from services.coefficients import A, HalfLaurent, SkeinValue, UNKNOT, Z, Z_VALUE
from services.combinatorics import (
    Partition,
    cauchy_check,
    character,
    conjugate,
    content_polynomial,
    partitions,
    partitions_up_to,
)
from services.homfly_engine import BraidWord, SkeinReducer, colored_homfly, label_idempotents, meridian_ratio
from services.ov_solver import HOPF_BRAID, UNKNOT_BRAID, framing_constraint, normalize_unknot, solve_kernel
from settings.config import settings
from utils.exceptions import ScopeLimitError

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

EIGENBASIS_SIZE = 8
KERNEL_DEGREE_LIMIT = 4
CONFLUENCE_MAX_CROSSINGS = 8
SMALL_COLORS = (Partition((1,)), Partition((2,)), Partition((1, 1)))
TWO_BOX_COLORS = (Partition((2,)), Partition((1, 1)))


@dataclass(frozen=True)
class SkeinModel:
    """Elementary inputs of the checks; replace one to build a negative control."""

    left_eigenvalue: Callable[[Partition], SkeinValue] = meridian_eigenvalue
    right_eigenvalue: Callable[[Partition], SkeinValue] = meridian_eigenvalue
    content_polynomial: Callable[[Partition], HalfLaurent] = content_polynomial
    quantum_dimension: Callable[[Partition, Orientation], SkeinValue] = quantum_dimension
    character: Callable[[Partition, Partition], int] = character
    framing_eigenvalue: Callable[[Partition], SkeinValue] = framing_eigenvalue
    skein_step: HalfLaurent = Z
    kink: HalfLaurent = A


@dataclass
class CheckContext:
    degree: int
    seed: int
    model: SkeinModel = field(default_factory=SkeinModel)
    trials: int = field(default_factory=lambda: settings.BATTERY_TRIALS)
    max_strands: int = field(default_factory=lambda: settings.BATTERY_MAX_STRANDS)
    max_crossings: int = field(default_factory=lambda: settings.BATTERY_MAX_CROSSINGS)


Check = Callable[[CheckContext], Optional[str]]


def check_meridian_diagonal(ctx: CheckContext) -> Optional[str]:
    """The meridian operator is diagonal with eigenvalue ○ + a z c_λ, all eigenvalues distinct."""
    seen = {}
    for lam in partitions_up_to(max(ctx.degree, EIGENBASIS_SIZE)):
        image = meridian_apply(AnnulusElement.basis(lam), ctx.model.left_eigenvalue)
        expected = UNKNOT + SkeinValue(A * Z * ctx.model.content_polynomial(lam))
        if set(image.coefficients) != {lam} or image.coefficients[lam] != expected:
            return f"W_{lam} maps to {image!r}, expected ({expected})·W_{lam}"
        eigenvalue = image.coefficients[lam]
        if eigenvalue in seen:
            return f"W_{seen[eigenvalue]} and W_{lam} share the eigenvalue {eigenvalue}"
        seen[eigenvalue] = lam
    return None


def check_dimension_conjugation(ctx: CheckContext) -> Optional[str]:
    dimension = ctx.model.quantum_dimension
    for lam in partitions_up_to(max(ctx.degree, EIGENBASIS_SIZE)):
        lhs = dimension(conjugate(lam), Orientation.STANDARD)
        rhs = dimension(lam, Orientation.CONJUGATED)
        if lhs != rhs:
            return f"<W_{conjugate(lam)}> = {lhs} but conjugated <W_{lam}> = {rhs}"
    return None


def check_cauchy_identity(ctx: CheckContext) -> Optional[str]:
    if not cauchy_check(ctx.degree, ctx.model.character):
        return f"Σ s_λ⊗s_λ differs from exp(Σ p_n⊗p_n/n) below degree {ctx.degree + 1}"
    return None


def check_ov_annihilation(ctx: CheckContext) -> Optional[str]:
    image = ov_operator_apply(
        build_psi(ctx.degree), ctx.model.left_eigenvalue, ctx.model.right_eigenvalue
    ).identify()
    for (lam, mu), coeff in image.items():
        return f"coefficient of W_{lam}⊗W_{mu} is {coeff!r}"
    return None


def check_kernel_dimensions(ctx: CheckContext) -> Optional[str]:
    for d in range(min(ctx.degree, KERNEL_DEGREE_LIMIT) + 1):
        kernel = solve_kernel(d, ctx.model.left_eigenvalue, ctx.model.right_eigenvalue)
        if len(kernel) != len(partitions(d)):
            return f"kernel at bidegree ({d}, {d}) has dimension {len(kernel)}, expected {len(partitions(d))}"
        for vector in kernel:
            if not vector.is_diagonal() or len(vector.coefficients) != 1:
                return f"kernel vector {vector!r} at degree {d} is not a single diagonal term"
    return None


def check_unknot_normalization(ctx: CheckContext) -> Optional[str]:
    result = normalize_unknot(ctx.degree, ctx.model.quantum_dimension)
    for lam, coeff in result.coefficients.items():
        if coeff != gamma_power(lam.size):
            return f"n_{lam} = {coeff!r}, expected γ^{lam.size}"

    closed = close_factor(result.psi, 1, Orientation.STANDARD, quantum_dimension)
    for lam in partitions_up_to(ctx.degree):
        expected = gamma_power(lam.size) * quantum_dimension(lam, Orientation.STANDARD)
        if closed.get(lam) != expected:
            return f"closing the first factor gives {closed.get(lam)!r} on W_{lam}, expected {expected!r}"

    if ctx.degree >= 2:
        contradiction = result.contradiction()
        if contradiction is None or not contradiction.non_monomial_in_both:
            return "conjugated closures on both factors were not reported inconsistent"
    if not framing_constraint().holds:
        return "a₂γ₁ + a₁γ₂ does not vanish"
    return None


def check_cabled_unknot(ctx: CheckContext) -> Optional[str]:
    for lam in SMALL_COLORS:
        colored = colored_homfly(UNKNOT_BRAID, lam)
        value = colored.value / colored.framing_monomial
        expected = ctx.model.quantum_dimension(lam, Orientation.STANDARD)
        if value != expected:
            return f"cabled unknot colored {lam} is {value}, expected {expected}"
    return None


def check_framing_eigenvalue(ctx: CheckContext) -> Optional[str]:
    """A +1-framed unknot colored λ picks up exactly a^{|λ|} q^{Σ content}."""
    kinked = BraidWord(2, (1,))
    for lam in SMALL_COLORS:
        colored = colored_homfly(kinked, lam)
        expected = ctx.model.framing_eigenvalue(lam) * ctx.model.quantum_dimension(lam, Orientation.STANDARD)
        if colored.value != expected:
            return f"framed unknot colored {lam} is {colored.value}, expected {expected}"
    return None


def check_hopf_eigenvalue(ctx: CheckContext) -> Optional[str]:
    labels = label_idempotents()
    for lam in TWO_BOX_COLORS:
        eigenvalue = ctx.model.left_eigenvalue(lam)
        ratio = meridian_ratio(labels[lam])
        if ratio != eigenvalue:
            return f"meridian on the idempotent {lam} gives {ratio}, expected {eigenvalue}"
        colored = colored_homfly(HOPF_BRAID, lam, components=[0])
        value = colored.value / colored.framing_monomial
        expected = eigenvalue * ctx.model.quantum_dimension(lam, Orientation.STANDARD)
        if value != expected:
            return f"Hopf link colored {lam} is {value}, expected {expected}"
    return None


def check_content_injectivity(ctx: CheckContext) -> Optional[str]:
    seen = {}
    for lam in partitions_up_to(settings.INJECTIVITY_MAX_SIZE):
        key = ctx.model.content_polynomial(lam)
        if key in seen:
            return f"{seen[key]} and {lam} share the content polynomial {key}"
        seen[key] = lam
    return None


def _inverse(word: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(-letter for letter in reversed(word))


def _random_word(rng: random.Random, strands: int, length: int) -> Tuple[int, ...]:
    if strands < 2:
        return ()
    return tuple(rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length))


def _reducer(ctx: CheckContext, rng: Optional[random.Random] = None) -> SkeinReducer:
    return SkeinReducer(memo=get_memo_store(), rng=rng, step=ctx.model.skein_step, kink=ctx.model.kink)


def _battery_trial(rng: random.Random, ctx: CheckContext) -> Optional[str]:
    kinds = ["conjugation", "stabilization", "skein_triple", "confluence"]
    if ctx.max_strands >= 3:
        kinds.append("braid_relation")
    if ctx.max_strands >= 4:
        kinds.append("commutation")
    kind = rng.choice(kinds)
    reducer = _reducer(ctx)

    if kind == "commutation":
        strands = rng.randint(4, ctx.max_strands)
        word = _random_word(rng, strands, rng.randint(0, max(ctx.max_crossings - 2, 0)))
        i = rng.randint(1, strands - 3)
        j = rng.randint(i + 2, strands - 1)
        x, y = rng.choice((1, -1)) * i, rng.choice((1, -1)) * j
        p = rng.randint(0, len(word))
        first = BraidWord(strands, word[:p] + (x, y) + word[p:])
        second = BraidWord(strands, word[:p] + (y, x) + word[p:])
        lhs, rhs = reducer.evaluate(first), reducer.evaluate(second)
    elif kind == "braid_relation":
        strands = rng.randint(3, ctx.max_strands)
        word = _random_word(rng, strands, rng.randint(0, max(ctx.max_crossings - 3, 0)))
        i = rng.randint(1, strands - 2)
        sign = rng.choice((1, -1))
        p = rng.randint(0, len(word))
        first = BraidWord(strands, word[:p] + (sign * i, sign * (i + 1), sign * i) + word[p:])
        second = BraidWord(strands, word[:p] + (sign * (i + 1), sign * i, sign * (i + 1)) + word[p:])
        lhs, rhs = reducer.evaluate(first), reducer.evaluate(second)
    elif kind == "conjugation":
        # conjugated word is resolved as written
        strands = rng.randint(2, ctx.max_strands)
        g = _random_word(rng, strands, rng.randint(1, 3))
        word = _random_word(rng, strands, rng.randint(0, max(ctx.max_crossings - 2 * len(g), 0)))
        first = BraidWord(strands, g + word + _inverse(g))
        lhs, rhs = reducer.evaluate_unreduced(first), reducer.evaluate(BraidWord(strands, word))
    elif kind == "stabilization":
        strands = rng.randint(1, ctx.max_strands - 1)
        word = _random_word(rng, strands, rng.randint(0, max(ctx.max_crossings - 1, 0)))
        sign = rng.choice((1, -1))
        first = BraidWord(strands + 1, word + (sign * strands,))
        lhs = reducer.evaluate_unreduced(first)
        rhs = SkeinValue(A ** sign) * reducer.evaluate(BraidWord(strands, word))
    elif kind == "skein_triple":
        strands = rng.randint(2, ctx.max_strands)
        word = _random_word(rng, strands, rng.randint(0, max(ctx.max_crossings - 1, 0)))
        i = rng.randint(1, strands - 1)
        p = rng.randint(0, len(word))
        first = BraidWord(strands, word[:p] + (i,) + word[p:])
        second = BraidWord(strands, word[:p] + (-i,) + word[p:])
        lhs = reducer.evaluate(first) - reducer.evaluate(second)
        rhs = Z_VALUE * reducer.evaluate(BraidWord(strands, word))
    else:
        strands = rng.randint(1, ctx.max_strands)
        word = _random_word(rng, strands, rng.randint(0, min(ctx.max_crossings, CONFLUENCE_MAX_CROSSINGS)))
        first = BraidWord(strands, word)
        lhs = _reducer(ctx, random.Random(rng.getrandbits(32))).evaluate(first)
        rhs = reducer.evaluate(first)

    if lhs != rhs:
        return f"{kind} fails on {first}: {lhs} != {rhs}"
    return None


def check_skein_battery(ctx: CheckContext) -> Optional[str]:
    rng = random.Random(ctx.seed)
    for trial in range(ctx.trials):
        witness = _battery_trial(rng, ctx)
        if witness is not None:
            return f"trial {trial}: {witness}"
    return None


CHECKS: List[Tuple[str, Check]] = [
    ("meridian_diagonal", check_meridian_diagonal),
    ("dimension_conjugation", check_dimension_conjugation),
    ("cauchy_identity", check_cauchy_identity),
    ("ov_annihilation", check_ov_annihilation),
    ("kernel_dimensions", check_kernel_dimensions),
    ("unknot_normalization", check_unknot_normalization),
    ("cabled_unknot", check_cabled_unknot),
    ("framing_eigenvalue", check_framing_eigenvalue),
    ("hopf_eigenvalue", check_hopf_eigenvalue),
    ("skein_battery", check_skein_battery),
    ("content_injectivity", check_content_injectivity),
]


def run_check(name: str, check: Check, ctx: CheckContext) -> CheckReport:
    started = time.perf_counter()
    try:
        witness = check(ctx)
    except Exception as e:
        logger.error(f"Check {name} raised: {str(e)}")
        witness = f"{type(e).__name__}: {str(e)}"
    runtime = time.perf_counter() - started
    status = CheckStatus.PASS if witness is None else CheckStatus.FAIL
    if witness is None:
        logger.info(f"Check {name} passed in {runtime:.3f}s")
    else:
        logger.warning(f"Check {name} failed: {witness}")
    return CheckReport(name=name, status=status, witness=witness, runtime=runtime, degree=ctx.degree, seed=ctx.seed)


def run_all(
    degree: int,
    seed: Optional[int] = None,
    model: Optional[SkeinModel] = None,
    trials: Optional[int] = None,
) -> List[CheckReport]:
    """
    Run every named check at truncation degree ``degree``.

    Args:
        degree: truncation degree, at most MAX_VERIFY_DEGREE
        seed: seed of the randomized battery
        model: elementary inputs, replaced in negative controls
        trials: number of battery identities

    Returns:
        Reports in the order of CHECKS

    Raises:
        ScopeLimitError: if ``degree`` exceeds the configured maximum
    """
    if degree > settings.MAX_VERIFY_DEGREE:
        raise ScopeLimitError(f"Verification degree {degree} exceeds the maximum {settings.MAX_VERIFY_DEGREE}")
    if degree < 0:
        raise ValueError(f"Degree must be non-negative, got {degree}")
    ctx = CheckContext(
        degree=degree,
        seed=settings.DEFAULT_SEED if seed is None else seed,
        model=model or SkeinModel(),
    )
    if trials is not None:
        ctx.trials = trials

    logger.info(f"Running {len(CHECKS)} checks at degree {degree} with seed {ctx.seed}")
    with ThreadPoolExecutor(max_workers=settings.VERIFY_WORKERS) as pool:
        futures = [pool.submit(run_check, name, check, ctx) for name, check in CHECKS]
        reports = [future.result() for future in futures]
    failed = [report.name for report in reports if not report.passed]
    logger.info(f"Verification finished: {len(reports) - len(failed)} passed, {len(failed)} failed")
    return reports
