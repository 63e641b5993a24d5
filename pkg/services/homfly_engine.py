"""
Framed HOMFLYPT values of braid closures and their cables.

Skein conventions (blackboard framing):

- positive crossing - negative crossing = z · smoothing, z = q^(1/2) - q^(-1/2)
- positive kink = a · strand, negative kink = a^(-1) · strand
- disjoint unknot = ○, empty link = 1

Reduction works on descending diagrams. The components of the closure are
ordered and given base points; a crossing is wrong when the first strand to
reach it while walking the components in order is the under strand. Switching
every wrong crossing yields a split union of unknots whose value is
a^{self-writhe} ○^{components}; each switch costs ±z times the value of the word
with that crossing smoothed. Intermediate values are polynomials in ○ with
coefficients in a and q^(1/2); ○ is only substituted at the very end.
"""

import logging
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from db.database import MemoStore, get_memo_store
from models.options import Normalization
from services.annulus_skein import framing_eigenvalue, meridian_eigenvalue
from services.coefficients import (
    A,
    FormalPolynomial,
    HalfLaurent,
    ONE,
    Q_HALF,
    Q_HALF_INV,
    SkeinValue,
    UNKNOT,
    Z,
    Z_VALUE,
)
from services.combinatorics import Partition
from settings.config import settings
from utils.exceptions import LabelingError, ParseError, ReductionLimitError, ScopeLimitError

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass(frozen=True)
class BraidWord:
    """Braid on ``strands`` strands; letter ±i is σ_i^{±1}."""

    strands: int
    word: Word = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError(f"A braid needs at least one strand, got {self.strands}")
        word = tuple(int(letter) for letter in self.word)
        for letter in word:
            if letter == 0 or abs(letter) >= self.strands:
                raise ValueError(f"Generator {letter} out of range for {self.strands} strands")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        """Read the form "n=2; w=1,-1"."""
        match = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*;\s*w\s*=\s*(.*?)\s*", text)
        if not match:
            raise ParseError("Expected 'n=<strands>; w=<letters>'", 0, text)
        strands = int(match.group(1))
        body = match.group(2)
        letters: List[int] = []
        if body:
            offset = match.start(2)
            for piece in body.split(","):
                token = piece.strip()
                if not re.fullmatch(r"[+-]?\d+", token):
                    position = offset + len(piece) - len(piece.lstrip())
                    raise ParseError(f"Malformed generator {token!r}", position, text)
                letters.append(int(token))
                offset += len(piece) + 1
        try:
            return cls(strands, tuple(letters))
        except ValueError as e:
            raise ParseError(str(e), match.start(2), text)

    @property
    def writhe(self) -> int:
        return sum(1 if letter > 0 else -1 for letter in self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return f"n={self.strands}; w=" + ",".join(str(letter) for letter in self.word)


@dataclass(frozen=True)
class HomflyResult:
    value: SkeinValue
    framing_monomial: SkeinValue
    normalization: Normalization


@dataclass(frozen=True)
class MarkovResult:
    braid: BraidWord
    framing_factor: HalfLaurent


@dataclass
class CableExpression:
    """Linear combination of braid patterns on a fixed number of strands."""

    strands: int
    terms: Dict[Word, SkeinValue] = field(default_factory=dict)

    def __post_init__(self):
        cleaned: Dict[Word, SkeinValue] = {}
        for word, coeff in self.terms.items():
            BraidWord(self.strands, word)
            coeff = coeff if isinstance(coeff, SkeinValue) else SkeinValue(coeff)
            total = cleaned.get(tuple(word), SkeinValue.zero()) + coeff
            cleaned[tuple(word)] = total
        self.terms = {word: coeff for word, coeff in cleaned.items() if not coeff.is_zero()}

    @classmethod
    def identity(cls, strands: int) -> "CableExpression":
        return cls(strands, {(): SkeinValue.one()})

    @classmethod
    def generator(cls, strands: int, letter: int) -> "CableExpression":
        return cls(strands, {(letter,): SkeinValue.one()})

    def __add__(self, other: "CableExpression") -> "CableExpression":
        self._check_strands(other)
        merged = dict(self.terms)
        for word, coeff in other.terms.items():
            merged[word] = merged.get(word, SkeinValue.zero()) + coeff
        return CableExpression(self.strands, merged)

    def __sub__(self, other: "CableExpression") -> "CableExpression":
        return self + other.scale(SkeinValue.rational(-1))

    def scale(self, factor: SkeinValue) -> "CableExpression":
        return CableExpression(self.strands, {w: c * factor for w, c in self.terms.items()})

    def __mul__(self, other: "CableExpression") -> "CableExpression":
        """Concatenation product: ``self`` on top, then ``other``."""
        self._check_strands(other)
        product: Dict[Word, SkeinValue] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                product[w1 + w2] = product.get(w1 + w2, SkeinValue.zero()) + c1 * c2
        return CableExpression(self.strands, product)

    def _check_strands(self, other: "CableExpression") -> None:
        if other.strands != self.strands:
            raise ValueError(f"Pattern strand counts differ: {self.strands} and {other.strands}")

    def normal_form(self) -> Tuple[SkeinValue, SkeinValue]:
        """
        Coordinates (x, y) of x·1 + y·σ in the two-strand pattern algebra.

        Uses σ·σ = z·σ + 1 and σ^(-1) = σ - z. One-strand patterns return (x, 0).
        """
        if self.strands == 1:
            return self.terms.get((), SkeinValue.zero()), SkeinValue.zero()
        if self.strands != 2:
            raise ValueError("Normal forms exist for one and two strand patterns only")
        x_total, y_total = SkeinValue.zero(), SkeinValue.zero()
        for word, coeff in self.terms.items():
            x, y = SkeinValue.one(), SkeinValue.zero()
            for letter in word:
                if letter > 0:
                    x, y = y, x + y * Z_VALUE
                else:
                    x, y = y - x * Z_VALUE, x
            x_total = x_total + x * coeff
            y_total = y_total + y * coeff
        return x_total, y_total

    def equals_in_algebra(self, other: "CableExpression") -> bool:
        return self.strands == other.strands and self.normal_form() == other.normal_form()


def _free_reduce(word: Sequence[int]) -> Word:
    stack: List[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    start, end = 0, len(stack)
    while end - start >= 2 and stack[start] == -stack[end - 1]:
        start += 1
        end -= 1
    return tuple(stack[start:end])


def _minimal_rotation(word: Word) -> Word:
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def _strand_structure(strands: int, word: Word):
    """Left, right and over strand of every crossing, plus each strand's end position."""
    occupant = list(range(strands + 1))
    crossings = []
    for letter in word:
        i = abs(letter)
        left, right = occupant[i], occupant[i + 1]
        over = left if letter > 0 else right
        crossings.append((left, right, over))
        occupant[i], occupant[i + 1] = right, left
    end_position = {occupant[p]: p for p in range(1, strands + 1)}
    return crossings, end_position


def _components(strands: int, end_position: Dict[int, int]) -> List[List[int]]:
    seen: Set[int] = set()
    cycles = []
    for start in range(1, strands + 1):
        if start in seen:
            continue
        cycle = []
        strand = start
        while strand not in seen:
            seen.add(strand)
            cycle.append(strand)
            strand = end_position[strand]
        cycles.append(cycle)
    return cycles


def component_count(braid: BraidWord) -> int:
    _, end_position = _strand_structure(braid.strands, braid.word)
    return len(_components(braid.strands, end_position))


class SkeinReducer:
    """
    Evaluates braid closures by skein reduction.

    Args:
        memo: shared memo table; ignored when ``rng`` is given or the skein
            constants differ from the standard ones
        max_states: limit on recursive states of one evaluation
        rng: when set, components, base points and resolution order are random
        step: coefficient z of the smoothing in X+ - X- = z X0
        kink: factor of a positive kink
    """

    def __init__(
        self,
        memo: Optional[MemoStore] = None,
        max_states: Optional[int] = None,
        rng: Optional[random.Random] = None,
        step: HalfLaurent = Z,
        kink: HalfLaurent = A,
    ):
        if not kink.is_monomial():
            raise ValueError(f"Kink factor must be an invertible monomial, got {kink}")
        self.rng = rng
        self.step = step
        self.kink = kink
        standard = step == Z and kink == A
        self.memo = memo if rng is None and standard else None
        self.max_states = max_states if max_states is not None else settings.MAX_RESOLUTION_STATES
        self.states = 0

    def evaluate(self, braid: BraidWord) -> SkeinValue:
        self.states = 0
        polynomial = self._evaluate(braid.strands, braid.word)
        logger.debug(f"Evaluated {braid} in {self.states} states")
        return polynomial.evaluate(UNKNOT)

    def evaluate_unreduced(self, braid: BraidWord) -> SkeinValue:
        """
        Resolve the closure of ``braid`` exactly as written.

        The outermost word skips free and cyclic reduction, destabilization and
        the memo, so conjugated or stabilized words are resolved crossing by
        crossing. Smoothed subwords are evaluated as usual.
        """
        self.states = 1
        polynomial = self._resolve(braid.strands, braid.word)
        logger.debug(f"Resolved {braid} as written in {self.states} states")
        return polynomial.evaluate(UNKNOT)

    def _evaluate(self, strands: int, word: Word) -> FormalPolynomial:
        word = _free_reduce(word)
        if not word:
            return FormalPolynomial.power(strands)

        self.states += 1
        if self.states > self.max_states:
            raise ReductionLimitError(self.max_states)

        key = (strands, _minimal_rotation(word))
        if self.memo is not None:
            cached = self.memo.get(key)
            if cached is not None:
                return cached

        result = self._reduce(strands, word)
        if self.memo is not None:
            self.memo.put(key, result)
        return result

    def _reduce(self, strands: int, word: Word) -> FormalPolynomial:
        used = {abs(letter) for letter in word}
        for i in range(1, strands):
            if i not in used:
                left = tuple(letter for letter in word if abs(letter) < i)
                right = tuple(letter - i if letter > 0 else letter + i for letter in word if abs(letter) > i)
                return self._evaluate(i, left) * self._evaluate(strands - i, right)

        top = [k for k, letter in enumerate(word) if abs(letter) == strands - 1]
        if len(top) == 1:
            k = top[0]
            rest = word[k + 1:] + word[:k]
            return self._evaluate(strands - 1, rest) * (self.kink ** (1 if word[k] > 0 else -1))

        bottom = [k for k, letter in enumerate(word) if abs(letter) == 1]
        if len(bottom) == 1:
            k = bottom[0]
            rest = tuple(letter - 1 if letter > 0 else letter + 1 for letter in word[k + 1:] + word[:k])
            return self._evaluate(strands - 1, rest) * (self.kink ** (1 if word[k] > 0 else -1))

        return self._resolve(strands, word)

    def _resolve(self, strands: int, word: Word) -> FormalPolynomial:
        crossings, end_position = _strand_structure(strands, word)
        cycles = _components(strands, end_position)
        if self.rng is not None:
            self.rng.shuffle(cycles)
            rotated = []
            for cycle in cycles:
                shift = self.rng.randrange(len(cycle))
                rotated.append(cycle[shift:] + cycle[:shift])
            cycles = rotated

        by_strand: Dict[int, List[int]] = {s: [] for s in range(1, strands + 1)}
        for k, (left, right, _) in enumerate(crossings):
            by_strand[left].append(k)
            by_strand[right].append(k)

        first_visitor: Dict[int, int] = {}
        for cycle in cycles:
            for strand in cycle:
                for k in by_strand[strand]:
                    first_visitor.setdefault(k, strand)
        wrong = [k for k in first_visitor if first_visitor[k] != crossings[k][2]]
        if self.rng is not None:
            self.rng.shuffle(wrong)

        current = list(word)
        total = FormalPolynomial()
        for k in wrong:
            letter = current[k]
            smoothed = tuple(current[:k] + current[k + 1:])
            step = self.step if letter > 0 else -self.step
            total = total + self._evaluate(strands, smoothed) * step
            current[k] = -letter

        component_of = {strand: index for index, cycle in enumerate(cycles) for strand in cycle}
        self_writhe = sum(
            (1 if current[k] > 0 else -1)
            for k, (left, right, _) in enumerate(crossings)
            if component_of[left] == component_of[right]
        )
        return total + FormalPolynomial.power(len(cycles), self.kink ** self_writhe)


def homfly(braid: BraidWord, rng: Optional[random.Random] = None) -> SkeinValue:
    """
    Framed HOMFLYPT value of the blackboard-framed closure of ``braid``.

    Args:
        braid: the braid word
        rng: resolve against random base points and in random order

    Returns:
        The value in the localized scalar ring
    """
    return SkeinReducer(memo=get_memo_store(), rng=rng).evaluate(braid)


def homfly_report(braid: BraidWord, normalization: Normalization = Normalization.FRAMED) -> HomflyResult:
    """Value together with the reported framing monomial a^{writhe}."""
    framed = homfly(braid)
    monomial = SkeinValue(A ** braid.writhe)
    if Normalization(normalization) == Normalization.UNFRAMED:
        return HomflyResult(framed / monomial, monomial, Normalization.UNFRAMED)
    return HomflyResult(framed, monomial, Normalization.FRAMED)


def markov_normalize(braid: BraidWord) -> MarkovResult:
    """
    Free reduction plus repeated destabilization of a last strand with one crossing.

    Returns:
        The reduced braid and the factor a^k with homfly(braid) = a^k · homfly(reduced)
    """
    strands, word = braid.strands, _free_reduce(braid.word)
    factor = ONE
    while strands > 1:
        top = [k for k, letter in enumerate(word) if abs(letter) == strands - 1]
        if len(top) != 1:
            break
        k = top[0]
        factor = factor * (A ** (1 if word[k] > 0 else -1))
        word = _free_reduce(word[k + 1:] + word[:k])
        strands -= 1
    return MarkovResult(BraidWord(strands, word), factor)


def two_strand_idempotents() -> Tuple[CableExpression, CableExpression]:
    """
    Eigenprojections of σ in the two-strand pattern algebra.

    Returns:
        (e₊, e₋) with e₊ = (σ + q^(-1/2))/(q^(1/2) + q^(-1/2)) and
        e₋ = (q^(1/2) - σ)/(q^(1/2) + q^(-1/2))
    """
    norm = SkeinValue(Q_HALF + Q_HALF_INV)
    positive = CableExpression(2, {(1,): SkeinValue.one() / norm, (): SkeinValue(Q_HALF_INV) / norm})
    negative = CableExpression(2, {(1,): SkeinValue.rational(-1) / norm, (): SkeinValue(Q_HALF) / norm})
    return positive, negative


def closure_value(pattern: CableExpression, rng: Optional[random.Random] = None) -> SkeinValue:
    """Closure of a pattern in the unknotted solid torus, evaluated in S³."""
    total = SkeinValue.zero()
    for word, coeff in pattern.terms.items():
        total = total + coeff * homfly(BraidWord(pattern.strands, word), rng=rng)
    return total


def encircled_value(pattern: CableExpression, rng: Optional[random.Random] = None) -> SkeinValue:
    """Closure of a pattern with a meridian loop of linking number +1 around it."""
    total = SkeinValue.zero()
    for word, coeff in pattern.terms.items():
        meridian_word = _meridian_word(pattern.strands, word)
        total = total + coeff * homfly(BraidWord(pattern.strands + 1, meridian_word), rng=rng)
    return total


def _meridian_word(strands: int, word: Word) -> Word:
    # extra strand at position strands+1 winds once around all pattern strands
    down = tuple(range(strands, 0, -1))
    up = tuple(range(1, strands + 1))
    return word + down + up


def meridian_ratio(pattern: CableExpression) -> SkeinValue:
    return encircled_value(pattern) / closure_value(pattern)


@lru_cache(maxsize=None)
def label_idempotents() -> Dict[Partition, CableExpression]:
    """
    Match the two-strand idempotents with the partitions (2) and (1,1).

    Raises:
        LabelingError: if an idempotent matches zero or both eigenvalues
    """
    candidates = {lam: meridian_eigenvalue(lam) for lam in (Partition((2,)), Partition((1, 1)))}
    labels: Dict[Partition, CableExpression] = {}
    for index, pattern in enumerate(two_strand_idempotents()):
        ratio = meridian_ratio(pattern)
        matches = [lam for lam, eigenvalue in candidates.items() if eigenvalue == ratio]
        if len(matches) != 1:
            raise LabelingError(f"Idempotent {index} has meridian eigenvalue {ratio} matching {len(matches)} partitions")
        if matches[0] in labels:
            raise LabelingError(f"Both idempotents carry the label {matches[0]}")
        logger.info(f"Idempotent {index} labeled {matches[0]} with eigenvalue {ratio}")
        labels[matches[0]] = pattern
    return labels


def pattern_for(lam: Partition) -> CableExpression:
    limit = min(settings.MAX_COLOR_SIZE, 2)
    if lam.size < 1 or lam.size > limit:
        raise ScopeLimitError(f"Colors must have between 1 and {limit} boxes, got {lam}")
    if lam.size == 1:
        return CableExpression.identity(1)
    return label_idempotents()[lam]


@dataclass(frozen=True)
class CabledResult:
    value: SkeinValue
    framing_monomial: SkeinValue
    components: Tuple[int, ...]


def _cable_word(braid: BraidWord, widths: Dict[int, int]) -> Tuple[int, Word, Dict[int, int]]:
    """Blackboard cable of ``braid``; ``widths`` maps strand ids to parallel copies."""
    occupant = list(range(braid.strands + 1))
    cabled: List[int] = []
    for letter in braid.word:
        i = abs(letter)
        sign = 1 if letter > 0 else -1
        offset = sum(widths[occupant[p]] for p in range(1, i))
        width_left, width_right = widths[occupant[i]], widths[occupant[i + 1]]
        for r in range(width_left - 1, -1, -1):
            for s in range(width_right):
                cabled.append(sign * (offset + r + s + 1))
        occupant[i], occupant[i + 1] = occupant[i + 1], occupant[i]
    top_offsets = {}
    running = 0
    for strand in range(1, braid.strands + 1):
        top_offsets[strand] = running
        running += widths[strand]
    return running, tuple(cabled), top_offsets


def _self_writhes(braid: BraidWord, cycles: List[List[int]]) -> List[int]:
    crossings, _ = _strand_structure(braid.strands, braid.word)
    component_of = {strand: index for index, cycle in enumerate(cycles) for strand in cycle}
    writhes = [0] * len(cycles)
    for letter, (left, right, _) in zip(braid.word, crossings):
        if component_of[left] == component_of[right]:
            writhes[component_of[left]] += 1 if letter > 0 else -1
    return writhes


def cable(
    braid: BraidWord,
    pattern: CableExpression,
    components: Optional[Iterable[int]] = None,
) -> SkeinValue:
    """
    Satellite of the closure of ``braid`` with ``pattern`` on the chosen components.

    Args:
        braid: companion link as a braid
        pattern: pattern placed once along each chosen component
        components: component indices to cable (ordered by smallest strand); all when None

    Returns:
        The framed value of the blackboard satellite
    """
    _, end_position = _strand_structure(braid.strands, braid.word)
    cycles = _components(braid.strands, end_position)
    chosen = set(range(len(cycles)) if components is None else components)
    if any(index < 0 or index >= len(cycles) for index in chosen):
        raise ValueError(f"Component indices {sorted(chosen)} out of range for {len(cycles)} components")

    widths = {strand: 1 for strand in range(1, braid.strands + 1)}
    for index in chosen:
        for strand in cycles[index]:
            widths[strand] = pattern.strands
    total_strands, cabled, top_offsets = _cable_word(braid, widths)

    prefixes: Dict[Word, SkeinValue] = {(): SkeinValue.one()}
    for index in sorted(chosen):
        offset = top_offsets[cycles[index][0]]
        expanded: Dict[Word, SkeinValue] = {}
        for prefix, c1 in prefixes.items():
            for word, c2 in pattern.terms.items():
                shifted = tuple(letter + offset if letter > 0 else letter - offset for letter in word)
                key = prefix + shifted
                expanded[key] = expanded.get(key, SkeinValue.zero()) + c1 * c2
        prefixes = expanded

    total = SkeinValue.zero()
    for prefix, coeff in prefixes.items():
        total = total + coeff * homfly(BraidWord(total_strands, prefix + cabled))
    return total


def colored_homfly(
    braid: BraidWord, lam: Partition, components: Optional[Iterable[int]] = None
) -> CabledResult:
    """
    λ-colored value of the closure of ``braid`` for colors with at most two boxes.

    The framing monomial is Π θ_λ^{w_c} over colored components and a^{w_c} over
    the others, with w_c the self-writhe of component c and θ_λ the framing
    eigenvalue; dividing it out gives the zero-framed colored invariant.

    Raises:
        ScopeLimitError: for colors outside the supported sizes
    """
    pattern = pattern_for(lam)
    _, end_position = _strand_structure(braid.strands, braid.word)
    cycles = _components(braid.strands, end_position)
    chosen = tuple(sorted(set(range(len(cycles)) if components is None else components)))
    value = cable(braid, pattern, chosen)

    monomial = SkeinValue.one()
    theta = framing_eigenvalue(lam)
    for index, writhe in enumerate(_self_writhes(braid, cycles)):
        base = theta if index in chosen else SkeinValue(A)
        monomial = monomial * base ** writhe
    return CabledResult(value=value, framing_monomial=monomial, components=chosen)


def random_braid(rng: random.Random, max_strands: int, max_crossings: int, min_strands: int = 1) -> BraidWord:
    strands = rng.randint(min_strands, max_strands)
    if strands == 1:
        return BraidWord(1, ())
    length = rng.randint(0, max_crossings)
    word = tuple(rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length))
    return BraidWord(strands, word)
