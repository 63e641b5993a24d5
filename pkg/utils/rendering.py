"""Text, JSON and CSV renderings shared by the command line and the HTTP surface."""

import csv
import io
import json
from typing import Iterable, List, Optional, Sequence

from models.options import Normalization, OutputFormat
from models.skein import (
    HomflyResponse,
    PartitionCoefficientSchema,
    PartitionFunctionSchema,
    TensorElementSchema,
    TensorTermSchema,
)
from models.verification import CheckReport
from services.annulus_skein import FramedScalar, Tag, TensorElement
from services.coefficients import SkeinValue, UNKNOT
from services.combinatorics import Partition
from services.homfly_engine import BraidWord, colored_homfly, homfly_report
from services.ov_solver import PartitionFunction

_ASCII_REPLACEMENTS = (("○", "O"), ("γ", "gamma"), ("⊗", "(x)"), ("·", "*"), ("∅", "[]"), ("₁", "1"), ("₂", "2"))


def to_ascii(text: str) -> str:
    for symbol, replacement in _ASCII_REPLACEMENTS:
        text = text.replace(symbol, replacement)
    return text


def basis_label(lam: Partition, ascii_only: bool = False) -> str:
    if ascii_only:
        return f"W{lam}"
    return f"W_{lam.label()}"


def _power(symbol: str, exponent: int) -> str:
    if exponent == 1:
        return symbol
    if exponent > 0:
        return f"{symbol}^{exponent}"
    return f"{symbol}^({exponent})"


def tag_label(tag: Tag) -> str:
    gamma, a1, a2 = tag
    factors = []
    if gamma:
        factors.append(_power("γ", gamma))
    if a1:
        factors.append(_power("a₁", a1))
    if a2:
        factors.append(_power("a₂", a2))
    return "·".join(factors)


def _scalar_term(tag: Tag, value: SkeinValue) -> str:
    label = tag_label(tag)
    text = str(value)
    if not label:
        return text
    if value.is_one():
        return label
    if value == SkeinValue.rational(-1):
        return f"-{label}"
    return f"({text})·{label}"


def framed_scalar_label(scalar: FramedScalar) -> str:
    pieces = [_scalar_term(tag, value) for tag, value in scalar.items()]
    if len(pieces) == 1:
        return pieces[0]
    return "(" + " + ".join(pieces) + ")"


def render_tensor(element: TensorElement, ascii_only: bool = False) -> str:
    """e.g. "W_∅⊗W_∅ + γ·W_(1)⊗W_(1)"; ASCII mode gives "W[](x)W[] + gamma*W[1](x)W[1]"."""
    if element.is_zero():
        return "0"
    terms = []
    for (lam, mu), coeff in element.items():
        basis = f"{basis_label(lam, ascii_only)}⊗{basis_label(mu, ascii_only)}"
        if coeff.is_one():
            terms.append(basis)
        else:
            terms.append(f"{framed_scalar_label(coeff)}·{basis}")
    text = " + ".join(terms)
    return to_ascii(text) if ascii_only else text


def tensor_schema(element: TensorElement, degree: int, ascii_only: bool = False) -> TensorElementSchema:
    terms = []
    for (lam, mu), coeff in element.items():
        for tag, value in coeff.items():
            terms.append(
                TensorTermSchema(left=list(lam.parts), right=list(mu.parts), coefficient=str(value), framing_tag=list(tag))
            )
    return TensorElementSchema(degree=degree, terms=terms, text=render_tensor(element, ascii_only))


def unknot_power_label(value: SkeinValue, max_power: int) -> Optional[str]:
    """"○", "○^2", ... when ``value`` is a power of the unknot."""
    power = SkeinValue.one()
    for k in range(1, max_power + 1):
        power = power * UNKNOT
        if value == power:
            return _power("○", k)
    return None


def render_homfly(response: HomflyResponse, strands: int, ascii_only: bool = False) -> str:
    value = SkeinValue.parse(response.value)
    label = unknot_power_label(value, max(strands, 1))
    head = f"{label} = {response.value}" if label else response.value
    lines = [head, f"framing_monomial: {response.framing_monomial}", f"normalization: {response.normalization}"]
    if response.components is not None:
        lines.append("components: " + ",".join(str(c) for c in response.components))
    text = "\n".join(lines)
    return to_ascii(text) if ascii_only else text


def partition_function_schema(result: PartitionFunction) -> PartitionFunctionSchema:
    coefficients = []
    for lam in sorted(result.coefficients, key=lambda p: p.sort_key):
        coefficients.append(
            PartitionCoefficientSchema(
                partition=list(lam.parts),
                value=str(result.coefficients[lam]),
                framing_monomial=str(result.framing_monomials[lam]),
                cross_checked=result.cross_checked.get(lam),
            )
        )
    return PartitionFunctionSchema(
        link=result.link,
        truncation=result.truncation,
        variable_label=result.variable_label,
        coefficients=coefficients,
    )


def render_partition_function(schema: PartitionFunctionSchema, ascii_only: bool = False) -> str:
    lines = [f"{schema.link} up to degree {schema.truncation} ({schema.variable_label})"]
    for entry in schema.coefficients:
        lam = Partition(tuple(entry.partition))
        lines.append(f"P_{lam.label()} = {entry.value}  [framing {entry.framing_monomial}]")
    text = "\n".join(lines)
    return to_ascii(text) if ascii_only else text


def render_reports(reports: Iterable[CheckReport]) -> str:
    """One JSON object per line."""
    return "\n".join(report.json() for report in reports)


def render_reports_text(reports: Iterable[CheckReport]) -> str:
    lines = []
    for report in reports:
        line = f"{report.status.upper():4} {report.name} ({report.runtime:.3f}s)"
        if report.witness:
            line += f": {report.witness}"
        lines.append(line)
    return "\n".join(lines)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue().rstrip("\n")


def dump_json(payload: object) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=False)


def render(
    output_format: OutputFormat,
    text: str,
    payload: object,
    csv_header: Sequence[str],
    csv_rows: List[Sequence[object]],
) -> str:
    if output_format == OutputFormat.TEXT:
        return text
    if output_format == OutputFormat.CSV:
        return rows_to_csv(csv_header, csv_rows)
    return dump_json(payload)


def homfly_response(braid: BraidWord, normalization: Normalization) -> HomflyResponse:
    result = homfly_report(braid, normalization)
    return HomflyResponse(
        braid=str(braid),
        value=str(result.value),
        framing_monomial=str(result.framing_monomial),
        normalization=result.normalization.value,
    )


def colored_response(
    braid: BraidWord,
    lam: Partition,
    components: Optional[Sequence[int]],
    normalization: Normalization,
) -> HomflyResponse:
    result = colored_homfly(braid, lam, components)
    value = result.value
    if Normalization(normalization) == Normalization.UNFRAMED:
        value = value / result.framing_monomial
    return HomflyResponse(
        braid=str(braid),
        value=str(value),
        framing_monomial=str(result.framing_monomial),
        normalization=Normalization(normalization).value,
        components=list(result.components),
    )
