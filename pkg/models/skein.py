from typing import List, Optional

from pydantic import BaseModel, Field, validator

from models.options import LinkName, Normalization


class BraidRequest(BaseModel):
    strands: int = Field(..., ge=1)
    word: List[int] = []
    normalization: Normalization = Normalization.FRAMED

    @validator("word", each_item=True)
    def generator_nonzero(cls, v):
        if v == 0:
            raise ValueError("Generator indices are nonzero")
        return v

    class Config:
        use_enum_values = True
        schema_extra = {
            "example": {
                "strands": 2,
                "word": [1, 1],
                "normalization": "framed"
            }
        }


class ColoredRequest(BaseModel):
    braid: BraidRequest
    partition: List[int]
    components: Optional[List[int]] = None

    class Config:
        schema_extra = {
            "example": {
                "braid": {"strands": 1, "word": []},
                "partition": [2],
                "components": None
            }
        }


class HomflyResponse(BaseModel):
    braid: str
    value: str
    framing_monomial: str
    normalization: str
    components: Optional[List[int]] = None

    class Config:
        schema_extra = {
            "example": {
                "braid": "n=1; w=",
                "value": "(a - a^(-1))/(q^(1/2) - q^(-1/2))",
                "framing_monomial": "1",
                "normalization": "framed"
            }
        }


class TensorTermSchema(BaseModel):
    left: List[int]
    right: List[int]
    coefficient: str
    framing_tag: List[int] = Field(..., description="Exponents of (γ, a₁, a₂)")


class TensorElementSchema(BaseModel):
    degree: int
    terms: List[TensorTermSchema]
    text: str


class PartitionCoefficientSchema(BaseModel):
    partition: List[int]
    value: str
    framing_monomial: str
    cross_checked: Optional[bool] = None


class PartitionFunctionSchema(BaseModel):
    link: LinkName
    truncation: int
    variable_label: str
    coefficients: List[PartitionCoefficientSchema]

    class Config:
        use_enum_values = True
        schema_extra = {
            "example": {
                "link": "unknot",
                "truncation": 1,
                "variable_label": "a = Q^(1/2); framing monomials absorb the 4-chain choice",
                "coefficients": [
                    {"partition": [], "value": "1", "framing_monomial": "1"},
                    {"partition": [1], "value": "(a - a^(-1))/(q^(1/2) - q^(-1/2))", "framing_monomial": "1"}
                ]
            }
        }
