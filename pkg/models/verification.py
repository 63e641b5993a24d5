from typing import Optional

from pydantic import BaseModel, Field

from models.options import CheckStatus


class CheckReport(BaseModel):
    name: str
    status: CheckStatus
    witness: Optional[str] = None
    runtime: float = Field(0.0, ge=0.0, description="Seconds")
    degree: Optional[int] = None
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    class Config:
        use_enum_values = True
        schema_extra = {
            "example": {
                "name": "ov_annihilation",
                "status": "pass",
                "witness": None,
                "runtime": 0.41,
                "degree": 6,
                "seed": 1729
            }
        }
