from pydantic import BaseModel, Field

from models.options import Normalization, Orientation, OutputFormat
from settings.config import settings


class RunConfig(BaseModel):
    """Options shared by every command."""

    degree: int = Field(default_factory=lambda: settings.DEFAULT_DEGREE, ge=0)
    normalization: Normalization = Field(default_factory=lambda: Normalization(settings.DEFAULT_NORMALIZATION))
    orientation: Orientation = Field(default_factory=lambda: Orientation(settings.DEFAULT_ORIENTATION))
    output_format: OutputFormat = Field(default_factory=lambda: OutputFormat(settings.DEFAULT_OUTPUT_FORMAT))
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    ascii: bool = False

    class Config:
        allow_mutation = False
