from pydantic import BaseSettings, Field


class Settings(BaseSettings):
    # Truncation and scope settings
    DEFAULT_DEGREE: int = Field(6, env="SKEIN_DEFAULT_DEGREE")
    MAX_VERIFY_DEGREE: int = Field(6, env="SKEIN_MAX_VERIFY_DEGREE")
    MAX_COLOR_SIZE: int = Field(2, env="SKEIN_MAX_COLOR_SIZE")

    # Output defaults
    DEFAULT_NORMALIZATION: str = Field("framed", env="SKEIN_NORMALIZATION")
    DEFAULT_ORIENTATION: str = Field("standard", env="SKEIN_ORIENTATION")
    DEFAULT_OUTPUT_FORMAT: str = Field("json", env="SKEIN_OUTPUT_FORMAT")

    # Randomized batteries
    DEFAULT_SEED: int = Field(1729, env="SKEIN_SEED")
    BATTERY_TRIALS: int = Field(200, env="SKEIN_BATTERY_TRIALS")
    BATTERY_MAX_STRANDS: int = Field(5, env="SKEIN_BATTERY_MAX_STRANDS")
    BATTERY_MAX_CROSSINGS: int = Field(14, env="SKEIN_BATTERY_MAX_CROSSINGS")

    # Skein reducer
    MAX_RESOLUTION_STATES: int = Field(250000, env="SKEIN_MAX_RESOLUTION_STATES")
    MEMO_ENABLED: bool = Field(True, env="SKEIN_MEMO_ENABLED")
    MEMO_MAX_ENTRIES: int = Field(200000, env="SKEIN_MEMO_MAX_ENTRIES")

    # Verification suite
    VERIFY_WORKERS: int = Field(4, env="SKEIN_VERIFY_WORKERS")
    INJECTIVITY_MAX_SIZE: int = Field(12, env="SKEIN_INJECTIVITY_MAX_SIZE")

    LOG_LEVEL: str = Field("INFO", env="SKEIN_LOG_LEVEL")

    class Config:
        env_file = ".env"
        case_sensitive = True

# Create a global settings object
settings = Settings()
