from enum import Enum


class Orientation(str, Enum):
    STANDARD = "standard"
    CONJUGATED = "conjugated"


class Normalization(str, Enum):
    FRAMED = "framed"
    UNFRAMED = "unframed"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class SymBasis(str, Enum):
    SCHUR = "schur"
    POWERSUM = "powersum"
    HOMOGENEOUS = "homogeneous"
    ELEMENTARY = "elementary"


class LinkName(str, Enum):
    UNKNOT = "unknot"
    HOPF = "hopf"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
