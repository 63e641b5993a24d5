import logging
from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query, status

from models.options import LinkName
from models.skein import PartitionFunctionSchema, TensorElementSchema
from models.verification import CheckReport
from services.ov_solver import normalize_unknot, partition_function, solve_kernel
from services.verification_suite import run_all
from settings.config import settings
from utils.exceptions import InconsistentClosureError, ScopeLimitError
from utils.rendering import partition_function_schema, tensor_schema

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

router = APIRouter()


@router.get("/psi", response_model=TensorElementSchema)
def get_psi(degree: int = Query(settings.DEFAULT_DEGREE, ge=0, le=settings.MAX_VERIFY_DEGREE)):
    """
    Ψ truncated at ``degree``, with the diagonal coefficients fixed by the unknot closures.
    """
    try:
        result = normalize_unknot(degree)
    except InconsistentClosureError as e:
        logger.error(f"Unknot normalization failed: {str(e)}")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
    return tensor_schema(result.psi, degree)


@router.get("/kernel", response_model=List[TensorElementSchema])
def get_kernel(degree: int = Query(2, ge=0, le=settings.MAX_VERIFY_DEGREE)):
    """
    Kernel basis of the annihilation operator on bidegree (degree, degree).
    """
    return [tensor_schema(vector, degree) for vector in solve_kernel(degree)]


@router.get("/partition-function", response_model=PartitionFunctionSchema)
def get_partition_function(
    link: LinkName = Query(LinkName.UNKNOT),
    degree: int = Query(2, ge=0, le=settings.MAX_VERIFY_DEGREE),
):
    """
    Colored coefficients of the unknot or Hopf link partition function.
    """
    try:
        return partition_function_schema(partition_function(link, degree))
    except ScopeLimitError as e:
        logger.warning(f"Partition function rejected: {str(e)}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


@router.get("/verify", response_model=List[CheckReport])
def verify(
    degree: int = Query(2, ge=0),
    seed: Optional[int] = None,
    trials: Optional[int] = Query(None, ge=0),
):
    """
    Run the verification suite and return one report per check.
    """
    try:
        return run_all(degree, seed=seed, trials=trials)
    except ScopeLimitError as e:
        logger.warning(f"Verification rejected: {str(e)}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
