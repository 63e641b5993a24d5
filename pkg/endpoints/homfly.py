import logging

from fastapi import APIRouter, HTTPException, status

from models.skein import BraidRequest, ColoredRequest, HomflyResponse
from services.combinatorics import Partition
from services.homfly_engine import BraidWord
from settings.config import settings
from utils.exceptions import ParseError, ScopeLimitError
from utils.rendering import colored_response, homfly_response

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

router = APIRouter(responses={400: {"description": "Malformed braid or partition"}})


def _braid(request: BraidRequest) -> BraidWord:
    try:
        return BraidWord(request.strands, tuple(request.word))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/", response_model=HomflyResponse)
def compute_homfly(request: BraidRequest):
    """
    Framed or unframed HOMFLYPT value of a braid closure.
    """
    braid = _braid(request)
    try:
        return homfly_response(braid, request.normalization)
    except ScopeLimitError as e:
        logger.warning(f"Scope limit for {braid}: {str(e)}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


@router.post("/colored", response_model=HomflyResponse)
def compute_colored(request: ColoredRequest):
    """
    Colored value for colors with at most two boxes, with its framing monomial.
    """
    braid = _braid(request.braid)
    try:
        lam = Partition(tuple(request.partition))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    try:
        return colored_response(braid, lam, request.components, request.braid.normalization)
    except ScopeLimitError as e:
        logger.warning(f"Scope limit for {braid} colored {lam}: {str(e)}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    except (ValueError, ParseError) as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
