import logging

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from settings.config import settings

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)


def create_fastapi_app() -> FastAPI:
    """Create and return a FastAPI application."""
    from endpoints.homfly import router as homfly_router
    from endpoints.ov import router as ov_router
    from db.database import close_memo_store, connect_memo_store
    from utils.exceptions import ParseError, ScopeLimitError

    fastapi_app = FastAPI(
        title="Annulus Skein API",
        description="Exact HOMFLYPT skein computations and the annulus multiple-cover recursion",
        version="1.0.0",
        docs_url="/docs",
        redoc_url="/redoc",
        openapi_url="/openapi.json"
    )

    # Configure CORS
    fastapi_app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # Memo store lifecycle
    fastapi_app.add_event_handler("startup", connect_memo_store)
    fastapi_app.add_event_handler("shutdown", close_memo_store)

    # Exception handlers
    @fastapi_app.exception_handler(ParseError)
    async def parse_exception_handler(request: Request, exc: ParseError):
        return JSONResponse(status_code=400, content={"message": str(exc), "position": exc.position})

    @fastapi_app.exception_handler(ScopeLimitError)
    async def scope_exception_handler(request: Request, exc: ScopeLimitError):
        return JSONResponse(status_code=422, content={"message": str(exc)})

    @fastapi_app.exception_handler(Exception)
    async def global_exception_handler(request: Request, exc: Exception):
        logger.error(f"Unhandled error on {request.url.path}: {str(exc)}")
        return JSONResponse(
            status_code=500,
            content={"message": f"An unexpected error occurred: {str(exc)}"}
        )

    # Include routers
    fastapi_app.include_router(homfly_router, prefix="/homfly", tags=["HOMFLYPT"])
    fastapi_app.include_router(ov_router, prefix="/ov", tags=["Annulus recursion"])

    @fastapi_app.get("/", tags=["Root"])
    async def root():
        return {
            "message": "Annulus Skein API",
            "version": "1.0.0",
            "documentation": "/docs"
        }

    return fastapi_app


app = create_fastapi_app()
