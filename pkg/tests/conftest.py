import pytest
from fastapi.testclient import TestClient
from hypothesis import HealthCheck
from hypothesis import settings as hypothesis_settings

from db.database import close_memo_store

# sympy gcds make single examples slow
hypothesis_settings.register_profile(
    "skein", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.load_profile("skein")


@pytest.fixture
def client():
    from main import create_fastapi_app

    with TestClient(create_fastapi_app()) as test_client:
        yield test_client


@pytest.fixture
def fresh_memo():
    """Start and end a test with an empty memo store."""
    close_memo_store()
    yield
    close_memo_store()
