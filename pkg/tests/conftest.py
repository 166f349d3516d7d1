"""
Shared pytest fixtures and test configuration for delpezzo-lines.
"""

import json
import os
from pathlib import Path
from typing import Any

import pytest
import structlog

# Set test environment
os.environ["ENVIRONMENT"] = "test"
os.environ["LOGGING__LEVEL"] = "WARNING"

from services.hasse_matching.service import HasseMatchingService  # noqa: E402
from services.pin_quadratic.service import PinQuadraticService  # noqa: E402
from services.real_structures.service import RealStructureService  # noqa: E402
from services.roots.service import RootSystemService  # noqa: E402
from services.tritangent.service import TritangentService  # noqa: E402
from shared.config import Settings  # noqa: E402

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def reset_structlog():
    """Undo configure_logging so no test keeps a captured stderr stream."""
    yield
    structlog.reset_defaults()


# ============================================================================
# Fixture Loading Helpers
# ============================================================================


def load_fixture(filename: str) -> dict[str, Any]:
    """Load a JSON fixture file."""
    filepath = FIXTURES_DIR / filename
    with open(filepath) as f:
        return json.load(f)


@pytest.fixture(scope="session")
def golden_classes() -> list[dict[str, Any]]:
    """Expected data for the eleven deformation classes."""
    return load_fixture("classes.json")["classes"]


@pytest.fixture(scope="session")
def golden_tritangents() -> dict[str, Any]:
    """Expected tritangent tables and worked examples."""
    return load_fixture("tritangents.json")


# ============================================================================
# Services
# ============================================================================
# Session scoped: the catalog and the admissible chi searches are cached
# inside the services and are expensive to rebuild per test.


@pytest.fixture(scope="session")
def settings() -> Settings:
    """Default settings in the test environment."""
    return Settings()


@pytest.fixture(scope="session")
def root_service(settings) -> RootSystemService:
    return RootSystemService(settings)


@pytest.fixture(scope="session")
def real_structure_service(settings) -> RealStructureService:
    return RealStructureService(settings)


@pytest.fixture(scope="session")
def pin_quadratic_service(settings) -> PinQuadraticService:
    return PinQuadraticService(settings)


@pytest.fixture(scope="session")
def hasse_service(settings) -> HasseMatchingService:
    return HasseMatchingService(settings)


@pytest.fixture(scope="session")
def tritangent_service(settings, real_structure_service, pin_quadratic_service) -> TritangentService:
    return TritangentService(settings, real_structure_service, pin_quadratic_service)


@pytest.fixture(scope="session")
def e8(root_service):
    """Simple roots of E8 in Bourbaki order."""
    return root_service.e8_basis()
