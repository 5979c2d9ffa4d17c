from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from hcell.examples import sweedler, taft
from hcell.field import Field
from hcell.specfile import fixture_path, parse_spec

settings.register_profile("hcell", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("hcell")


@pytest.fixture(scope="session")
def sw():
    """Sweedler's algebra over F_17 with its Hopf data."""
    return sweedler(Field(17))


@pytest.fixture(scope="session")
def t3():
    """The Taft algebra of dimension 9 over F_7."""
    return taft(3, Field(7))


@pytest.fixture(scope="session")
def bundled():
    def load(name: str):
        return parse_spec(fixture_path(name))

    return load
