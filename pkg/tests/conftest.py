"""Shared fixtures.

Classification reports are expensive (minutes for the heavier numeric
families), so they are computed once per session and shared by every test
that needs them.
"""

from __future__ import annotations

import pytest

from nmlregret.catalog import get, names
from nmlregret.integrals import classify


@pytest.fixture(scope="session")
def classify_report():
    """Callable returning the (cached) finiteness report for a catalog name."""
    cache: dict = {}

    def run(name: str):
        if name not in cache:
            cache[name] = classify(get(name).family)
        return cache[name]

    return run


@pytest.fixture(scope="session")
def catalog_names():
    return names()


@pytest.fixture()
def family():
    """Callable returning a fresh family instance for a catalog name."""
    return lambda name: get(name).family
