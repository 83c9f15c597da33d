"""Pytest configuration for acceptance runs against published values."""

import pytest


def pytest_collection_modifyitems(config, items):
    """Mark everything under acceptance/ as slow."""
    for item in items:
        if "acceptance" in str(item.fspath):
            item.add_marker(pytest.mark.slow)
