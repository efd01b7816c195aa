import pytest

from weaklg.catalog import load_catalog
from weaklg.periods import constant_terms_series


@pytest.fixture(scope="session")
def catalog_models():
    return load_catalog()


@pytest.fixture(scope="session")
def long_series(catalog_models):
    """Order-60 series for every model, computed once per test session."""
    return {
        entry.id: constant_terms_series(entry.polynomial, 60)
        for entry in catalog_models
    }
