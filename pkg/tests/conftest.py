from pathlib import Path

import pytest

from healthroutes.dataset_io import read_routes

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def tarragona_catalog():
    return read_routes(DATA_DIR / "tarragona_routes.csv")


@pytest.fixture(scope="session")
def barcelona_catalog():
    return read_routes(DATA_DIR / "barcelona_routes.csv")


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR
