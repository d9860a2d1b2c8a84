"""Shared fixtures: the bundled apartment scene, its sweep, and a toy scene."""
from importlib import resources
from pathlib import Path

import pytest

from luxplan import heatmap_scores, load_scene, sweep

# Small two-room scene used where the full apartment would be overkill:
# a partition at x=3 with a 1 m doorway whose door swings into the left room.
TOY_SCENE = """\
ceiling 2.8
wall 0 0 6 0
wall 6 0 6 4
wall 6 4 0 4
wall 0 4 0 0
wall 3 0 3 1.5
wall 3 2.5 3 4
door d 3 1.5 1.0 90 0,90
lum L 1.5 2.0 2.7 80 iso
lum R 4.5 2.0 2.7 80 iso
grid 0.25 0.25 5.75 3.75 0.5 1.0 omni
"""


@pytest.fixture(scope="session")
def apartment_path() -> Path:
    with resources.as_file(resources.files("luxplan") / "data" / "apartment.scene") as p:
        yield p


@pytest.fixture(scope="session")
def apartment(apartment_path):
    return load_scene(apartment_path)


@pytest.fixture(scope="session")
def apartment_matrix(apartment):
    return sweep(apartment)


@pytest.fixture(scope="session")
def apartment_scores(apartment_matrix):
    return heatmap_scores(apartment_matrix, tau=0.01)


@pytest.fixture()
def toy_scene_file(tmp_path) -> Path:
    path = tmp_path / "toy.scene"
    path.write_text(TOY_SCENE, encoding="utf-8")
    return path
