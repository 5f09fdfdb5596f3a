import numpy as np
import pytest

from virialbounds import Configuration, hard_sphere, lennard_jones, square_well


@pytest.fixture(scope="session")
def lj():
    return lennard_jones()


@pytest.fixture(scope="session")
def rods():
    """1D square-well hard rods: core 1, range 1.5, depth 1; B = Bbar = 1."""
    return square_well(core=1.0, well_range=1.5, depth=1.0, dimension=1)


@pytest.fixture(scope="session")
def spheres():
    return hard_sphere(diameter=1.0, dimension=3)


def random_configuration(rng: np.random.Generator, n: int, d: int, scale: float = 1.2) -> Configuration:
    return Configuration(rng.normal(0.0, scale, size=(n, d)))
