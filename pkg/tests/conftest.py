import numpy as np
import pytest

from hqview.mesh_io import Mesh
from hqview.synth import hex_grid

UNIT_CUBE = np.array(
    [
        [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
        [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
    ],
    dtype=np.float64,
)

HEX_CELL = np.arange(8).reshape(1, 8)

# Linear map with columns (1,0,0), (1,1,0), (0,0,1): corner 0 keeps edges
# (1,0,0), (1,1,0), (0,0,1), whose scaled Jacobian is 1/sqrt(2).
SHEAR = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


def single_hex(vertices=UNIT_CUBE, name="hex") -> Mesh:
    return Mesh(dimension=3, vertices=vertices, cells=HEX_CELL, name=name)


def unit_quad() -> Mesh:
    verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=np.float64)
    return Mesh(dimension=2, vertices=verts, cells=np.arange(4).reshape(1, 4), name="quad")


@pytest.fixture
def unit_hex() -> Mesh:
    return single_hex()


@pytest.fixture
def sheared_hex() -> Mesh:
    return single_hex(UNIT_CUBE @ SHEAR.T, name="sheared")


@pytest.fixture
def two_by_two() -> Mesh:
    return hex_grid(2, 2, 2)
