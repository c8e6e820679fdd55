"""
Shared fixtures for the retraction kit tests.
"""

import numpy as np
import pytest

from retraction_kit.manifolds import (
    circle,
    ellipse,
    ellipsoid,
    ortho_columns,
    sphere,
    torus,
)


@pytest.fixture
def circle_map():
    return circle()


@pytest.fixture
def sphere_map():
    return sphere(3)


@pytest.fixture
def ellipse_map():
    return ellipse(2.0, 1.0)


@pytest.fixture
def ellipsoid_map():
    return ellipsoid(3.0, 2.0, 1.0)


@pytest.fixture
def torus_map():
    return torus(2.0, 0.5)


@pytest.fixture
def stiefel_map():
    return ortho_columns(5, 2)


@pytest.fixture(params=["circle", "sphere", "ellipse", "ellipsoid", "torus", "ortho_columns"])
def any_builtin(request):
    builders = {
        "circle": circle,
        "sphere": sphere,
        "ellipse": ellipse,
        "ellipsoid": ellipsoid,
        "torus": torus,
        "ortho_columns": ortho_columns,
    }
    return builders[request.param]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _clear_thread_cap(monkeypatch):
    monkeypatch.delenv("RETRACTION_KIT_THREADS", raising=False)
