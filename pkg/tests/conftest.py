import numpy as np
import pytest

from qhlab.domains import Comb, Disk, Rectangle, make_comb_domain
from qhlab.graph import build_graph


@pytest.fixture(scope="session")
def disk():
    return Disk()


@pytest.fixture(scope="session")
def rect():
    return Rectangle()


@pytest.fixture(scope="session")
def comb3():
    return make_comb_domain(3)


@pytest.fixture(scope="session")
def disk_g64(disk):
    return build_graph(disk, 1 / 64, connectivity=16)


@pytest.fixture(scope="session")
def disk_g128(disk):
    return build_graph(disk, 1 / 128, connectivity=16)


@pytest.fixture(scope="session")
def rect_g64(rect):
    return build_graph(rect, 1 / 64, connectivity=16)


@pytest.fixture(scope="session")
def comb3_g128(comb3):
    return build_graph(comb3, 1 / 128, connectivity=16)


def interior_points(domain, rng, n, delta_min=0.0):
    x0, x1, y0, y1 = domain.bounding_box()
    out = []
    while len(out) < n:
        p = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
        if domain.contains(p) and domain.dist_to_boundary(p) >= delta_min:
            out.append(p)
    return np.array(out)
