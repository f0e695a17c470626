import numpy as np
import pytest

from frameforge import congruence as cg
from frameforge.fd import DerivConfig

FD = DerivConfig()

FAMILIES = ("great-circle", "small-circle", "de-sitter",
            "hyperbolic-geodesic", "hopf-helix")


@pytest.fixture(scope="session")
def fd():
    return FD


@pytest.fixture(scope="session")
def rot_grid():
    """Commuting-rotation congruence with all six coefficients active."""
    return cg.rotation_congruence()


@pytest.fixture(scope="session")
def rot_grid_fine():
    """Same window at doubled resolution (Richardson companion)."""
    return cg.rotation_congruence(n=(65, 33, 33))


@pytest.fixture(scope="session")
def plane_grid():
    """Rotation congruence with disjoint-plane generators (Gamma_TB = 0)."""
    return cg.rotation_congruence(
        xi_generator=cg.rotation_generator((1, 2)),
        eta_generator=cg.rotation_generator((0, 3)),
        s_span=(0.2, 0.8))


@pytest.fixture(scope="session")
def const_gc():
    """Rigid copies of a great circle: geodesic base, all coefficients zero."""
    return cg.const_congruence(base_family="great-circle", n=(17, 9, 9),
                               xi_span=(0.0, 0.5), eta_span=(0.0, 0.5))


@pytest.fixture(scope="session")
def const_sc():
    """Rigid copies of the small circle (kappa = 1, tau = 0)."""
    return cg.const_congruence(base_family="small-circle", n=(17, 9, 9),
                               xi_span=(0.0, 0.5), eta_span=(0.0, 0.5))


def interior(arr, margin=3):
    """Trim boundary layers where one-sided stencils dominate."""
    sl = (slice(margin, -margin),) * 3
    return np.asarray(arr)[sl]


def grid_scalars(grid, h):
    """Evaluate a scalar function h(s, xi, eta) on the full grid."""
    out = h(grid.s[:, None, None], grid.xi[None, :, None],
            grid.eta[None, None, :])
    return np.broadcast_to(out, grid.shape).copy()
