"""Finite-difference derivatives on uniform grids.

Differentiation matrices are built from exact stencil weights (solved from
the local Vandermonde system, so the tabulated coefficients cannot be
mistyped) and cached per (n, order, accuracy).  Interior points use central
stencils; boundary points use one-sided stencils of the same accuracy.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class DerivConfig:
    """Finite-difference settings: accuracy order 2 or 4."""

    order: int = 4

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError("FD accuracy order must be 2 or 4")


def stencil_weights(offsets, deriv):
    """Weights w so that sum w_j f(x + o_j h) ~ h^deriv f^(deriv)(x).

    Solved from the moment conditions sum w_j o_j^k = k! [k == deriv].
    """
    offsets = np.asarray(offsets, dtype=float)
    m = len(offsets)
    A = np.vander(offsets, m, increasing=True).T
    b = np.zeros(m)
    b[deriv] = math.factorial(deriv)
    return np.linalg.solve(A, b)


@lru_cache(maxsize=64)
def _diff_matrix(n, deriv, acc):
    """Dense differentiation matrix for unit spacing (divide by h^deriv)."""
    if deriv not in (1, 2):
        raise ValueError("only first and second derivatives are supported")
    half = acc // 2
    width = 2 * half + 1
    if n < width + 1:
        raise ValueError(f"need at least {width + 1} samples for this stencil")
    D = np.zeros((n, n))
    for i in range(n):
        if i - half < 0:
            # One-sided/offset rows carry one extra point so the boundary
            # keeps the interior accuracy for both derivative orders.
            offsets = np.arange(0, width + 1) - i
        elif i + half >= n:
            offsets = np.arange(n - width - 1, n) - i
        else:
            offsets = np.arange(-half, half + 1)
        w = stencil_weights(offsets, deriv)
        D[i, i + offsets] = w
    return D


def derivative(f, h, axis=0, deriv=1, acc=4):
    """d^deriv f / dx^deriv along `axis` on a uniform grid of spacing h."""
    f = np.asarray(f, dtype=float)
    n = f.shape[axis]
    D = _diff_matrix(n, deriv, acc)
    out = np.tensordot(D, np.moveaxis(f, axis, 0), axes=(1, 0))
    return np.moveaxis(out, 0, axis) / h**deriv
