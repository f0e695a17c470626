"""Signed inner product, norms, and causal classification in R^4_v.

The ambient space is R^4 equipped with the index-v scalar product

    <u, w> = -sum_{i < v} u_i w_i + sum_{j >= v} u_j w_j,

where v counts the leading negative-signature axes.  Vectors are plain
numpy arrays of shape (..., 4); all operations broadcast over leading axes.
"""

from enum import Enum

import numpy as np

LIGHTLIKE_TOL = 1e-10


class CausalCharacter(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def metric_signs(v):
    """Diagonal of the index-v metric: v entries of -1 followed by +1s."""
    if v not in (0, 1, 2):
        raise ValueError(f"metric index v must be in {{0, 1, 2}}, got {v}")
    signs = np.ones(4)
    signs[:v] = -1.0
    return signs


def inner(u, w, v):
    """Signed inner product of 4-vectors under the index-v metric.

    Accepts arrays of shape (..., 4) and broadcasts; returns shape (...).
    """
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if u.shape[-1] != 4 or w.shape[-1] != 4:
        raise ValueError("ambient vectors must have 4 components")
    return np.sum(u * w * metric_signs(v), axis=-1)


def norm(u, v):
    """|<u, u>|^(1/2) -- the norm of a (possibly causal) vector."""
    return np.sqrt(np.abs(inner(u, u, v)))


def causal_character(u, v, tol=LIGHTLIKE_TOL):
    """Classify a single 4-vector as spacelike, timelike, or lightlike.

    The zero vector is spacelike.  A nonzero vector with |<u,u>| <= tol is
    lightlike; the absolute tolerance keeps the classification stable when
    u comes from finite-difference data.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    u = np.asarray(u, dtype=float)
    q = float(inner(u, u, v))
    if not np.any(u):
        return CausalCharacter.SPACELIKE
    if abs(q) <= tol:
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE
