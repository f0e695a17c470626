"""The quadric space forms S^3_q(1) and H^3_q(-1) inside R^4_v.

S^3_q(1)  = { x in R^4_q     : <x, x> =  1 }
H^3_q(-1) = { x in R^4_{q+1} : <x, x> = -1 }

with q in {0, 1}.  The metric index of the ambient space is derived from
(q, c): v = q for c = 1 and v = q + 1 for c = -1.
"""

from dataclasses import dataclass, field

import numpy as np

from .pseudo_metric import inner, norm

MEMBERSHIP_TOL = 1e-9


def signature_for(q, c):
    """Ambient metric index for the curvature-c form of index q."""
    if q not in (0, 1):
        raise ValueError(f"q must be 0 or 1, got {q}")
    if c not in (-1, 1):
        raise ValueError(f"c must be -1 or 1, got {c}")
    return q if c == 1 else q + 1


@dataclass(frozen=True)
class SpaceForm:
    """A non-flat space form M^3_q(c), realized as a quadric in R^4_v."""

    q: int
    c: int
    v: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "v", signature_for(self.q, self.c))


def contains(p, form, tol=MEMBERSHIP_TOL):
    """True iff <p, p> = c within tol, i.e. p lies on the quadric."""
    return bool(abs(inner(p, p, form.v) - form.c) <= tol)


def project_to_form(p, form):
    """Radially rescale p onto the quadric <p, p> = c.

    Used when ingesting sampled data that has drifted off the form.
    """
    p = np.asarray(p, dtype=float)
    r = norm(p, form.v)
    if np.any(r < 1e-12):
        raise ValueError("cannot project a (near-)null point onto the form")
    return p / r[..., None] if p.ndim > 1 else p / r


def principal_normal_geodesic(gamma, n, t, eps2, form, tol=1e-6):
    """Constant-speed geodesic through gamma in the principal-normal direction.

    Returns f1(t) * gamma + f2(t) * n with (f1, f2) = (cos, sin) when
    eps2 * c = 1 and (cosh, sinh) when eps2 * c = -1, where eps2 = <n, n>.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = np.asarray(n, dtype=float)
    if eps2 not in (-1, 1):
        raise ValueError("eps2 must be +1 or -1 (non-null normal required)")
    if not contains(gamma, form, tol=tol):
        raise ValueError("gamma does not lie on the form")
    if abs(inner(gamma, n, form.v)) > tol:
        raise ValueError("n is not orthogonal to gamma")
    if abs(inner(n, n, form.v) - eps2) > tol:
        raise ValueError("n is not a unit vector of the declared causal sign")
    t = np.asarray(t, dtype=float)
    if eps2 * form.c == 1:
        f1, f2 = np.cos(t), np.sin(t)
    else:
        f1, f2 = np.cosh(t), np.sinh(t)
    return f1[..., None] * gamma + f2[..., None] * n if t.ndim else f1 * gamma + f2 * n
