"""Anholonomic frame calculus on a 3-parameter family gamma(s, xi, eta).

Every grid point carries the Frenet frame of the s-line through it.  The
frame's xi- and eta-derivatives are encoded by six scalar coefficients
(Gamma for xi, Upsilon for eta) extracted as metric projections:

    d(T,N,B)/dxi  = [[0,        eps2 G_TN, eps3 G_TB],
                     [-eps1 G_TN, 0,       eps3 G_NB],
                     [-eps1 G_TB, -eps2 G_NB, 0      ]] (T,N,B)

and the same pattern with Upsilon for d/deta.  Divergence and curl of
frame fields use the eps-weighted contraction and the frame cross product;
gamma-direction components of derivatives (the curve normal of the quadric)
are carried as separate ambient coefficients, never mixed into the frame
components.
"""

from dataclasses import dataclass

import numpy as np

from .electromagnetic import frame_cross
from .fd import DerivConfig, derivative
from .frenet import FrameDegenerate, KAPPA_MIN, metric_complement, _orient_binormal
from .pseudo_metric import inner, metric_signs
from .space_form import SpaceForm

AXIS = {"s": 0, "xi": 1, "eta": 2}


# ---------------------------------------------------------------------------
# Grid container and builders
# ---------------------------------------------------------------------------


@dataclass
class CongruenceGrid:
    """Sampled congruence with per-point frames on an (n_s, n_xi, n_eta) grid."""

    gamma: np.ndarray          # (n_s, n_xi, n_eta, 4)
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray          # (n_s, n_xi, n_eta)
    tau: np.ndarray
    eps: tuple
    form: SpaceForm
    h: tuple                   # (h_s, h_xi, h_eta)
    s: np.ndarray = None
    xi: np.ndarray = None
    eta: np.ndarray = None

    @property
    def shape(self):
        return self.kappa.shape


def _sign(x):
    return -1 if x < 0 else 1


def frame_field(gamma, d1, d2, form, fd=DerivConfig(), h_s=None):
    """Vectorized Frenet frame over an (..., n_s, 4)-like grid.

    gamma, d1, d2 have shape (n_s, n_xi, n_eta, 4); d1/d2 are the first and
    second s-derivatives of gamma.  kappa must stay >= KAPPA_MIN everywhere
    (degenerate windows are only supported on single curves).
    """
    v, c = form.v, form.c
    tt = inner(d1, d1, v)
    speed = np.sqrt(np.abs(tt))
    T = d1 / speed[..., None]
    eps1 = _sign(float(np.mean(np.sign(tt))))

    V = d2 + eps1 * c * gamma
    vv = inner(V, V, v)
    kappa = np.sqrt(np.abs(vv))
    if np.any(kappa < KAPPA_MIN):
        raise FrameDegenerate("congruence frame undefined where kappa ~ 0")
    eps2 = _sign(float(np.mean(np.sign(vv))))
    N = eps2 * V / kappa[..., None]

    # Metric-orthogonal complement of {gamma, T, N} via batched SVD.
    rows = np.stack([gamma, T, N], axis=-2) * metric_signs(v)
    _, _, vt = np.linalg.svd(rows)
    B = vt[..., -1, :]
    nb = np.sqrt(np.abs(inner(B, B, v)))
    B = B / nb[..., None]
    B = _orient_binormal(gamma, T, N, B)
    eps3 = _sign(float(np.mean(np.sign(inner(B, B, v)))))

    if h_s is not None:
        dN = derivative(N, h_s, axis=0, deriv=1, acc=fd.order)
        tau = inner(dN, B, v)
    else:
        tau = np.zeros_like(kappa)
    return T, N, B, kappa, tau, (eps1, eps2, eps3)


def build_grid(gamma_fn, form, s, xi, eta, d1_fn=None, d2_fn=None, fd=DerivConfig()):
    """Sample gamma(s, xi, eta) and frame every s-line.

    gamma_fn takes broadcast coordinate arrays (S, XI, ETA) of shape
    (n_s, n_xi, n_eta) and returns points of shape (..., 4); d1_fn/d2_fn are
    optional exact s-derivatives (finite differences otherwise).
    """
    s, xi, eta = (np.asarray(a, dtype=float) for a in (s, xi, eta))
    if min(len(s), len(xi), len(eta)) < 7:
        raise ValueError("congruence grids need at least 7 samples per axis")
    S, XI, ETA = np.meshgrid(s, xi, eta, indexing="ij")
    gamma = gamma_fn(S, XI, ETA)
    h_s = float(s[1] - s[0])
    if d1_fn is not None:
        d1 = d1_fn(S, XI, ETA)
        d2 = d2_fn(S, XI, ETA)
    else:
        d1 = derivative(gamma, h_s, axis=0, deriv=1, acc=fd.order)
        d2 = derivative(gamma, h_s, axis=0, deriv=2, acc=fd.order)
    T, N, B, kappa, tau, eps = frame_field(gamma, d1, d2, form, fd=fd, h_s=h_s)
    h = (h_s, float(xi[1] - xi[0]), float(eta[1] - eta[0]))
    return CongruenceGrid(gamma=gamma, T=T, N=N, B=B, kappa=kappa, tau=tau,
                          eps=eps, form=form, h=h, s=s, xi=xi, eta=eta)


def rotation_generator(plane):
    """Skew generator rotating the coordinate plane (i, j)."""
    i, j = plane
    A = np.zeros((4, 4))
    A[i, j] = -1.0
    A[j, i] = 1.0
    return A


def chiral_generator(a, chirality):
    """Skew so(4) generator from one chiral factor of so(4) = so(3) + so(3).

    `a` gives the coefficients of the plane rotations (0,1), (0,2), (0,3);
    the (2,3), (3,1), (1,2) coefficients are +a (chirality +1) or -a
    (chirality -1).  Generators of opposite chirality always commute, which
    keeps the two congruence rotations independent without confining them
    to disjoint coordinate planes.
    """
    a1, a2, a3 = a
    s = 1.0 if chirality > 0 else -1.0
    return (a1 * rotation_generator((0, 1)) + a2 * rotation_generator((0, 2))
            + a3 * rotation_generator((0, 3))
            + s * (a1 * rotation_generator((2, 3))
                   + a2 * rotation_generator((3, 1))
                   + a3 * rotation_generator((1, 2))))


def const_congruence(base_family="small-circle", n=(33, 17, 17),
                     s_span=(0.0, 2 * np.pi / np.sqrt(2)),
                     xi_span=(0.0, 1.0), eta_span=(0.0, 1.0),
                     fd=DerivConfig(), **params):
    """Rigid copies of one curve: gamma(s, xi, eta) = gamma0(s).

    The frame is computed once on the base curve (so geodesic bases, whose
    normal and binormal come from parallel propagation, are supported) and
    tiled over the xi/eta axes.
    """
    from .frenet import CurveSpec, frenet_frame

    curve = CurveSpec.builtin(base_family, n=n[0], interval=s_span, **params)
    data = frenet_frame(curve, fd=fd)
    s = np.asarray(curve.s)
    xi = np.linspace(*xi_span, n[1])
    eta = np.linspace(*eta_span, n[2])

    def tile_field(a):
        return np.tile(a.reshape(a.shape[0], 1, 1, *a.shape[1:]),
                       (1, n[1], n[2]) + (1,) * (a.ndim - 1))

    return CongruenceGrid(
        gamma=tile_field(data.gamma), T=tile_field(data.T),
        N=tile_field(data.N), B=tile_field(data.B),
        kappa=tile_field(data.kappa), tau=tile_field(data.tau),
        eps=data.eps, form=curve.form,
        h=(curve.h, float(xi[1] - xi[0]), float(eta[1] - eta[0])),
        s=s, xi=xi, eta=eta)


DEFAULT_XI_GENERATOR = chiral_generator((1.0, 1.0, 0.0), +1)
DEFAULT_ETA_GENERATOR = chiral_generator((-1.0, -1.0, 0.0), -1)


def rotation_congruence(n=(33, 17, 17), s_span=(0.2, 0.7),
                        xi_span=(0.0, 0.4), eta_span=(0.0, 0.4),
                        xi_generator=None, eta_generator=None,
                        base_family="small-circle", fd=DerivConfig(), **params):
    """gamma(s, xi, eta) = exp(xi A) exp(eta C) gamma0(s).

    A and C are commuting rotation generators (4x4 skew matrices), so every
    s-line is an isometric copy of the base curve and the frame coefficients
    have the closed forms <A T, N> (xi) and <C T, N> (eta) etc. from the
    generators.  The defaults pair mirrored generators from the two chiral
    factors of so(4); they keep the congruence map a local diffeomorphism on
    the default window and satisfy Gamma_NB = eps3 * Upsilon_NB pointwise.
    """
    from .frenet import FAMILY_BUILDERS

    fam = FAMILY_BUILDERS[base_family](**params)
    if fam.form.c != 1 or fam.form.q != 0:
        raise ValueError("rotation congruences are built on S^3_0 base curves")
    A = DEFAULT_XI_GENERATOR if xi_generator is None else np.asarray(xi_generator)
    C = DEFAULT_ETA_GENERATOR if eta_generator is None else np.asarray(eta_generator)
    if not np.allclose(A @ C, C @ A):
        raise ValueError("generators must commute")
    s = np.linspace(*s_span, n[0])
    xi = np.linspace(*xi_span, n[1])
    eta = np.linspace(*eta_span, n[2])

    from scipy.linalg import expm

    rot_xi = np.stack([expm(x * A) for x in xi])     # (n_xi, 4, 4)
    rot_eta = np.stack([expm(e * C) for e in eta])   # (n_eta, 4, 4)
    R = np.einsum("jab,kbc->jkac", rot_xi, rot_eta)  # (n_xi, n_eta, 4, 4)

    def apply(deriv):
        def f(S, XI, ETA):
            base = deriv(s)                           # (n_s, 4)
            return np.einsum("jkab,ib->ijka", R, base)
        return f

    grid = build_grid(apply(fam.gamma), fam.form, s, xi, eta,
                      d1_fn=apply(fam.d1), d2_fn=apply(fam.d2), fd=fd)
    grid.generators = (A, C)
    return grid


# ---------------------------------------------------------------------------
# Coefficients and frame matrices
# ---------------------------------------------------------------------------


def grid_partial(field, grid, direction, fd=DerivConfig()):
    """Finite-difference partial along a grid axis ('s', 'xi', 'eta')."""
    ax = AXIS[direction]
    return derivative(field, grid.h[ax], axis=ax, deriv=1, acc=fd.order)


def _coefficients(grid, direction, fd):
    v = grid.form.v
    dT = grid_partial(grid.T, grid, direction, fd)
    dN = grid_partial(grid.N, grid, direction, fd)
    g_tn = inner(dT, grid.N, v)
    g_tb = inner(dT, grid.B, v)
    g_nb = inner(dN, grid.B, v)
    return g_tn, g_tb, g_nb


def xi_coefficients(grid, fd=DerivConfig()):
    """(Gamma_TN, Gamma_TB, Gamma_NB) -- projections of the xi-derivatives."""
    return _coefficients(grid, "xi", fd)


def eta_coefficients(grid, fd=DerivConfig()):
    """(Upsilon_TN, Upsilon_TB, Upsilon_NB) for the eta direction."""
    return _coefficients(grid, "eta", fd)


def coefficient_matrix(coeffs, eps):
    """3x3 frame-derivative matrix field from (c_TN, c_TB, c_NB).

    diag(eps) @ matrix is antisymmetric by construction.
    """
    c_tn, c_tb, c_nb = np.broadcast_arrays(*coeffs)
    e1, e2, e3 = eps
    z = np.zeros_like(c_tn)
    M = np.stack([
        np.stack([z, e2 * c_tn, e3 * c_tb], axis=-1),
        np.stack([-e1 * c_tn, z, e3 * c_nb], axis=-1),
        np.stack([-e1 * c_tb, -e2 * c_nb, z], axis=-1),
    ], axis=-2)
    return M


# ---------------------------------------------------------------------------
# Frame cross product (also re-exported by the electromagnetic module)
# ---------------------------------------------------------------------------


# ---------------------------------------------------------------------------
# Differential operators on ambient fields over the grid
# ---------------------------------------------------------------------------


def frame_components(F, grid):
    """Decompose an ambient field into ({T,N,B} components, gamma coefficient)."""
    v, c = grid.form.v, grid.form.c
    comps = np.stack([
        grid.eps[0] * inner(F, grid.T, v),
        grid.eps[1] * inner(F, grid.N, v),
        grid.eps[2] * inner(F, grid.B, v),
    ], axis=-1)
    g_coef = c * inner(F, grid.gamma, v)
    return comps, g_coef


def from_frame_components(comps, grid):
    """Rebuild the ambient field a_T T + a_N N + a_B B."""
    return (comps[..., 0, None] * grid.T + comps[..., 1, None] * grid.N
            + comps[..., 2, None] * grid.B)


def gradient(h, grid, fd=DerivConfig()):
    """Frame components (dh/ds, dh/dxi, dh/deta) of the gradient."""
    return np.stack([grid_partial(h, grid, d, fd) for d in ("s", "xi", "eta")],
                    axis=-1)


def divergence(F, grid, fd=DerivConfig()):
    """eps-weighted contraction: Div F = sum_d eps_d <e_d, dF/dd>."""
    v = grid.form.v
    e1, e2, e3 = grid.eps
    return (e1 * inner(grid.T, grid_partial(F, grid, "s", fd), v)
            + e2 * inner(grid.N, grid_partial(F, grid, "xi", fd), v)
            + e3 * inner(grid.B, grid_partial(F, grid, "eta", fd), v))


def curl(F, grid, fd=DerivConfig()):
    """Curl F = T x dF/ds + N x dF/dxi + B x dF/deta.

    Returns (frame components (..., 3), ambient coefficients (..., 3)).
    The ambient part collects the gamma-direction pieces of the derivatives,
    reported as coefficients of T x gamma, N x gamma, B x gamma.
    """
    basis = np.eye(3)
    total = 0.0
    ambient = []
    for i, d in enumerate(("s", "xi", "eta")):
        dF = grid_partial(F, grid, d, fd)
        comps, g_coef = frame_components(dF, grid)
        total = total + frame_cross(basis[i], comps, grid.eps)
        ambient.append(g_coef)
    return total, np.stack(ambient, axis=-1)


def abnormalities(grid, fd=DerivConfig()):
    """(Psi_T, Psi_N, Psi_B) from the coefficient formulas.

    Psi_T = eps3 Gamma_TB - eps2 Upsilon_TN; Psi_N = -eps3 tau - eps1 Upsilon_TN;
    Psi_B = eps1 Gamma_TB.  Each equals Curl X . X of the matching field.
    """
    e1, e2, e3 = grid.eps
    _, g_tb, _ = xi_coefficients(grid, fd)
    u_tn, _, _ = eta_coefficients(grid, fd)
    psi_t = e3 * g_tb - e2 * u_tn
    psi_n = -e3 * grid.tau - e1 * u_tn
    psi_b = e1 * g_tb
    return psi_t, psi_n, psi_b


def extended_frenet_matrices(grid, fd=DerivConfig()):
    """Frame-derivative matrices expressed through div/curl projections.

    The xi matrix uses Curl N . B, Psi_B and Div B; the eta matrix uses tau,
    Psi_N, Curl B . N and Curl B . T.  Both are assembled in the form that
    keeps diag(eps) @ M antisymmetric and reproduces the coefficient
    matrices through the projection identities.
    """
    e1, e2, e3 = grid.eps
    tau = grid.tau
    curlN, _ = curl(grid.N, grid, fd)
    curlB, _ = curl(grid.B, grid, fd)
    divB = divergence(grid.B, grid, fd)
    cnb = curlN[..., 2]
    cbn = curlB[..., 1]
    cbt = curlB[..., 0]
    psi_b = curlB[..., 2]
    psi_n = curlN[..., 1]
    z = np.zeros_like(divB)

    M_xi = np.stack([
        np.stack([z, e1 * e2 * cnb, e1 * e3 * psi_b], axis=-1),
        np.stack([-cnb, z, -e3 * divB], axis=-1),
        np.stack([-psi_b, e2 * divB, z], axis=-1),
    ], axis=-2)
    M_eta = np.stack([
        np.stack([z, -e1 * e2 * (e3 * tau + psi_n),
                  -e1 * e3 * (e2 * tau + cbn)], axis=-1),
        np.stack([e3 * tau + psi_n, z, e2 * e3 * cbt], axis=-1),
        np.stack([e2 * tau + cbn, -cbt, z], axis=-1),
    ], axis=-2)
    return M_xi, M_eta


def apply_frame_matrix(M, grid):
    """Ambient derivative prediction M @ (T, N, B) per grid point."""
    frame = np.stack([grid.T, grid.N, grid.B], axis=-2)  # (..., 3, 4)
    return M @ frame


# ---------------------------------------------------------------------------
# Anholonomic directional derivatives and the compatibility system
# ---------------------------------------------------------------------------


def tangent_jacobian(grid, fd=DerivConfig()):
    """J with rows g_d = dgamma/dd expressed in the frame: J[d, beta].

    g_d = sum_beta J[d, beta] e_beta, J[d, beta] = eps_beta <g_d, e_beta>.
    """
    v = grid.form.v
    frame = (grid.T, grid.N, grid.B)
    J = np.empty(grid.shape + (3, 3))
    for di, d in enumerate(("s", "xi", "eta")):
        g_d = grid_partial(grid.gamma, grid, d, fd)
        for bi, e in enumerate(frame):
            J[..., di, bi] = grid.eps[bi] * inner(g_d, e, v)
    return J


def frame_jacobian_inverse(grid, fd=DerivConfig()):
    """Inverse of the tangent Jacobian, for frame-directional derivatives.

    Raises FrameDegenerate when the congruence map fails to be a local
    diffeomorphism somewhere on the grid.
    """
    J = tangent_jacobian(grid, fd)
    det = np.linalg.det(J)
    if np.any(np.abs(det) < 1e-10):
        raise FrameDegenerate("congruence is not a local diffeomorphism; "
                              "frame-directional derivatives undefined")
    return np.linalg.inv(J)


def directional_derivatives(h, grid, fd=DerivConfig(), Jinv=None):
    """Derivatives of a scalar or ambient field along the T, N, B directions.

    D_alpha h = sum_d Jinv[alpha, d] * (grid partial of h along d).  For an
    (..., 4) ambient field the derivative is taken componentwise.  Returns
    an array with the direction index appended after the grid axes:
    (..., 3) for scalars, (..., 3, 4) for ambient fields.
    """
    if Jinv is None:
        Jinv = frame_jacobian_inverse(grid, fd)
    parts = np.stack([grid_partial(h, grid, d, fd) for d in ("s", "xi", "eta")],
                     axis=3)
    if parts.ndim == 4:
        return np.einsum("ijkad,ijkd->ijka", Jinv, parts)
    return np.einsum("ijkad,ijkdc->ijkac", Jinv, parts)


def _directional_curl_div(grid, fd, Jinv):
    """Curl and divergence of N and B built from frame-directional derivatives.

    Same frame expansions as `curl`/`divergence`, with d/ds, d/dxi, d/deta
    read as the derivatives along T, N, B.  Used by the compatibility system,
    whose mixed-derivative relations live in the frame directions.
    """
    v = grid.form.v
    basis = np.eye(3)
    out = {}
    for key, F in (("N", grid.N), ("B", grid.B)):
        dF = directional_derivatives(F, grid, fd, Jinv=Jinv)  # (..., 3, 4)
        total = 0.0
        div = 0.0
        for a, e in enumerate((grid.T, grid.N, grid.B)):
            comps = np.stack([grid.eps[0] * inner(dF[..., a, :], grid.T, v),
                              grid.eps[1] * inner(dF[..., a, :], grid.N, v),
                              grid.eps[2] * inner(dF[..., a, :], grid.B, v)],
                             axis=-1)
            total = total + frame_cross(basis[a], comps, grid.eps)
            div = div + grid.eps[a] * inner(e, dF[..., a, :], v)
        out[key] = (total, div)
    return out["N"][0], out["B"][0], out["B"][1]


def compatibility_residuals(h, grid, fd=DerivConfig(), method="auto"):
    """Left minus right of the three curl-gradient compatibility relations.

    d/ds, d/dxi, d/deta act along the frame directions T, N, B (the grid
    coordinates are anholonomic placeholders for the frame flows), so both
    the mixed-derivative commutators on the left and the curl/divergence
    coefficients on the right are evaluated with the frame-directional
    derivatives D_T, D_N, D_B obtained through the tangent Jacobian:

        D_xi D_s h - D_s D_xi h = eps2 kappa h_s + eps1 (CurlN.B) h_xi
                                  + eps1 (CurlB.B) h_eta
        D_s D_eta h - D_eta D_s h = (CurlN.N) h_xi + (CurlB.N) h_eta
        D_eta D_xi h - D_xi D_eta h = (eps3 CurlB.B
                                  + eps2 (eps3 tau + eps1 CurlN.N)) h_s
                                  - eps3 (DivB) h_xi + (CurlB.T) h_eta

    with h_s = D_T h etc.  On degenerate grids (rigid copies of one curve,
    where the grid directions do not span the tangent space) the derivatives
    fall back to plain grid partials, which commute, and the coefficients to
    the grid-partial curl/divergence.
    """
    e1, e2, e3 = grid.eps

    degenerate = False
    Jinv = None
    if method in ("auto", "anholonomic"):
        try:
            Jinv = frame_jacobian_inverse(grid, fd)
        except FrameDegenerate:
            if method == "anholonomic":
                raise
            degenerate = True
    if method == "grid" or degenerate:
        first = gradient(h, grid, fd)
        second = np.stack([gradient(first[..., a], grid, fd)
                           for a in range(3)], axis=-2)
        curlN, _ = curl(grid.N, grid, fd)
        curlB, _ = curl(grid.B, grid, fd)
        divB = divergence(grid.B, grid, fd)
    else:
        first = directional_derivatives(h, grid, fd, Jinv=Jinv)
        second = np.stack([directional_derivatives(first[..., a], grid, fd,
                                                   Jinv=Jinv)
                           for a in range(3)], axis=-2)
        curlN, curlB, divB = _directional_curl_div(grid, fd, Jinv)
    # second[..., a, b] = D_b (D_a h): outer derivative along b of D_a h.
    h_s, h_xi, h_eta = first[..., 0], first[..., 1], first[..., 2]
    comm = lambda outer, inner_: second[..., inner_, outer] - second[..., outer, inner_]

    lhs_a = comm(1, 0)           # D_xi D_s h - D_s D_xi h
    rhs_a = e2 * grid.kappa * h_s + e1 * curlN[..., 2] * h_xi \
        + e1 * curlB[..., 2] * h_eta
    lhs_b = comm(0, 2)           # D_s D_eta h - D_eta D_s h
    rhs_b = curlN[..., 1] * h_xi + curlB[..., 1] * h_eta
    lhs_c = comm(2, 1)           # D_eta D_xi h - D_xi D_eta h
    rhs_c = (e3 * curlB[..., 2] + e2 * (e3 * grid.tau + e1 * curlN[..., 1])) * h_s \
        - e3 * divB * h_xi + curlB[..., 0] * h_eta
    return lhs_a - rhs_a, lhs_b - rhs_b, lhs_c - rhs_c


# ---------------------------------------------------------------------------
# Simple record for the six coefficients
# ---------------------------------------------------------------------------


@dataclass
class FrameCoefficients:
    """The six anholonomic scalars on the grid."""

    gamma_tn: np.ndarray
    gamma_tb: np.ndarray
    gamma_nb: np.ndarray
    upsilon_tn: np.ndarray
    upsilon_tb: np.ndarray
    upsilon_nb: np.ndarray

    @classmethod
    def from_grid(cls, grid, fd=DerivConfig()):
        g = xi_coefficients(grid, fd)
        u = eta_coefficients(grid, fd)
        return cls(*g, *u)


def congruence_csv_rows(grid):
    """Iterate CSV rows `i,j,k,x0,x1,x2,x3` for the grid points."""
    ns, nxi, neta = grid.shape
    for i in range(ns):
        for j in range(nxi):
            for k in range(neta):
                x = grid.gamma[i, j, k]
                yield i, j, k, x[0], x[1], x[2], x[3]


def read_congruence_csv(path):
    """Read a congruence CSV with its `# hs=... hxi=... heta=... q=... c=...` header."""
    meta = {}
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if not first.startswith("#"):
            raise ValueError("congruence CSV must start with a '# hs=...' header")
        for tokenlike in first.lstrip("#").split():
            key, _, val = tokenlike.partition("=")
            meta[key] = float(val)
        data = np.genfromtxt(fh, delimiter=",", names=True)
    for key in ("hs", "hxi", "heta", "q", "c"):
        if key not in meta:
            raise ValueError(f"congruence CSV header missing {key}=")
    idx = np.stack([data["i"], data["j"], data["k"]]).astype(int)
    pts = np.stack([data["x0"], data["x1"], data["x2"], data["x3"]], axis=-1)
    shape = tuple(idx.max(axis=1) + 1)
    if idx.shape[1] != np.prod(shape):
        raise ValueError("congruence CSV does not cover a full grid")
    gamma = np.zeros(shape + (4,))
    gamma[idx[0], idx[1], idx[2]] = pts
    form = SpaceForm(int(meta["q"]), int(meta["c"]))
    s = np.arange(shape[0]) * meta["hs"]
    xi = np.arange(shape[1]) * meta["hxi"]
    eta = np.arange(shape[2]) * meta["heta"]
    return build_grid(lambda S, XI, ETA: gamma, form, s, xi, eta)
