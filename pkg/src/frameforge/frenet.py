"""Frenet frames for non-null curves on S^3_q(1) and H^3_q(-1).

A unit-speed curve gamma(s) on the quadric <gamma, gamma> = c carries the
frame {T, N, B} with causal signs eps = (eps1, eps2, eps3) satisfying

    gamma'' = -eps1 c gamma + eps2 kappa N
    N'      = -eps1 kappa T + eps3 tau B
    B'      = -eps2 tau N

(primes are ambient derivatives; the gamma term is the quadric's second
fundamental form).  The frame is extracted pointwise: kappa is the norm of
V = gamma'' + eps1 c gamma, N the normalization of V, and B the metric
orthogonal complement of {gamma, T, N} with orientation det > 0.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .fd import DerivConfig, derivative
from .pseudo_metric import inner, metric_signs, norm
from .space_form import SpaceForm, project_to_form

KAPPA_MIN = 1e-8


class NonNullViolation(ValueError):
    """Raised when a tangent vector is lightlike within tolerance."""


class FrameDegenerate(RuntimeError):
    """Raised when the frame cannot be constructed on a whole window."""


# ---------------------------------------------------------------------------
# Built-in analytic curve families (exact derivatives available)
# ---------------------------------------------------------------------------


class _Family:
    def __init__(self, name, form, gamma, d1, d2, period=None):
        self.name = name
        self.form = form
        self.gamma = gamma
        self.d1 = d1
        self.d2 = d2
        self.period = period


def _great_circle():
    z = np.zeros_like

    def g(s):
        return np.stack([np.cos(s), np.sin(s), z(s), z(s)], axis=-1)

    def d1(s):
        return np.stack([-np.sin(s), np.cos(s), z(s), z(s)], axis=-1)

    def d2(s):
        return -g(s)

    return _Family("great-circle", SpaceForm(0, 1), g, d1, d2, period=2 * np.pi)


def _small_circle(r=1 / np.sqrt(2)):
    if not 0 < r < 1:
        raise ValueError("small-circle radius must lie in (0, 1)")
    h = np.sqrt(1 - r * r)

    def g(s):
        return np.stack(
            [r * np.cos(s / r), r * np.sin(s / r), np.full_like(s, h), np.zeros_like(s)],
            axis=-1,
        )

    def d1(s):
        return np.stack(
            [-np.sin(s / r), np.cos(s / r), np.zeros_like(s), np.zeros_like(s)], axis=-1
        )

    def d2(s):
        return np.stack(
            [-np.cos(s / r) / r, -np.sin(s / r) / r, np.zeros_like(s), np.zeros_like(s)],
            axis=-1,
        )

    return _Family("small-circle", SpaceForm(0, 1), g, d1, d2, period=2 * np.pi * r)


def _de_sitter():
    z = np.zeros_like

    def g(s):
        return np.stack([np.sinh(s), z(s), np.cosh(s), z(s)], axis=-1)

    def d1(s):
        return np.stack([np.cosh(s), z(s), np.sinh(s), z(s)], axis=-1)

    def d2(s):
        return g(s)

    return _Family("de-sitter", SpaceForm(1, 1), g, d1, d2)


def _hyperbolic_geodesic():
    z = np.zeros_like

    def g(s):
        return np.stack([np.cosh(s), np.sinh(s), z(s), z(s)], axis=-1)

    def d1(s):
        return np.stack([np.sinh(s), np.cosh(s), z(s), z(s)], axis=-1)

    def d2(s):
        return g(s)

    return _Family("hyperbolic-geodesic", SpaceForm(0, -1), g, d1, d2)


def _hopf_helix(a=np.pi / 6, alpha=0.8):
    # Unit speed requires alpha^2 cos^2 a + beta^2 sin^2 a = 1.
    ca, sa = np.cos(a), np.sin(a)
    b2 = (1 - alpha**2 * ca**2) / sa**2
    if b2 <= 0:
        raise ValueError("hopf-helix parameters violate the unit-speed constraint")
    beta = np.sqrt(b2)

    def g(s):
        return np.stack(
            [ca * np.cos(alpha * s), ca * np.sin(alpha * s),
             sa * np.cos(beta * s), sa * np.sin(beta * s)],
            axis=-1,
        )

    def d1(s):
        return np.stack(
            [-ca * alpha * np.sin(alpha * s), ca * alpha * np.cos(alpha * s),
             -sa * beta * np.sin(beta * s), sa * beta * np.cos(beta * s)],
            axis=-1,
        )

    def d2(s):
        return np.stack(
            [-ca * alpha**2 * np.cos(alpha * s), -ca * alpha**2 * np.sin(alpha * s),
             -sa * beta**2 * np.cos(beta * s), -sa * beta**2 * np.sin(beta * s)],
            axis=-1,
        )

    return _Family("hopf-helix", SpaceForm(0, 1), g, d1, d2, period=2 * np.pi)


FAMILY_BUILDERS = {
    "great-circle": _great_circle,
    "small-circle": _small_circle,
    "de-sitter": _de_sitter,
    "hyperbolic-geodesic": _hyperbolic_geodesic,
    "hopf-helix": _hopf_helix,
}


# ---------------------------------------------------------------------------
# Curve specification and frame records
# ---------------------------------------------------------------------------


@dataclass
class CurveSpec:
    """Either a built-in analytic family or a uniformly sampled point list."""

    form: SpaceForm
    s: np.ndarray
    points: np.ndarray = None
    family: _Family = None
    use_exact_derivatives: bool = True

    @classmethod
    def builtin(cls, name, n=2000, interval=None, use_exact_derivatives=True, **params):
        if name not in FAMILY_BUILDERS:
            raise ValueError(f"unknown curve family {name!r}")
        fam = FAMILY_BUILDERS[name](**params)
        if interval is None:
            interval = (0.0, fam.period if fam.period else 2 * np.pi)
        s = np.linspace(interval[0], interval[1], n)
        return cls(form=fam.form, s=s, points=fam.gamma(s), family=fam,
                   use_exact_derivatives=use_exact_derivatives)

    @classmethod
    def from_points(cls, points, h_s, form):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 4:
            raise ValueError("points must be an (n, 4) array")
        if len(points) < 7:
            raise ValueError("need at least 7 samples for the FD stencils")
        s = np.arange(len(points)) * h_s
        return cls(form=form, s=s, points=points, family=None,
                   use_exact_derivatives=False)

    @property
    def h(self):
        return float(self.s[1] - self.s[0])


@dataclass
class FrenetSample:
    """Per-arc-length frame record."""

    s: float
    gamma: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float
    eps: tuple


@dataclass
class FrenetData:
    """Vectorized frame data along a curve; indexable as FrenetSample records."""

    s: np.ndarray
    gamma: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    eps: tuple
    form: SpaceForm
    h: float = field(default=0.0)

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i):
        return FrenetSample(self.s[i], self.gamma[i], self.T[i], self.N[i],
                            self.B[i], self.kappa[i], self.tau[i], self.eps)


def _sign(x):
    return -1 if x < 0 else 1


def metric_complement(vectors, v):
    """Unit vector metrically orthogonal to the given row vectors in R^4_v.

    Computed as the Euclidean null space of the rows <e_i, .> (SVD), which
    is exactly the metric-orthogonal complement.
    """
    rows = np.asarray(vectors, dtype=float) * metric_signs(v)
    _, sv, vt = np.linalg.svd(rows)
    b = vt[-1]
    nb = norm(b, v)
    if nb < 1e-10:
        raise FrameDegenerate("orthogonal complement is lightlike")
    return b / nb


def _orient_binormal(gamma, T, N, B):
    """Flip B where det[gamma, T, N, B] < 0 so the frame is right-handed."""
    M = np.stack([gamma, T, N, B], axis=-2)
    det = np.linalg.det(M)
    return np.where(det[..., None] < 0, -B, B)


def frame_tnb(gamma, d1, d2, form, h=None, kappa_min=KAPPA_MIN, null_tol=1e-8):
    """Pointwise frame extraction from a curve and its two derivatives.

    Returns (T, N, B, kappa, tau_vector_input) where tau is *not* computed
    here (it needs a derivative of N along s); N, B are filled by parallel
    propagation on windows where kappa < kappa_min.
    """
    v = form.v
    tt = inner(d1, d1, v)
    if np.any(np.abs(tt) <= null_tol):
        raise NonNullViolation("lightlike tangent encountered")
    speed = np.sqrt(np.abs(tt))
    T = d1 / speed[..., None]
    eps1 = _sign(float(np.mean(np.sign(tt))))

    V = d2 + eps1 * form.c * gamma
    vv = inner(V, V, v)
    kappa = np.sqrt(np.abs(vv))
    good = kappa >= kappa_min

    n_pts = gamma.shape[0]
    N = np.zeros_like(gamma)
    B = np.zeros_like(gamma)
    eps2_arr = np.where(vv < 0, -1.0, 1.0)

    if np.any(good):
        eps2 = _sign(float(np.mean(eps2_arr[good])))
        N[good] = eps2 * V[good] / kappa[good][..., None]
    else:
        eps2 = None

    for i in range(n_pts):
        if good[i]:
            B[i] = metric_complement([gamma[i], T[i], N[i]], v)

    if not np.all(good):
        if h is None:
            raise FrameDegenerate(
                "kappa below threshold but no step size given for propagation"
            )
        N, B, eps2 = _fill_degenerate(gamma, T, N, B, good, form, eps2, h)

    B = _orient_binormal(gamma, T, N, B)
    kappa = np.where(good, kappa, 0.0)
    eps3 = _sign(float(np.mean(inner(B, B, v))))
    return T, N, B, kappa, (eps1, eps2, eps3)


def _fill_degenerate(gamma, T, N, B, good, form, eps2, h):
    """Complete the frame on kappa ~ 0 windows by parallel propagation."""
    v = form.v
    n_pts = len(gamma)
    idx_good = np.nonzero(good)[0]
    if len(idx_good) == 0:
        # Fully geodesic curve: seed a constant-direction completion at s0
        # and parallel-transport it along the curve.
        n0 = metric_complement([gamma[0], T[0]], v)
        seed = 0
        N[seed] = n0
        if eps2 is None:
            eps2 = _sign(float(inner(n0, n0, v)))
        B[seed] = metric_complement([gamma[seed], T[seed], N[seed]], v)
        start = seed
    else:
        start = idx_good[0]

    # March forward/backward from known samples, transporting N and B by the
    # parallelism rule M' = -c <M, T> gamma.
    for i in range(start + 1, n_pts):
        if not good[i]:
            N[i] = _transport_step(gamma, T, form, i - 1, i, N[i - 1], h)
            B[i] = _transport_step(gamma, T, form, i - 1, i, B[i - 1], h)
    for i in range(start - 1, -1, -1):
        if not good[i]:
            N[i] = _transport_step(gamma, T, form, i + 1, i, N[i + 1], -h)
            B[i] = _transport_step(gamma, T, form, i + 1, i, B[i + 1], -h)
    return N, B, eps2


def _transport_step(gamma, T, form, i, j, M, h):
    """One RK4 step of M' = -c <M, T> gamma from sample i to sample j."""
    c, v = form.c, form.v

    def rhs(g, t, m):
        return -c * inner(m, t, v) * g

    gm = 0.5 * (gamma[i] + gamma[j])
    tm = 0.5 * (T[i] + T[j])
    k1 = rhs(gamma[i], T[i], M)
    k2 = rhs(gm, tm, M + 0.5 * h * k1)
    k3 = rhs(gm, tm, M + 0.5 * h * k2)
    k4 = rhs(gamma[j], T[j], M + h * k3)
    return M + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def frenet_frame(curve, fd=DerivConfig()):
    """Frenet frame, curvature, and torsion along a curve specification."""
    form = curve.form
    gamma = curve.points
    h = curve.h
    if curve.family is not None and curve.use_exact_derivatives:
        d1 = curve.family.d1(curve.s)
        d2 = curve.family.d2(curve.s)
    else:
        d1 = derivative(gamma, h, axis=0, deriv=1, acc=fd.order)
        d2 = derivative(gamma, h, axis=0, deriv=2, acc=fd.order)

    T, N, B, kappa, eps = frame_tnb(gamma, d1, d2, form, h=h)

    dN = derivative(N, h, axis=0, deriv=1, acc=fd.order)
    tau = inner(dN, B, form.v)
    tau = np.where(kappa >= KAPPA_MIN, tau, 0.0)

    return FrenetData(s=curve.s.copy(), gamma=gamma.copy(), T=T, N=N, B=B,
                      kappa=kappa, tau=tau, eps=eps, form=form, h=h)


def frenet_residuals(frames, fd=DerivConfig()):
    """Euclidean norms of the three frame-equation defects per sample."""
    f = frames
    h, c = f.h, f.form.c
    eps1, eps2, eps3 = f.eps
    dT = derivative(f.T, h, axis=0, deriv=1, acc=fd.order)
    dN = derivative(f.N, h, axis=0, deriv=1, acc=fd.order)
    dB = derivative(f.B, h, axis=0, deriv=1, acc=fd.order)
    k = f.kappa[..., None]
    t = f.tau[..., None]
    r1 = dT + eps1 * c * f.gamma - eps2 * k * f.N
    r2 = dN + eps1 * k * f.T - eps3 * t * f.B
    r3 = dB + eps2 * t * f.N
    e = np.linalg.norm
    return e(r1, axis=-1), e(r2, axis=-1), e(r3, axis=-1)


def parallel_transport(frames, m0):
    """Transport m0 along the curve with vanishing covariant derivative.

    Integrates the ambient equation M' = -c <M, T> gamma with RK4 on cubic
    spline interpolants of gamma(s) and T(s); returns M at every sample.
    """
    f = frames
    v, c = f.form.v, f.form.c
    m0 = np.asarray(m0, dtype=float)
    if abs(inner(m0, f.gamma[0], v)) > 1e-6:
        raise ValueError("seed vector is not tangent to the form")
    g_sp = CubicSpline(f.s, f.gamma, axis=0)
    t_sp = CubicSpline(f.s, f.T, axis=0)

    def rhs(s, m):
        return -c * inner(m, t_sp(s), v) * g_sp(s)

    out = np.empty_like(f.gamma)
    out[0] = m0
    for i in range(len(f.s) - 1):
        s0, s1 = f.s[i], f.s[i + 1]
        hh = s1 - s0
        m = out[i]
        k1 = rhs(s0, m)
        k2 = rhs(s0 + hh / 2, m + hh / 2 * k1)
        k3 = rhs(s0 + hh / 2, m + hh / 2 * k2)
        k4 = rhs(s1, m + hh * k3)
        out[i + 1] = m + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return out


# ---------------------------------------------------------------------------
# Sampled-curve ingestion
# ---------------------------------------------------------------------------


def reparametrize_arclength(points, form, n_out=None):
    """Resample a point list uniformly in cumulative chord length.

    Chord lengths are measured with the ambient metric norm; the resampled
    points are re-projected onto the quadric.
    """
    points = np.asarray(points, dtype=float)
    seg = norm(np.diff(points, axis=0), form.v)
    if np.any(seg < 1e-14):
        raise ValueError("degenerate (repeated or lightlike) chord in input")
    s = np.concatenate([[0.0], np.cumsum(seg)])
    n_out = n_out or len(points)
    su = np.linspace(0.0, s[-1], n_out)
    sp = CubicSpline(s, points, axis=0)
    return project_to_form(sp(su), form), float(su[1] - su[0])


def read_curve_csv(path, form, n_out=None):
    """Read rows `s,x0,x1,x2,x3` (with header) into a CurveSpec."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    required = ("s", "x0", "x1", "x2", "x3")
    if data.dtype.names is None or any(k not in data.dtype.names for k in required):
        raise ValueError(f"curve CSV must have header columns {','.join(required)}")
    pts = np.stack([data[k] for k in required[1:]], axis=-1)
    if pts.ndim != 2 or len(pts) < 7:
        raise ValueError("curve CSV needs at least 7 data rows")
    if np.any(~np.isfinite(pts)):
        bad = int(np.nonzero(~np.isfinite(pts).all(axis=1))[0][0]) + 2
        raise ValueError(f"non-finite value in curve CSV at line {bad}")
    pts, h = reparametrize_arclength(pts, form, n_out=n_out)
    return CurveSpec.from_points(pts, h, form)
