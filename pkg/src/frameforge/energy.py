"""Bending energies of the frame fields along the s, xi and eta directions.

Each energy is a half-integral of a quadratic expression in the curvatures
(s-direction) or in the divergence/curl projections of the frame fields
(xi- and eta-directions), evaluated with composite Simpson quadrature on
the uniform parameter grid.  The eta-direction N-energy carries no 1/2
prefactor in its source form; `normalize_half=True` applies the 1/2
uniformly.
"""

from dataclasses import dataclass

import numpy as np

from .electromagnetic import MaxwellContext
from .pseudo_metric import inner


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite-rule settings; the panel count must be even and >= 2."""

    rule: str = "simpson"
    panels: int = 2

    def __post_init__(self):
        if self.rule != "simpson":
            raise ValueError("only composite Simpson quadrature is supported")
        if self.panels < 2 or self.panels % 2:
            raise ValueError("panel count must be even and >= 2")


@dataclass
class EnergyReport:
    """The nine bending energies plus the sampling metadata."""

    energy_T_s: float
    energy_N_s: float
    energy_B_s: float
    energy_T_xi: float
    energy_N_xi: float
    energy_B_xi: float
    energy_T_eta: float
    energy_N_eta: float
    energy_B_eta: float
    intervals: tuple
    samples: tuple
    normalize_half: bool = False

    def as_dict(self):
        d = {k: float(getattr(self, k)) for k in (
            "energy_T_s", "energy_N_s", "energy_B_s",
            "energy_T_xi", "energy_N_xi", "energy_B_xi",
            "energy_T_eta", "energy_N_eta", "energy_B_eta")}
        d["magnitudes"] = {k: abs(v) for k, v in d.items()}
        d["intervals"] = list(self.intervals)
        d["samples"] = list(self.samples)
        d["normalize_half"] = self.normalize_half
        return d


def simpson(y, h):
    """Composite Simpson on uniform samples; needs an even panel count."""
    y = np.asarray(y, dtype=float)
    n = len(y) - 1
    if n < 2 or n % 2:
        raise ValueError("composite Simpson needs an even panel count >= 2")
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())


def energy_s(frames, which, h=None):
    """Bending energy of T, N or B along the s-line.

    T: (1/2) Int (eps1 + c^2 |<gamma,gamma>| + eps2 kappa^2) ds
    N: (1/2) Int (eps2 + eps1 kappa^2 + eps3 tau^2) ds
    B: (1/2) Int (eps3 + eps2 tau^2) ds

    frames is FrenetData (or any object with s, gamma, kappa, tau, eps, form).
    """
    e1, e2, e3 = frames.eps
    h = h if h is not None else float(frames.s[1] - frames.s[0])
    kappa = np.asarray(frames.kappa, dtype=float)
    tau = np.asarray(frames.tau, dtype=float)
    if which == "T":
        c = frames.form.c
        g2 = np.abs(inner(frames.gamma, frames.gamma, frames.form.v))
        integrand = e1 + c * c * g2 + e2 * kappa**2
    elif which == "N":
        integrand = e2 + e1 * kappa**2 + e3 * tau**2
    elif which == "B":
        integrand = e3 + e2 * tau**2 + 0.0 * kappa
    else:
        raise ValueError(f"unknown frame vector {which!r}")
    return 0.5 * simpson(np.broadcast_to(integrand, kappa.shape), h)


def _context_of(source, fd=None):
    if isinstance(source, MaxwellContext):
        return source
    return MaxwellContext.from_grid(source, fd) if fd is not None else \
        MaxwellContext.from_grid(source)


def energy_xi(source, which, line=(0, 0), fd=None):
    """Bending energy along the xi-line at s-index line[0], eta-index line[1].

    T: (1/2) Int (eps1 + eps2 (CurlN.B)^2 + eps3 (CurlB.B)^2) dxi
    N: (1/2) Int (eps2 + eps1 (CurlN.B)^2 + eps3 (DivB)^2) dxi
    B: (1/2) Int (eps3 + eps1 (CurlB.B)^2 + eps2 (DivB)^2) dxi

    source is a MaxwellContext or a CongruenceGrid.
    """
    ctx = _context_of(source, fd)
    e1, e2, e3 = ctx.eps
    i, k = line
    sel = (i, slice(None), k)
    shape = ctx["gamma_tn"].shape
    curl_nb = (e1 * e3 * np.broadcast_to(ctx["gamma_tn"], shape))[sel]
    curl_bb = (e1 * e3 * np.broadcast_to(ctx["gamma_tb"], shape))[sel]
    div_b = np.broadcast_to(ctx["div_b"], shape)[sel]
    if which == "T":
        integrand = e1 + e2 * curl_nb**2 + e3 * curl_bb**2
    elif which == "N":
        integrand = e2 + e1 * curl_nb**2 + e3 * div_b**2
    elif which == "B":
        integrand = e3 + e1 * curl_bb**2 + e2 * div_b**2
    else:
        raise ValueError(f"unknown frame vector {which!r}")
    return 0.5 * simpson(integrand, ctx.steps[1])


def energy_eta(source, which, line=(0, 0), fd=None, normalize_half=False):
    """Bending energy along the eta-line at s-index line[0], xi-index line[1].

    T: (1/2) Int (eps1 + eps2 (eps3 tau + CurlN.N)^2
                       + eps3 (eps2 tau + CurlB.N)^2) deta
    N:       Int (eps2 + eps1 (eps3 tau + CurlN.N)^2
                       + eps2 (CurlB.T)^2) deta      -- no 1/2 as sourced;
                  normalize_half=True applies the 1/2 uniformly
    B: (1/2) Int (eps3 + eps1 (eps2 tau + CurlB.N)^2 + eps2 (CurlB.T)^2) deta
    """
    ctx = _context_of(source, fd)
    e1, e2, e3 = ctx.eps
    i, j = line
    sel = (i, j, slice(None))
    shape = np.broadcast_shapes(*(np.shape(ctx[k]) for k in
                                  ("tau", "z", "u", "w")))
    tau = np.broadcast_to(ctx["tau"], shape)[sel]
    z = np.broadcast_to(ctx["z"], shape)[sel]
    u = np.broadcast_to(ctx["u"], shape)[sel]
    w = np.broadcast_to(ctx["w"], shape)[sel]
    factor = 0.5
    if which == "T":
        integrand = e1 + e2 * (e3 * tau + z)**2 + e3 * (e2 * tau + u)**2
    elif which == "N":
        integrand = e2 + e1 * (e3 * tau + z)**2 + e2 * w**2
        factor = 0.5 if normalize_half else 1.0
    elif which == "B":
        integrand = e3 + e1 * (e2 * tau + u)**2 + e2 * w**2
    else:
        raise ValueError(f"unknown frame vector {which!r}")
    return factor * simpson(integrand, ctx.steps[2])


def energy_report(frames, source, line_xi=(0, 0), line_eta=(0, 0),
                  fd=None, normalize_half=False):
    """Assemble the nine energies into an EnergyReport.

    frames supplies the s-line data (FrenetData); source supplies the
    congruence coefficients (MaxwellContext or CongruenceGrid).
    """
    ctx = _context_of(source, fd)
    n_s = len(frames.s)
    n_xi = np.broadcast_shapes(*(np.shape(ctx[k]) for k in
                                 ("gamma_tn", "gamma_tb", "div_b")))[1]
    n_eta = np.broadcast_shapes(*(np.shape(ctx[k]) for k in
                                  ("tau", "z", "u", "w")))[2]
    h_s = float(frames.s[1] - frames.s[0])
    return EnergyReport(
        energy_T_s=energy_s(frames, "T"),
        energy_N_s=energy_s(frames, "N"),
        energy_B_s=energy_s(frames, "B"),
        energy_T_xi=energy_xi(ctx, "T", line_xi),
        energy_N_xi=energy_xi(ctx, "N", line_xi),
        energy_B_xi=energy_xi(ctx, "B", line_xi),
        energy_T_eta=energy_eta(ctx, "T", line_eta,
                                normalize_half=normalize_half),
        energy_N_eta=energy_eta(ctx, "N", line_eta,
                                normalize_half=normalize_half),
        energy_B_eta=energy_eta(ctx, "B", line_eta,
                                normalize_half=normalize_half),
        intervals=((n_s - 1) * h_s, (n_xi - 1) * ctx.steps[1],
                   (n_eta - 1) * ctx.steps[2]),
        samples=(n_s, n_xi, n_eta),
        normalize_half=normalize_half,
    )
