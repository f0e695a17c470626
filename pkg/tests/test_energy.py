import numpy as np
import pytest

from frameforge import congruence as cg
from frameforge import energy as en
from frameforge.electromagnetic import MaxwellContext
from frameforge.fd import DerivConfig
from frameforge.frenet import CurveSpec, frenet_frame

FD = DerivConfig()


def frames_for(name, n=2001, **kw):
    return frenet_frame(CurveSpec.builtin(name, n=n, **kw))


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def test_simpson_exact_on_cubics():
    x = np.linspace(0.0, 2.0, 7)
    y = x**3 - 2 * x**2 + 5
    assert en.simpson(y, x[1] - x[0]) == pytest.approx(4 - 16 / 3 + 10,
                                                       abs=1e-12)


def test_simpson_rejects_odd_panels():
    with pytest.raises(ValueError):
        en.simpson(np.zeros(4), 0.1)
    with pytest.raises(ValueError):
        en.simpson(np.zeros(2), 0.1)


def test_simpson_convergence_order():
    exact = np.exp(1.0) - 1.0

    def err(n):
        x = np.linspace(0.0, 1.0, n)
        return abs(en.simpson(np.exp(x), x[1] - x[0]) - exact)

    order = np.log2(err(9) / err(17))
    assert order >= 3.9


def test_simpson_interval_additivity():
    x = np.linspace(0.0, 1.0, 33)
    y = np.sin(3 * x) + 2.0
    h = x[1] - x[0]
    whole = en.simpson(y, h)
    split = en.simpson(y[:17], h) + en.simpson(y[16:], h)
    assert abs(whole - split) < 1e-10


def test_quadrature_config_validation():
    en.QuadratureConfig(panels=4)
    with pytest.raises(ValueError):
        en.QuadratureConfig(panels=3)
    with pytest.raises(ValueError):
        en.QuadratureConfig(rule="trapezoid")


# ---------------------------------------------------------------------------
# s-direction closed forms
# ---------------------------------------------------------------------------


def test_great_circle_energies():
    f = frames_for("great-circle", interval=(0.0, 2 * np.pi))
    assert en.energy_s(f, "T") == pytest.approx(2 * np.pi, abs=1e-8)
    assert en.energy_s(f, "B") == pytest.approx(np.pi, abs=1e-8)


def test_small_circle_normal_energy():
    r = 1 / np.sqrt(2)
    L = 2 * np.pi * r
    f = frames_for("small-circle", interval=(0.0, L))
    # constant integrand 1 + kappa^2 = 2 over one period
    assert en.energy_s(f, "N") == pytest.approx(L, abs=1e-8)


def test_energy_s_doubled_panels_stable():
    a = en.energy_s(frames_for("hopf-helix", n=1001), "N")
    b = en.energy_s(frames_for("hopf-helix", n=2001), "N")
    assert abs(a - b) < 1e-8


# ---------------------------------------------------------------------------
# xi / eta closed forms on rigid grids
# ---------------------------------------------------------------------------


def test_const_grid_energies(const_gc):
    L = 0.5
    for which in ("T", "N", "B"):
        assert en.energy_xi(const_gc, which) == pytest.approx(L / 2,
                                                              abs=1e-10)
    assert en.energy_eta(const_gc, "T") == pytest.approx(L / 2, abs=1e-10)
    # the eta N-energy carries no 1/2 prefactor as sourced
    assert en.energy_eta(const_gc, "N") == pytest.approx(L, abs=1e-10)
    assert en.energy_eta(const_gc, "N", normalize_half=True) == \
        pytest.approx(L / 2, abs=1e-10)
    assert en.energy_eta(const_gc, "B") == pytest.approx(L / 2, abs=1e-10)


def test_sign_structure_all_plus(rot_grid):
    """For eps all-plus, each energy is at least half the interval length."""
    ctx = MaxwellContext.from_grid(rot_grid, FD)
    L_xi = rot_grid.h[1] * (rot_grid.shape[1] - 1)
    L_eta = rot_grid.h[2] * (rot_grid.shape[2] - 1)
    for which in ("T", "N", "B"):
        assert en.energy_xi(ctx, which, line=(5, 5)) >= L_xi / 2
        assert en.energy_eta(ctx, which, line=(5, 5)) >= L_eta / 2


def test_energy_xi_midpoint_oracle(rot_grid):
    """Simpson against a midpoint rule at 4x resolution on the same line."""
    fine = cg.rotation_congruence(n=(33, 65, 17))
    ctx = MaxwellContext.from_grid(rot_grid, FD)
    ctx_fine = MaxwellContext.from_grid(fine, FD)
    e1, e2, e3 = ctx.eps
    value = en.energy_xi(ctx, "N", line=(5, 5))

    shape = np.broadcast_shapes(np.shape(ctx_fine["gamma_tn"]),
                                np.shape(ctx_fine["div_b"]))
    curl_nb = np.broadcast_to(e1 * e3 * ctx_fine["gamma_tn"], shape)[5, :, 5]
    div_b = np.broadcast_to(ctx_fine["div_b"], shape)[5, :, 5]
    integrand = e2 + e1 * curl_nb**2 + e3 * div_b**2
    h = ctx_fine.steps[1]
    midpoint = 0.5 * np.sum((integrand[:-1] + integrand[1:]) / 2 * h)
    assert abs(value - midpoint) < 1e-6


def test_energy_report(rot_grid):
    f = frames_for("small-circle", n=201)
    rep = en.energy_report(f, rot_grid)
    d = rep.as_dict()
    assert len(d["magnitudes"]) == 9
    assert all(np.isfinite(v) for v in d["magnitudes"].values())
    assert rep.samples == (201, rot_grid.shape[1], rot_grid.shape[2])
    rep2 = en.energy_report(f, rot_grid, normalize_half=True)
    assert rep2.energy_N_eta == pytest.approx(rep.energy_N_eta / 2)
