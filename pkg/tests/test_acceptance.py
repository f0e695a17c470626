"""Acceptance suite: the ten gate criteria, one PASS/FAIL line each.

Run with `pytest -v -s tests/test_acceptance.py` to see the lines; each
criterion asserts at its stated tolerance.
"""

import itertools
import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conftest import FAMILIES, grid_scalars, interior
from frameforge import congruence as cg
from frameforge import electromagnetic as em
from frameforge import energy as en
from frameforge.fd import DerivConfig
from frameforge.frenet import (CurveSpec, frenet_frame, frenet_residuals)
from frameforge.pseudo_metric import inner

FD = DerivConfig()


def report(num, label, worst, tol, ok=None):
    ok = (worst <= tol) if ok is None else ok
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'}: {label} " \
           f"(worst {worst:.3e}, tol {tol:.0e})"
    print(line)
    assert ok, line


def frames_for(name, n=2000, **kw):
    return frenet_frame(CurveSpec.builtin(name, n=n, **kw))


def test_criterion_01_orthonormality():
    worst = 0.0
    for name in FAMILIES:
        f = frames_for(name, n=2000)
        v, c = f.form.v, f.form.c
        e1, e2, e3 = f.eps
        vecs = [f.gamma, f.T, f.N, f.B]
        targets = np.diag([c, e1, e2, e3]).astype(float)
        for i in range(4):
            for j in range(i, 4):
                dev = np.abs(inner(vecs[i], vecs[j], v) - targets[i, j]).max()
                worst = max(worst, dev)
    report(1, "frame orthonormality on all builtin fixtures", worst, 1e-6)


def test_criterion_02_frenet_residuals():
    worst_analytic = max(
        max(r.max() for r in frenet_residuals(frames_for(name)))
        for name in FAMILIES)

    def fd_err(n):
        exact = frames_for("hopf-helix", n=n)
        fd_only = frenet_frame(CurveSpec.builtin(
            "hopf-helix", n=n, use_exact_derivatives=False))
        return max(np.abs(fd_only.kappa - exact.kappa).max(),
                   np.abs(fd_only.tau - exact.tau).max())

    e200, e400 = fd_err(200), fd_err(400)
    ok = worst_analytic <= 1e-5 and e200 <= 1e-4 and e200 / e400 >= 8.0
    report(2, f"frenet residuals (analytic {worst_analytic:.1e}, "
           f"fd {e200:.1e}, ratio {e200 / e400:.1f}x)",
           worst_analytic, 1e-5, ok=ok)


def test_criterion_03_known_curvature():
    sc = frames_for("small-circle")
    worst = max(np.abs(sc.kappa - 1.0).max(), np.abs(sc.tau).max())
    for name in ("great-circle", "hyperbolic-geodesic", "de-sitter"):
        worst = max(worst, np.abs(frames_for(name).kappa).max())
    report(3, "known curvature/torsion on circles and geodesics", worst, 1e-6)


def test_criterion_04_eps_antisymmetry(rot_grid):
    rng = np.random.default_rng(0)
    worst = 0.0

    def skew_defect(M, eps):
        W = np.einsum("ab,...bc->...ac", np.diag(eps).astype(float), M)
        return np.abs(W + np.swapaxes(W, -1, -2)).max()

    for eps in itertools.product((1, -1), repeat=3):
        coeffs = tuple(rng.normal(size=200) for _ in range(3))
        worst = max(worst, skew_defect(cg.coefficient_matrix(coeffs, eps),
                                       eps))
        ctx = em.MaxwellContext(eps=eps, steps=(0.1, 0.1, 0.1),
                                fields=em.MaxwellContext.derive_fields(
                                    eps, rng.normal(size=200),
                                    rng.normal(size=200),
                                    tuple(rng.normal(size=200) for _ in range(3)),
                                    tuple(rng.normal(size=200) for _ in range(3))))
        for d in ("xi", "eta"):
            worst = max(worst, skew_defect(
                em.lorentz_matrix(d, ctx, convention="frame"), eps))
    ctx_plus = em.MaxwellContext.from_grid(rot_grid, FD)
    for d in ("xi", "eta"):
        worst = max(worst, skew_defect(
            em.lorentz_matrix(d, ctx_plus, convention="paper"), (1, 1, 1)))
    M_xi, M_eta = cg.extended_frenet_matrices(rot_grid, FD)
    worst = max(worst, skew_defect(M_xi, rot_grid.eps),
                skew_defect(M_eta, rot_grid.eps))
    report(4, "eps-weighted antisymmetry of all assembled matrices",
           worst, 1e-14)


def test_criterion_05_identity_suite(rot_grid, rot_grid_fine):
    e1, e2, e3 = rot_grid.eps
    g_tn, g_tb, g_nb = cg.xi_coefficients(rot_grid, FD)
    u_tn, u_tb, u_nb = cg.eta_coefficients(rot_grid, FD)
    div_n = cg.divergence(rot_grid.N, rot_grid, FD)
    div_b = cg.divergence(rot_grid.B, rot_grid, FD)
    worst = max(
        np.abs(interior(g_nb + div_b)).max(),
        np.abs(interior(g_nb - (e1 * rot_grid.kappa + div_n))).max())
    formulas = {
        "T": (rot_grid.T, (e1 * (e3 * g_tb - e2 * u_tn), 0.0 * g_tn,
                           e2 * e3 * rot_grid.kappa + 0.0 * g_tn)),
        "N": (rot_grid.N, (e1 * e3 * g_nb,
                           -e2 * (e3 * rot_grid.tau + e1 * u_tn) + 0 * g_tn,
                           e1 * e3 * g_tn)),
        "B": (rot_grid.B, (e1 * e2 * u_nb,
                           -e2 * (e2 * rot_grid.tau + e1 * u_tb) + 0 * g_tn,
                           e1 * e3 * g_tb)),
    }
    for field, comps in formulas.values():
        direct, _ = cg.curl(field, rot_grid, FD)
        pred = np.stack(np.broadcast_arrays(*comps), axis=-1)
        worst = max(worst, np.abs(interior(direct - pred)).max())
    ok_identities = worst <= 1e-5

    h_fn = lambda S, XI, ETA: S + XI
    coarse = cg.compatibility_residuals(grid_scalars(rot_grid, h_fn),
                                        rot_grid, FD)
    fine = cg.compatibility_residuals(grid_scalars(rot_grid_fine, h_fn),
                                      rot_grid_fine, FD)
    c_max = max(np.abs(interior(r)).max() for r in coarse)
    f_max = max(np.abs(interior(r, margin=6)).max() for r in fine)
    ok = ok_identities and f_max <= 1e-4 and c_max / f_max >= 8.0
    report(5, f"identity suite (identities {worst:.1e}, compatibility "
           f"{f_max:.1e}, decay {c_max / f_max:.1f}x)",
           max(worst * 10, f_max), 1e-4, ok=ok)


def test_criterion_06_lorentz_cross_consistency():
    rng = np.random.default_rng(42)
    worst = 0.0
    for eps in itertools.product((1, -1), repeat=3):
        fields = em.MaxwellContext.derive_fields(
            eps, rng.normal(size=1000), rng.normal(size=1000),
            tuple(rng.normal(size=1000) for _ in range(3)),
            tuple(rng.normal(size=1000) for _ in range(3)))
        ctx = em.MaxwellContext(eps=eps, steps=(0.1, 0.1, 0.1), fields=fields)
        for d in ("xi", "eta"):
            conventions = [("frame", "frame")]
            if eps == (1, 1, 1):
                conventions.append(("paper", "paper"))
            for mv, lm in conventions:
                M = em.magnetic_vector(d, ctx, convention=mv)
                phi = em.lorentz_matrix(d, ctx, convention=lm)
                for i in range(3):
                    X = np.zeros(3)
                    X[i] = 1.0
                    got = em.frame_cross(M, X, eps)
                    worst = max(worst, np.abs(got - phi[..., i, :]).max())
    report(6, "frame_cross(M_d, X) = phi_d(X), 1000 random samples",
           worst, 1e-14)


def test_criterion_07_maxwell_round_trip(rot_grid):
    kappa0 = float(np.median(rot_grid.kappa))  # Frenet kappa of the s-lines
    state, ctx = em.synthesize_maxwell_state(
        rot_grid.s, rot_grid.xi, rot_grid.eta, eps=rot_grid.eps,
        kappa0=kappa0)
    div_e, div_mxi, div_meta, defect = em.maxwell_residuals(state, ctx)
    worst_res = max(np.abs(div_e).max(), np.abs(div_mxi).max(),
                    np.abs(div_meta).max(), defect)
    k_alg = np.abs(em.curvature_from_electric(state, ctx) - kappa0).max()
    k_fd = max(np.abs(em.curvature_from_magnetic(d, ctx, use_exact=False)
                      - kappa0).max() for d in ("xi", "eta"))
    ok = worst_res <= 1e-8 and k_alg <= 1e-8 and k_fd <= 1e-4
    report(7, f"maxwell round trip (residuals {worst_res:.1e}, "
           f"kappa algebraic {k_alg:.1e}, kappa fd {k_fd:.1e})",
           max(worst_res, k_alg), 1e-8, ok=ok)


def test_criterion_08_curl_dual_path(rot_grid):
    ctx = em.MaxwellContext.from_grid(rot_grid, FD)
    worst = 0.0
    for d in ("xi", "eta"):
        m = em.magnetic_vector(d, ctx, convention="paper")
        direct, _ = cg.curl(cg.from_frame_components(m, rot_grid),
                            rot_grid, FD)
        prop = em.magnetic_curl(d, ctx)
        worst = max(worst, np.abs(interior(direct - prop.frame)).max())
    report(8, "magnetic curl expansions vs direct grid curls", worst, 1e-3)


def test_criterion_09_energy_closed_forms(const_gc):
    f = frames_for("great-circle", n=2001, interval=(0.0, 2 * np.pi))
    err = max(abs(en.energy_s(f, "T") - 2 * np.pi),
              abs(en.energy_s(f, "B") - np.pi))
    ok = err <= 1e-8
    L = 0.5
    expect = {("xi", "T"): L / 2, ("xi", "N"): L / 2, ("xi", "B"): L / 2,
              ("eta", "T"): L / 2, ("eta", "N"): L, ("eta", "B"): L / 2}
    worst_const = 0.0
    for (d, which), target in expect.items():
        fn = en.energy_xi if d == "xi" else en.energy_eta
        worst_const = max(worst_const, abs(fn(const_gc, which) - target))
    ok = ok and worst_const <= 1e-10

    exact = np.exp(1.0) - 1.0
    errs = [abs(en.simpson(np.exp(np.linspace(0, 1, n)), 1.0 / (n - 1))
                - exact) for n in (9, 17)]
    order = np.log2(errs[0] / errs[1])
    ok = ok and order >= 3.9
    report(9, f"energy closed forms (s {err:.1e}, const {worst_const:.1e}, "
           f"simpson order {order:.2f})", err, 1e-8, ok=ok)


def test_criterion_10_cli_contract(tmp_path):
    configs = Path(__file__).parent / "configs"
    golden = Path(__file__).parent / "golden"
    ok = True
    for name in ("const", "rotate"):
        cwd = tmp_path / name
        cwd.mkdir()
        proc = subprocess.run(
            [sys.executable, "-m", "frameforge.cli", "all",
             "--config", str(configs / f"{name}.toml")],
            cwd=cwd, capture_output=True, text=True)
        ok = ok and proc.returncode == 0
        for cmd in ("frame", "congruence", "maxwell", "energy"):
            strip = lambda t: "\n".join(l for l in t.splitlines()
                                        if '"timestamp"' not in l)
            produced = strip((cwd / "out" / f"{cmd}.json").read_text())
            ok = ok and produced == strip(
                (golden / name / f"{cmd}.json").read_text())
    bad = tmp_path / "bad.csv"
    bad.write_text("s,x0\n0,1\n")
    proc = subprocess.run([sys.executable, "-m", "frameforge.cli", "frame",
                           "--input", str(bad)],
                          cwd=tmp_path, capture_output=True, text=True)
    ok = ok and proc.returncode == 2
    zk = tmp_path / "zerok.toml"
    zk.write_text("[congruence]\nkind = 'const'\n"
                  "base_family = 'great-circle'\nn = [17, 9, 9]\n")
    proc = subprocess.run([sys.executable, "-m", "frameforge.cli", "maxwell",
                           "--config", str(zk), "--synthesize"],
                          cwd=tmp_path, capture_output=True, text=True)
    ok = ok and proc.returncode == 3
    report(10, "CLI golden-file determinism and exit-code contract",
           0.0 if ok else 1.0, 0.5, ok=ok)
