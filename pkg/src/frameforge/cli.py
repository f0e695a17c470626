"""Command-line pipeline: fixtures or CSV in, JSON reports and CSV traces out.

Subcommands: frame, congruence, maxwell, energy, all.  Configuration comes
from a TOML file with sections mirroring the library modules; unknown keys
are rejected.  Exit codes: 0 success, 2 validation/input error,
3 degenerate computation, 4 residual-suite failure.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

try:
    import tomllib as tomli
except ModuleNotFoundError:
    import tomli

from . import congruence as cg
from . import electromagnetic as em
from . import energy as en
from .fd import DerivConfig
from .frenet import (CurveSpec, FrameDegenerate, NonNullViolation,
                     frenet_frame, frenet_residuals, read_curve_csv)
from .space_form import SpaceForm

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3
EXIT_RESIDUAL = 4


class ConfigError(ValueError):
    """Invalid or unknown configuration content."""


_SECTIONS = {
    "form": {"q", "c"},
    "frame": {"family", "n", "interval", "input", "params"},
    "congruence": {"kind", "n", "s_span", "xi_span", "eta_span",
                   "base_family", "input", "params"},
    "maxwell": {"synthesize", "strict_paper", "input", "kappa0"},
    "energy": {"panels", "normalize_half", "line_xi", "line_eta"},
    "fd": {"order"},
    "tolerances": {"residual"},
    "output": {"dir"},
}

_DEFAULTS = {
    "form": {"q": 0, "c": 1},
    "frame": {"family": "great-circle", "n": 2000, "interval": None,
              "input": None, "params": {}},
    "congruence": {"kind": "rotate", "n": [33, 17, 17],
                   "s_span": [0.2, 0.7], "xi_span": [0.0, 0.4],
                   "eta_span": [0.0, 0.4], "base_family": "small-circle",
                   "input": None, "params": {}},
    "maxwell": {"synthesize": False, "strict_paper": False, "input": None,
                "kappa0": None},
    "energy": {"panels": None, "normalize_half": False,
               "line_xi": [0, 0], "line_eta": [0, 0]},
    "fd": {"order": 4},
    "tolerances": {"residual": 1e-4},
    "output": {"dir": "out"},
}


def load_config(path=None, overrides=None):
    """Read the TOML config, validate keys, apply CLI overrides."""
    raw = {}
    if path is not None:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
    config = {}
    for section, defaults in _DEFAULTS.items():
        given = raw.pop(section, {})
        if not isinstance(given, dict):
            raise ConfigError(f"section [{section}] must be a table")
        unknown = set(given) - _SECTIONS[section]
        if unknown:
            raise ConfigError(
                f"unknown key(s) {sorted(unknown)} in section [{section}]")
        config[section] = {**defaults, **given}
    if raw:
        raise ConfigError(f"unknown config section(s) {sorted(raw)}")
    for key, value in (overrides or {}).items():
        section, name = key.split(".", 1)
        config[section][name] = value
    if config["form"]["q"] not in (0, 1):
        raise ConfigError("form.q must be 0 or 1")
    if config["form"]["c"] not in (1, -1):
        raise ConfigError("form.c must be 1 or -1")
    if config["fd"]["order"] not in (2, 4):
        raise ConfigError("fd.order must be 2 or 4")
    return config


def _stats(arr):
    arr = np.asarray(arr, dtype=float)
    flat = np.abs(arr).ravel()
    i = int(flat.argmax())
    return {
        "max": float(flat[i]),
        "mean": float(flat.mean()),
        "argmax": [int(x) for x in np.unravel_index(i, arr.shape)],
    }


def _form(config):
    return SpaceForm(q=config["form"]["q"], c=config["form"]["c"])


def _fd(config):
    return DerivConfig(order=config["fd"]["order"])


def _write_report(report, out_dir, name):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _report_skeleton(command, config):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "config": config,
        "flags": [],
        "traces": {},
        "summaries": {},
        "status": "PASS",
    }


def _build_frames(config):
    fc = config["frame"]
    form = _form(config)
    if fc["input"]:
        curve = read_curve_csv(fc["input"], form)
    else:
        interval = tuple(fc["interval"]) if fc["interval"] else None
        params = dict(fc["params"])
        if config["energy"]["panels"]:
            fc = {**fc, "n": config["energy"]["panels"] + 1}
        curve = CurveSpec.builtin(fc["family"], n=fc["n"], interval=interval,
                                  **params)
        if curve.form != form:
            raise ConfigError(
                f"builtin family {fc['family']!r} lives on q={curve.form.q}, "
                f"c={curve.form.c}, which conflicts with the [form] section")
    return frenet_frame(curve, _fd(config))


def _build_grid(config):
    cc = config["congruence"]
    fd = _fd(config)
    n = tuple(int(x) for x in cc["n"])
    if any(x < 7 for x in n):
        raise ConfigError("congruence grid needs at least 7 samples per axis")
    if cc["input"]:
        return cg.read_congruence_csv(cc["input"])
    params = dict(cc["params"])
    if cc["kind"] == "const":
        return cg.const_congruence(base_family=cc["base_family"], n=n,
                                   s_span=tuple(cc["s_span"]),
                                   xi_span=tuple(cc["xi_span"]),
                                   eta_span=tuple(cc["eta_span"]),
                                   fd=fd, **params)
    if cc["kind"] == "rotate":
        return cg.rotation_congruence(n=n, s_span=tuple(cc["s_span"]),
                                      xi_span=tuple(cc["xi_span"]),
                                      eta_span=tuple(cc["eta_span"]),
                                      base_family=cc["base_family"], **params)
    raise ConfigError(f"unknown congruence kind {cc['kind']!r}")


def cmd_frame(config):
    report = _report_skeleton("frame", config)
    frames = _build_frames(config)
    res = frenet_residuals(frames, _fd(config))
    tol = config["tolerances"]["residual"]
    report["summaries"]["frenet_residuals"] = _stats(res)
    report["summaries"]["kappa"] = _stats(frames.kappa)
    report["summaries"]["tau"] = _stats(frames.tau)
    report["summaries"]["eps"] = list(frames.eps)
    out_dir = Path(config["output"]["dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = out_dir / "frame_trace.csv"
    with open(trace, "w", encoding="utf-8") as fh:
        fh.write("s,kappa,tau,eps1,eps2,eps3\n")
        e1, e2, e3 = frames.eps
        for i in range(len(frames.s)):
            fh.write(f"{float(frames.s[i])!r},{float(frames.kappa[i])!r},"
                     f"{float(frames.tau[i])!r},{e1},{e2},{e3}\n")
    report["traces"]["frame"] = trace.name
    if report["summaries"]["frenet_residuals"]["max"] > tol:
        report["status"] = "FAIL"
    return report


def identity_suite(grid, fd):
    """Dual-path residuals of the divergence/curl identities on a grid.

    Formula values (in the anholonomic coefficients) are compared with
    direct grid divergences and curls of the frame fields; the interior of
    the grid is used so one-sided stencils do not dominate.
    """
    e1, e2, e3 = grid.eps
    g_tn, g_tb, g_nb = cg.xi_coefficients(grid, fd)
    u_tn, u_tb, u_nb = cg.eta_coefficients(grid, fd)
    kappa, tau = grid.kappa, grid.tau
    sl = (slice(3, -3),) * 3

    def err(a, b):
        return float(np.abs(np.broadcast_arrays(a, b)[0][sl]
                            - np.broadcast_arrays(b, a)[0][sl]).max())

    div_t = cg.divergence(grid.T, grid, fd)
    div_n = cg.divergence(grid.N, grid, fd)
    div_b = cg.divergence(grid.B, grid, fd)
    out = {
        "div_T": err(div_t, e2 * g_tn + e3 * u_tb),
        "div_N": err(div_n, -e1 * kappa + e3 * u_nb),
        "div_B": err(div_b, -e2 * g_nb),
        "gnb_plus_divB": err(g_nb + div_b, 0.0),
        "gnb_vs_e1kappa_plus_divN": err(g_nb, e1 * kappa + div_n),
    }
    curl_t, _ = cg.curl(grid.T, grid, fd)
    curl_n, _ = cg.curl(grid.N, grid, fd)
    curl_b, _ = cg.curl(grid.B, grid, fd)
    zero = np.zeros_like(np.broadcast_arrays(kappa, g_tn)[0])
    formulas = {
        "curl_T": np.stack(np.broadcast_arrays(
            e1 * (e3 * g_tb - e2 * u_tn), zero, e2 * e3 * kappa), axis=-1),
        "curl_N": np.stack(np.broadcast_arrays(
            e1 * e3 * g_nb, -e2 * (e3 * tau + e1 * u_tn), e1 * e3 * g_tn),
            axis=-1),
        "curl_B": np.stack(np.broadcast_arrays(
            e1 * e2 * u_nb, -e2 * (e2 * tau + e1 * u_tb), e1 * e3 * g_tb),
            axis=-1),
    }
    for name, direct in (("curl_T", curl_t), ("curl_N", curl_n),
                         ("curl_B", curl_b)):
        out[name] = err(direct, formulas[name])
    return out


def cmd_congruence(config):
    report = _report_skeleton("congruence", config)
    grid = _build_grid(config)
    fd = _fd(config)
    tol = config["tolerances"]["residual"]
    suite = identity_suite(grid, fd)
    report["summaries"]["identity_suite"] = suite

    ctx = em.MaxwellContext.from_grid(grid, fd)
    report["summaries"]["coefficients"] = {
        k: _stats(np.broadcast_to(ctx[k], grid.shape)) for k in (
            "gamma_tn", "gamma_tb", "gamma_nb",
            "upsilon_tn", "upsilon_tb", "upsilon_nb")}

    s3 = grid.s[:, None, None]
    xi3 = grid.xi[None, :, None]
    eta3 = grid.eta[None, None, :]
    h = s3 + xi3 + 0.0 * eta3
    res = cg.compatibility_residuals(h, grid, fd)
    comp = {k: _stats(v[(slice(3, -3),) * 3]) for k, v in
            zip(("a", "b", "c"), res)}
    report["summaries"]["compatibility"] = comp

    worst = max(list(suite.values())
                + [comp[k]["max"] for k in ("a", "b", "c")])
    report["summaries"]["worst_residual"] = worst
    if worst > tol:
        report["status"] = "FAIL"
    return report


def cmd_maxwell(config):
    report = _report_skeleton("maxwell", config)
    mc = config["maxwell"]
    fd = _fd(config)
    tol = config["tolerances"]["residual"]
    strict = bool(mc["strict_paper"])
    if strict:
        report["flags"].append(
            "strict-paper: the eta electric derivative uses the displayed "
            "repeated-first-component variant")
    if mc["synthesize"]:
        grid = _build_grid(config)
        kappa0 = mc["kappa0"]
        if kappa0 is None:
            kappa0 = float(np.median(grid.kappa))
        if abs(kappa0) < em.E_MIN:
            raise em.DivisionDegenerate(
                "synthesis requires nonzero curvature kappa")
        state, ctx = em.synthesize_maxwell_state(
            grid.s, grid.xi, grid.eta, eps=grid.eps, kappa0=kappa0, fd=fd)
    else:
        grid = _build_grid(config)
        ctx = em.MaxwellContext.from_grid(grid, fd)
        if mc["input"]:
            state = em.read_field_csv(mc["input"])
            if np.shape(state.E1_s) != grid.shape:
                raise ConfigError("field CSV grid does not match congruence")
        else:
            raise ConfigError("maxwell needs --synthesize or an --input CSV")

    # Exercise the strict-paper variant so the discrepancy can be flagged.
    c_default = em.electric_derivative("eta", state.E1_eta, state.E3_eta, ctx)
    c_strict = em.electric_derivative("eta", state.E1_eta, state.E3_eta, ctx,
                                      strict_paper=True)
    variant_gap = float(max(np.abs(a - b).max() for a, b in
                            zip(c_default, c_strict)))
    report["summaries"]["eta_derivative_variant_gap"] = variant_gap
    if strict and variant_gap > 0:
        report["flags"].append(
            f"strict-paper eta-derivative variant differs from the corrected "
            f"form by {variant_gap:.3e}")

    div_e, div_mxi, div_meta, defect = em.maxwell_residuals(state, ctx)
    report["summaries"]["residuals"] = {
        "div_E": _stats(div_e),
        "div_M_xi": _stats(div_mxi),
        "div_M_eta": _stats(div_meta),
        "transversality_defect": float(defect),
    }
    kappa_ref = ctx["kappa"]
    k_e = em.curvature_from_electric(state, ctx)
    report["summaries"]["kappa_electric"] = _stats(k_e - kappa_ref)
    sl = (slice(3, -3),) * 3
    for d in ("xi", "eta"):
        k_m = em.curvature_from_magnetic(d, ctx, use_exact=False)
        report["summaries"][f"kappa_magnetic_{d}"] = _stats(
            (k_m - kappa_ref)[sl])
    worst = max(report["summaries"]["kappa_electric"]["max"],
                report["summaries"]["kappa_magnetic_xi"]["max"],
                report["summaries"]["kappa_magnetic_eta"]["max"])
    report["summaries"]["worst_kappa_error"] = worst
    if mc["synthesize"] and worst > tol:
        report["status"] = "FAIL"
    return report


def cmd_energy(config):
    report = _report_skeleton("energy", config)
    frames = _build_frames(config)
    grid = _build_grid(config)
    ec = config["energy"]
    er = en.energy_report(frames, grid, line_xi=tuple(ec["line_xi"]),
                          line_eta=tuple(ec["line_eta"]), fd=_fd(config),
                          normalize_half=ec["normalize_half"])
    report["summaries"]["energies"] = er.as_dict()
    if not ec["normalize_half"]:
        report["flags"].append(
            "energy_N_eta carries no 1/2 prefactor (as sourced); "
            "set energy.normalize_half to apply it uniformly")
    if not all(np.isfinite(v) for v in
               report["summaries"]["energies"]["magnitudes"].values()):
        report["status"] = "FAIL"
    return report


_COMMANDS = {
    "frame": cmd_frame,
    "congruence": cmd_congruence,
    "maxwell": cmd_maxwell,
    "energy": cmd_energy,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="frameforge",
        description="Frame geometry pipelines on S^3_q(1) and H^3_q(-1)")
    parser.add_argument("command", choices=list(_COMMANDS) + ["all"])
    parser.add_argument("--config", type=str, default=None)
    parser.add_argument("--input", type=str, default=None)
    parser.add_argument("--out", type=str, default=None)
    parser.add_argument("--strict-paper", action="store_true", default=None)
    parser.add_argument("--synthesize", action="store_true", default=None)
    parser.add_argument("--panels", type=int, default=None)
    parser.add_argument("--fd-order", type=int, choices=(2, 4), default=None)
    parser.add_argument("--tol", type=float, default=None)
    return parser


def main(argv=None):
    threads = os.environ.get("FRAMEFORGE_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.out is not None:
        overrides["output.dir"] = args.out
    if args.strict_paper:
        overrides["maxwell.strict_paper"] = True
    if args.synthesize:
        overrides["maxwell.synthesize"] = True
    if args.panels is not None:
        overrides["energy.panels"] = args.panels
    if args.fd_order is not None:
        overrides["fd.order"] = args.fd_order
    if args.tol is not None:
        overrides["tolerances.residual"] = args.tol
    if args.input is not None:
        section = {"frame": "frame", "congruence": "congruence",
                   "maxwell": "maxwell", "energy": "frame",
                   "all": "frame"}[args.command]
        overrides[f"{section}.input"] = args.input

    try:
        config = load_config(args.config, overrides)
        commands = list(_COMMANDS) if args.command == "all" else [args.command]
        status = EXIT_OK
        for name in commands:
            report = _COMMANDS[name](config)
            path = _write_report(report, config["output"]["dir"], name)
            line = f"{name}: {report['status']} ({path})"
            print(line)
            if report["status"] != "PASS":
                status = EXIT_RESIDUAL
        return status
    except (FrameDegenerate, NonNullViolation, em.DivisionDegenerate) as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigError, ValueError, OSError, tomli.TOMLDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
