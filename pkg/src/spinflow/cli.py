"""Command-line experiment runner.

    spinflow run <config.json> [--out DIR]
    spinflow convergence <config.json> --levels N [--out DIR]
    spinflow list-presets
    spinflow validate <config.json>

Exit codes: 0 all checks passed (or an expected blow-up terminated the
run), 2 a check failed, 3 an unexpected blow-up, 4 invalid configuration.
"""

import argparse
import copy
import json
import os
import sys

import numpy as np

from spinflow import __version__
from spinflow.checks import run_checks
from spinflow.config import CHECKS, CONFIG_SCHEMA, PRESETS, load_config
from spinflow.convergence import fit_slope
from spinflow.csvio import manifest, write_json, write_rows_csv
from spinflow.errors import BlowUp, ConfigInvalid, SpinflowError
from spinflow.runners import execute

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_UNEXPECTED_BLOWUP = 3
EXIT_CONFIG_INVALID = 4


def _outdir(cfg, base):
    d = os.path.join(base, cfg["name"])
    os.makedirs(d, exist_ok=True)
    return d


def _write_artifacts(product, outdir):
    from spinflow.csvio import trajectory_csvs, write_field_csv

    paths = []
    traj = product.trajectory
    grid = product.grid
    if product.flow in ("hf", "mi", "ishimori"):
        if product.flow == "hf":
            S = product.hf_surface
            p = os.path.join(outdir, "hf_surface.csv")
            write_field_csv(p, grid, {"S1": S[0], "S2": S[1], "S3": S[2]})
            paths.append(p)
            for st in traj.states:  # 1D x-rows, flow time in the filename
                p = os.path.join(outdir, f"state_t{st.t:.9e}.csv")
                write_rows_csv(p, ["x", "S1", "S2", "S3"],
                               zip(grid.x, st.S[0], st.S[1], st.S[2]))
                paths.append(p)
        else:
            paths += trajectory_csvs(outdir, grid, traj)
        paths += _surface_dumps(product, outdir)
        meta = {
            "grid": grid.to_dict(),
            "params": product.config.get("params", {}),
            "residual_history": traj.residual_history,
            "times": traj.times,
        }
        p = os.path.join(outdir, "run_meta.json")
        write_json(p, meta)
        paths.append(p)
    elif product.flow == "mcf-graph":
        for t, phi in zip(traj.times, traj.phis):
            p = os.path.join(outdir, f"graph_t{t:.9e}.csv")
            write_field_csv(p, grid, {"phi": phi})
            paths.append(p)
    elif product.flow == "mcf-parametric":
        from spinflow.csvio import surface_csv
        for t, jet in zip(traj.times, traj.jets):
            p = os.path.join(outdir, f"surface_t{t:.9e}.csv")
            surface_csv(p, grid, jet.positions())
            paths.append(p)
    elif product.flow in ("rf-plain", "rf-normalized"):
        rows = [(t, v, rmean, rmin, rmax) for t, v, rmean, rmin, rmax in
                _rf_rows(product)]
        p = os.path.join(outdir, "rf_run.csv")
        write_rows_csv(p, ["t", "volume", "mean_R", "min_R", "max_R"], rows)
        paths.append(p)
    elif product.flow == "burgers":
        rows = []
        for prof in traj.profiles:
            for yy, vv in zip(prof.y, prof.values):
                rows.append((prof.t, yy, vv))
        p = os.path.join(outdir, "lambda_profile.csv")
        write_rows_csv(p, ["t", "y", "lambda"], rows)
        paths.append(p)
        if traj.blowup is not None:
            p = os.path.join(outdir, "blowup_summary.json")
            write_json(p, traj.blowup)
            paths.append(p)
    return paths


def _surface_dumps(product, outdir):
    """Forms/curvature and point-cloud dumps of the final surface.

    Skipped for the Ishimori flow (row means are not conserved there, so no
    periodic chart exists) and for degenerate surfaces.
    """
    from spinflow.christoffel import scalar_curvature_2d
    from spinflow.csvio import forms_csv, surface_csv
    from spinflow.errors import DegenerateMetric
    from spinflow.surface import curvatures, fundamental_forms, jet_from_spin

    if product.flow == "ishimori":
        return []
    grid = product.grid
    order = product.params.order if product.params.order in (2, 4) else 4
    try:
        if product.flow == "hf":
            jet = jet_from_spin(product.hf_surface, grid, order,
                                y_mode="sampled")
            y_mode = "sampled"
        else:
            jet = jet_from_spin(product.trajectory.final.S, grid, order)
            y_mode = "periodic"
        forms = fundamental_forms(jet)
    except (DegenerateMetric, ValueError):
        return []
    H, K = curvatures(forms)
    R = scalar_curvature_2d(forms.E, forms.F, forms.G, grid, order,
                            y_mode=y_mode)
    p1 = os.path.join(outdir, "forms_final.csv")
    forms_csv(p1, grid, forms, H, K, R)
    p2 = os.path.join(outdir, "surface_final.csv")
    surface_csv(p2, grid, jet.positions())
    return [p1, p2]


def _rf_rows(product):
    from spinflow.ricciflow import conformal_scalar_curvature
    traj = product.trajectory
    order = product.config.get("params", {}).get("order", 2)
    fd = order if order in (2, 4) else 4
    for t, phi, vol in zip(traj.times, traj.phis, traj.volumes):
        R = conformal_scalar_curvature(phi, product.grid, fd)
        dA = np.exp(2.0 * phi) * product.grid.hx * product.grid.hy
        yield t, vol, float((R * dA).sum() / dA.sum()), float(R.min()), float(R.max())


def cmd_run(args):
    try:
        cfg = load_config(args.config)
    except ConfigInvalid as e:
        print(f"config invalid: {e}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    outdir = _outdir(cfg, args.out)
    expect_blowup = cfg.get("expect_blowup", False)
    blowup = None
    try:
        product = execute(cfg)
    except BlowUp as e:
        if not expect_blowup:
            print(f"unexpected blow-up: {e}", file=sys.stderr)
            return EXIT_UNEXPECTED_BLOWUP
        blowup = e
        product = None
    except (ConfigInvalid, ValueError) as e:
        # stability-guard and consistency violations are config problems
        print(f"config invalid: {e}", file=sys.stderr)
        return EXIT_CONFIG_INVALID

    results = []
    paths = []
    if product is not None:
        burgers_blowup = (product.flow == "burgers"
                          and getattr(product.trajectory, "blowup", None))
        paths = _write_artifacts(product, outdir)
        results = run_checks(product, cfg.get("checks", ()), outdir)
        if expect_blowup and not (burgers_blowup or blowup):
            print("expected a blow-up but none occurred", file=sys.stderr)
            return EXIT_CHECK_FAILED

    report = {
        "spinflow_version": __version__,
        "config": cfg,
        "checks": [r.to_dict() for r in results],
        "blowup": None if blowup is None else
                  {"t_est": blowup.t_est, "reason": blowup.reason},
        "artifacts": manifest(paths),
    }
    report_path = os.path.join(outdir, "report.json")
    write_json(report_path, report)
    all_ok = all(r.passed for r in results)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}")
    print(f"report: {report_path}")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def cmd_convergence(args):
    try:
        cfg = load_config(args.config)
    except ConfigInvalid as e:
        print(f"config invalid: {e}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    levels = args.levels
    base = cfg["grid"]
    coarsest_fac = 2 ** (levels - 1)
    if base["nx"] % coarsest_fac or base["ny"] % coarsest_fac \
            or base["nx"] // coarsest_fac < 8 or base["ny"] // coarsest_fac < 8:
        print("grid does not support the requested number of halvings",
              file=sys.stderr)
        return EXIT_CONFIG_INVALID
    outdir = _outdir(cfg, args.out)

    rows = []
    metric_names = None
    hs = []
    series = {}
    for lev in range(levels):
        fac = 2 ** (levels - 1 - lev)
        lcfg = copy.deepcopy(cfg)
        lcfg["grid"]["nx"] = base["nx"] // fac
        lcfg["grid"]["ny"] = base["ny"] // fac
        p = lcfg.setdefault("params", {})
        if "dt" in p:
            p["dt"] = p["dt"] * fac**2
        if "steps" in p:
            p["steps"] = max(1, p["steps"] // fac**2)
            if "stride" in p:
                p["stride"] = max(1, min(p["stride"], p["steps"]))
                p["steps"] -= p["steps"] % p["stride"]
        try:
            product = execute(lcfg)
        except BlowUp:
            print(f"level {lev}: blow-up; skipping", file=sys.stderr)
            continue
        results = run_checks(product, cfg.get("checks", ()))
        h = product.grid.hx
        hs.append(h)
        flat = {}
        for r in results:
            for key, val in _scalar_metrics(r).items():
                flat[f"{r.name}.{key}"] = val
        for key, val in flat.items():
            series.setdefault(key, []).append(val)
        rows.append((h, flat))
        print(f"level {lev}: nx={lcfg['grid']['nx']} h={h:.5g}")

    header = ["h"] + sorted(series)
    table_rows = []
    for h, flat in rows:
        table_rows.append([h] + [flat.get(k, float("nan")) for k in sorted(series)])
    slopes = ["slope"] + [fit_slope(hs, series[k]) if len(series[k]) == len(hs)
                          else float("nan") for k in sorted(series)]
    csv_path = os.path.join(outdir, "convergence.csv")
    write_rows_csv(csv_path, header, table_rows + [slopes])

    colw = max(len(k) for k in header) + 2
    print("".join(k.ljust(colw) for k in header))
    for row in table_rows + [slopes]:
        print("".join((f"{v:.3e}" if isinstance(v, float) else str(v)).ljust(colw)
                      for v in row))
    print(f"table: {csv_path}")
    return EXIT_OK


def _scalar_metrics(result):
    """Error-like scalars a refinement study can fit slopes on."""
    out = {}
    for key, val in result.metrics.items():
        if isinstance(val, float) and np.isfinite(val) and "slope" not in key:
            out[key] = val
        elif isinstance(val, list) and val and isinstance(val[-1], float) \
                and key in ("errors", "vector_residuals", "ux_residuals"):
            out[key] = val[-1]
        elif key == "reports":
            for rep in val:
                out[f"lax_max_norm_lam{rep['lambda']}_{rep['convention']}"] = \
                    rep["max_norm"]
        elif key == "residuals":
            for name, norms in val.items():
                out[f"{name}_max"] = norms["max_norm"]
        elif key == "gaps":
            for name, g in val[-1].items():
                out[f"gap_{name}"] = g
    return out


def cmd_list_presets(args):
    print("initial-condition presets:")
    for p in PRESETS:
        print(f"  {p}")
    print("\nchecks:")
    for c in CHECKS:
        print(f"  {c}")
    return EXIT_OK


def cmd_validate(args):
    try:
        load_config(args.config)
    except ConfigInvalid as e:
        print(f"config invalid: {e}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    print("config valid")
    return EXIT_OK


def cmd_schema(args):
    json.dump(CONFIG_SCHEMA, sys.stdout, indent=2)
    print()
    return EXIT_OK


def main(argv=None):
    ap = argparse.ArgumentParser(prog="spinflow",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config and its checks")
    p_run.add_argument("config")
    p_run.add_argument("--out", default="out")
    p_run.set_defaults(fn=cmd_run)

    p_conv = sub.add_parser("convergence",
                            help="rerun a config under grid halving")
    p_conv.add_argument("config")
    p_conv.add_argument("--levels", type=int, default=3)
    p_conv.add_argument("--out", default="out")
    p_conv.set_defaults(fn=cmd_convergence)

    p_lp = sub.add_parser("list-presets", help="list presets and checks")
    p_lp.set_defaults(fn=cmd_list_presets)

    p_val = sub.add_parser("validate", help="schema-validate a config")
    p_val.add_argument("config")
    p_val.set_defaults(fn=cmd_validate)

    p_sch = sub.add_parser("schema", help="print the config JSON schema")
    p_sch.set_defaults(fn=cmd_schema)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SpinflowError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
