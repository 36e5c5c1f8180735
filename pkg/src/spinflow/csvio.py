"""Deterministic CSV/JSON artifact writers.

All numeric output uses 17 significant digits so artifacts are
byte-reproducible across runs with identical configs and seeds.
"""

import hashlib
import json
import os

import numpy as np


def fmt(x):
    """17-significant-digit representation (round-trips float64 exactly)."""
    return f"{float(x):.17g}"


def write_field_csv(path, grid, columns):
    """Write per-node fields with header x,y,<names>, row-major (x fastest).

    ``columns`` is a dict name -> (ny, nx) array; iteration order of the
    dict fixes the column order.
    """
    names = list(columns)
    X, Y = grid.meshgrid()
    arrays = [np.asarray(columns[n]) for n in names]
    with open(path, "w") as fh:
        fh.write("x,y," + ",".join(names) + "\n")
        for j in range(grid.ny):
            for i in range(grid.nx):
                row = [fmt(X[j, i]), fmt(Y[j, i])]
                row += [fmt(a[j, i]) for a in arrays]
                fh.write(",".join(row) + "\n")


def write_rows_csv(path, header, rows):
    """Write generic rows (iterables of floats/strings) under a header."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v)
                              for v in row) + "\n")


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_default)
        fh.write("\n")


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON-serializable: {type(o)}")


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest(paths):
    """Relative-path -> sha256 map for the artifact manifest."""
    out = {}
    for p in paths:
        out[os.path.basename(p)] = sha256_file(p)
    return out


def spin_state_csv(path, grid, state):
    """One M-I snapshot: x,y,S1,S2,S3,u."""
    write_field_csv(path, grid, {
        "S1": state.S[0], "S2": state.S[1], "S3": state.S[2], "u": state.u,
    })


def forms_csv(path, grid, forms, H, K, R):
    """Fundamental-form and curvature dump: x,y,E,F,G,L,M,N,H,K,R."""
    write_field_csv(path, grid, {
        "E": forms.E, "F": forms.F, "G": forms.G,
        "L": forms.L, "M": forms.M, "N": forms.N,
        "H": H, "K": K, "R": R,
    })


def surface_csv(path, grid, positions):
    """Surface point cloud: x,y,r1,r2,r3."""
    write_field_csv(path, grid, {
        "r1": positions[0], "r2": positions[1], "r3": positions[2],
    })


def metric3_csv(path, grid, sample, detG):
    """3D metric sample dump: x,y,G11,...,G33,detG."""
    write_field_csv(path, grid, {
        "G11": sample.G11, "G12": sample.G12, "G13": sample.G13,
        "G22": sample.G22, "G23": sample.G23, "G33": sample.G33,
        "detG": detG,
    })


def trajectory_csvs(outdir, grid, traj, prefix="state"):
    """One CSV per stored stride, flow time tagged in the filename."""
    paths = []
    for st in traj.states:
        name = f"{prefix}_t{st.t:.9e}.csv"
        p = os.path.join(outdir, name)
        spin_state_csv(p, grid, st)
        paths.append(p)
    return paths
