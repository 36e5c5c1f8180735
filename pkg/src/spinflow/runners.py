"""Execute a validated config: build initial data, run the flow, collect
artifacts for the check layer."""

from dataclasses import dataclass, field

import numpy as np

from spinflow import presets
from spinflow.errors import ConfigInvalid
from spinflow.evolve import evolve_hf, evolve_ishimori, evolve_mi, hf_assemble_surface
from spinflow.graphmcf import GraphState, mcf_evolve, parametric_mcf_evolve
from spinflow.grid import Grid2D
from spinflow.ricciflow import (ConformalMetric2D, CoupledRFState,
                                coupled_rf_evolve, rf_evolve)
from spinflow.burgers import evolve_characteristics
from spinflow.spin import FlowParams


@dataclass
class RunProduct:
    """Everything a check needs about a completed run."""

    config: dict
    grid: Grid2D
    flow: str
    params: FlowParams
    trajectory: object = None
    hf_surface: np.ndarray = None       # assembled S(x, y) for HF runs
    extras: dict = field(default_factory=dict)


def build_grid(cfg):
    g = cfg["grid"]
    return Grid2D(g["nx"], g["ny"], g["Lx"], g["Ly"],
                  g.get("x0", 0.0), g.get("y0", 0.0))


def spin_initial(cfg, grid):
    init = cfg["initial"]
    kind = init["preset"]
    if kind == "constant":
        return presets.constant_spin(grid, tuple(init.get("direction", (0, 0, 1))))
    if kind == "magnon":
        return presets.magnon_spin(grid, init.get("theta", np.pi / 3),
                                   init.get("k_mode", 1),
                                   init.get("phase", 0.0))
    if kind == "random-smooth":
        return presets.twisted_spin(grid, init.get("bandwidth", 3),
                                    init.get("amplitude", 0.2),
                                    init["seed"], init.get("m_twist", 1))
    raise ConfigInvalid(f"preset {kind!r} does not build spin data")


def scalar_initial(cfg, grid):
    init = cfg["initial"]
    kind = init["preset"]
    if kind == "constant":
        return np.zeros(grid.shape)
    if kind == "fourier-mode":
        return presets.fourier_mode(grid, init.get("kx", 1), init.get("ky", 0),
                                    init.get("amplitude", 0.3),
                                    init.get("phase", 0.0))
    if kind == "random-smooth":
        return presets.band_limited_scalar(grid, init.get("bandwidth", 3),
                                           init.get("amplitude", 0.3),
                                           init["seed"])
    if kind == "sphere-cap":
        return presets.sphere_cap(grid, init.get("rho0", 1.0),
                                  init.get("s_blend", 0.9),
                                  init.get("s_flat", 0.985))
    raise ConfigInvalid(f"preset {kind!r} does not build scalar data")


def torus_embedding(grid, R_major=1.6, rho_minor=0.6):
    X, Y = grid.meshgrid()
    return np.stack([
        (R_major + rho_minor * np.cos(X)) * np.cos(Y),
        (R_major + rho_minor * np.cos(X)) * np.sin(Y),
        rho_minor * np.sin(X),
    ])


def flow_params(cfg, grid):
    p = cfg.get("params", {})
    return FlowParams(
        dt=p.get("dt", 0.1 * min(grid.hx, grid.hy) ** 2),
        integrator=p.get("integrator", "rk4"),
        project_each_step=p.get("project", True),
        order=p.get("order", 2),
        xi=tuple(p.get("xi", (0.0, 0.0, 0.0))),
        eta=tuple(p.get("eta", (0.0, 0.0, 0.0))),
        alpha2=p.get("alpha2", 0.5),
        J=tuple(p.get("J", (0.0, 0.0, 0.0))),
        ceiling_rhs=p.get("ceiling_rhs", 1e6),
        ceiling_u=p.get("ceiling_u", 1e6),
    )


def execute(cfg):
    """Run the configured flow; numerical errors propagate to the caller."""
    grid = build_grid(cfg)
    params = flow_params(cfg, grid)
    p = cfg.get("params", {})
    steps = p.get("steps", 100)
    stride = p.get("stride", max(1, steps // 8))
    if steps % stride:
        raise ConfigInvalid("params.steps must be a multiple of params.stride")
    flow = cfg["flow"]
    product = RunProduct(config=cfg, grid=grid, flow=flow, params=params)

    if flow == "hf":
        S0 = spin_initial(cfg, grid)[:, 0, :]
        product.trajectory = evolve_hf(S0, grid, params, steps, stride)
        product.hf_surface = hf_assemble_surface(S0, grid, params)
    elif flow == "mi":
        product.trajectory = evolve_mi(spin_initial(cfg, grid), grid, params,
                                       steps, stride)
    elif flow == "ishimori":
        product.trajectory = evolve_ishimori(spin_initial(cfg, grid), grid,
                                             params, steps, stride)
    elif flow == "mcf-graph":
        phi0 = scalar_initial(cfg, grid)
        product.trajectory = mcf_evolve(
            GraphState(phi=phi0, t=0.0, xi=params.xi), grid, params.dt,
            steps, stride, _fd_order(params),
            ceiling_grad=p.get("grad_ceiling", 1e3),
        )
    elif flow == "mcf-parametric":
        init = cfg["initial"]
        if init["preset"] != "torus":
            raise ConfigInvalid("mcf-parametric runs start from the torus preset")
        r0 = torus_embedding(grid, init.get("R_major", 1.6),
                             init.get("rho_minor", 0.6))
        product.trajectory = parametric_mcf_evolve(
            r0, grid, params.dt, steps, stride, _fd_order(params),
            xi=params.xi, J=params.J if any(params.J) else None)
    elif flow in ("rf-plain", "rf-normalized"):
        phi0 = scalar_initial(cfg, grid)
        product.trajectory = rf_evolve(
            ConformalMetric2D(phi=phi0), grid, params.dt, steps, stride,
            normalized=(flow == "rf-normalized"), order=_fd_order(params))
    elif flow.startswith("rf-coupled-"):
        variant = "7." + flow[-2:]
        phi0 = np.zeros(grid.shape)
        u0 = scalar_initial(cfg, grid)
        st = CoupledRFState(
            phi=phi0, u=u0,
            u_t=np.zeros(grid.shape) if variant in ("7.3", "7.5") else None,
            alpha=p.get("alpha", 0.0), beta=p.get("beta", 1.0),
            k=p.get("k", 0.0))
        product.trajectory = coupled_rf_evolve(
            st, grid, params.dt, steps, variant, _fd_order(params),
            metric_laplacian=p.get("metric_laplacian", True),
            freeze_metric=p.get("freeze_metric", False), stride=stride)
    elif flow == "burgers":
        product.trajectory = _run_burgers(cfg, grid, p)
    else:
        raise ConfigInvalid(f"unhandled flow {flow!r}")
    return product


def _fd_order(params):
    # graph/parametric/metric flows take a plain stencil order
    return params.order if params.order in (2, 4) else 4


def _run_burgers(cfg, grid, p):
    init = cfg["initial"]
    kind = init["preset"]
    sign = float(p.get("sign", 1.0))
    t_end = p.get("t_end", 2.0)
    ceiling = p.get("grad_ceiling", 1e6)
    if kind == "linear":
        a, t0 = init.get("a", 0.0), init.get("t0", 1.0)
        y = grid.y0 + np.linspace(-0.5 * grid.Ly, 0.5 * grid.Ly, grid.ny)
        lam0 = lambda yy: (a + yy) / t0
        lam0p = lambda yy: np.full_like(np.asarray(yy, dtype=float), 1.0 / t0)
    elif kind == "sine":
        y = grid.y
        kk = 2.0 * np.pi / grid.Ly
        amp = init.get("amplitude", 1.0) if "amplitude" in init else 1.0
        lam0 = lambda yy: amp * np.sin(kk * (yy - grid.y0))
        lam0p = lambda yy: amp * kk * np.cos(kk * (yy - grid.y0))
    else:
        raise ConfigInvalid("burgers runs start from the linear or sine preset")
    traj = evolve_characteristics(lam0, lam0p, y, t_end,
                                  n_save=p.get("steps", 32), sign=sign,
                                  grad_ceiling=ceiling)
    return traj
