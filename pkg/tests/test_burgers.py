import numpy as np

from spinflow.burgers import (evolve_characteristics, evolve_upwind,
                              exact_affine, exact_affine_residual)


def test_closed_form_solves_the_flow_identically():
    """lambda_t = lambda lambda_y holds for (a+y)/(t0-t) at machine level."""
    y = np.linspace(-3.0, 3.0, 41)
    for t in (0.0, 0.3, 0.7):
        for a, t0 in ((0.0, 1.0), (0.5, 2.0)):
            assert np.abs(exact_affine_residual(y, t, a, t0)).max() < 1e-12


def test_constant_profile_is_stationary():
    y = np.linspace(-1.0, 1.0, 101)
    tr = evolve_characteristics(lambda yy: np.full_like(yy, 0.7),
                                lambda yy: np.zeros_like(yy), y, t_end=2.0)
    assert tr.blowup is None
    assert np.abs(tr.profiles[-1].values - 0.7).max() < 1e-14
    assert tr.profiles[-1].t == 2.0


def test_linear_profile_tracks_exact_solution():
    """lambda(y,0) = y gives lambda = y/(1-t); exact until the blow-up."""
    y = np.linspace(-1.0, 1.0, 201)
    tr = evolve_characteristics(lambda yy: yy, np.ones_like, y, t_end=2.0,
                                n_save=64, grad_ceiling=1e6)
    for prof in tr.profiles:
        if prof.t <= 0.9:
            rel = np.abs(prof.values - exact_affine(y, prof.t)) / \
                np.maximum(np.abs(exact_affine(y, prof.t)), 1e-3)
            assert rel.max() < 1e-3
    assert tr.blowup is not None
    assert abs(tr.blowup["t_blowup_est"] - 1.0) < 0.02
    assert abs(tr.blowup["t_characteristics"] - 1.0) < 1e-12


def test_sine_profile_blowup_estimate():
    y = np.linspace(0.0, 2 * np.pi, 257)[:-1]
    tr = evolve_characteristics(np.sin, np.cos, y, t_end=2.0,
                                grad_ceiling=1e6)
    assert tr.blowup is not None
    assert abs(tr.blowup["t_blowup_est"] - 1.0) / 1.0 < 0.02
    assert abs(tr.blowup["t_characteristics"] - 1.0) < 1e-6


def test_sign_convention_flips_crossing():
    """With the - sign, positive-slope data steepens on the other flank."""
    y = np.linspace(0.0, 2 * np.pi, 257)[:-1]
    tr = evolve_characteristics(np.sin, np.cos, y, t_end=2.0, sign=-1.0)
    assert tr.blowup is not None
    assert abs(tr.blowup["t_characteristics"] - 1.0) < 1e-6


def test_upwind_cross_check_before_blowup():
    """First-order upwind agrees with characteristics at O(h) pre-crossing."""
    n = 512
    y = np.linspace(0.0, 2 * np.pi, n + 1)[:-1]
    h = y[1] - y[0]
    dt = 0.25 * h
    nst = int(round(0.5 / dt))
    up = evolve_upwind(np.sin(y), y, dt, nst, stride=nst)
    ch = evolve_characteristics(np.sin, np.cos, y, t_end=up.profiles[-1].t,
                                n_save=1)
    gap = np.abs(up.profiles[-1].values - ch.profiles[-1].values).max()
    assert gap < 10 * h


def test_upwind_blowup_detection():
    n = 512
    y = np.linspace(0.0, 2 * np.pi, n + 1)[:-1]
    h = y[1] - y[0]
    dt = 0.2 * h
    up = evolve_upwind(np.sin(y), y, dt, int(round(1.5 / dt)),
                       grad_ceiling=20.0)
    assert up.blowup is not None
    assert 0.8 < up.blowup["t_blowup_est"] < 1.2
