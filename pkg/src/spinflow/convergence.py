"""Refinement-study helpers: run a measurement at several resolutions and
fit the error decay slope."""

import numpy as np


def fit_slope(hs, errs):
    """Least-squares slope of log(err) against log(h).

    Zero or non-finite errors (exactly-resolved cases) return +inf: the
    quantity converged faster than measurable.
    """
    hs = np.asarray(hs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if np.any(errs <= 0) or not np.all(np.isfinite(errs)):
        return float("inf")
    return float(np.polyfit(np.log(hs), np.log(errs), 1)[0])


def refinement_study(measure, levels):
    """measure(level) -> (h, err); returns dict with hs, errs, slope."""
    hs, errs = [], []
    for lv in levels:
        h, e = measure(lv)
        hs.append(h)
        errs.append(e)
    return {"hs": hs, "errs": errs, "slope": fit_slope(hs, errs)}


def slope_within(slope, target, tol=0.3):
    if slope == float("inf"):
        return True  # converged below measurement floor
    return abs(slope - target) <= tol
