"""Trajectories in the four propagation modes and scaled error series against
the numerical reference."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .elliptic import K_MOD
from .epicyclic import (cartesian_to_epicyclic_array, epicyclic_to_cartesian_array,
                        to_epicyclic)
from .hill import CartesianState, HillContext, propagate
from .lindstedt import build_model, evaluate, periods
from .short_period import mean_to_osculating_array, osculating_to_mean

__all__ = [
    "NUMERIC",
    "MEAN",
    "LINDSTEDT",
    "OSCULATING",
    "MODES",
    "ModeTrajectory",
    "ErrorSeries",
    "mean_model_from_cartesian",
    "sample_times",
    "propagate_mode",
    "error_series",
    "guiding_center_track",
    "x_velocity_reversals",
]

NUMERIC = "numeric"
MEAN = "mean"
LINDSTEDT = "lindstedt"
OSCULATING = "osculating"
MODES = (NUMERIC, MEAN, LINDSTEDT, OSCULATING)


@dataclass(frozen=True)
class ModeTrajectory:
    """Samples of one propagation mode.

    ``elements`` holds (phi, q, Phi, Q): the mean series for ``mean`` and
    ``lindstedt``, the corrected variables for ``osculating`` and the mapped
    numerical states for ``numeric``.
    """

    mode: str
    t: np.ndarray
    cartesian: np.ndarray
    elements: np.ndarray


@dataclass(frozen=True)
class ErrorSeries:
    """Analytic minus numeric errors on a common grid.

    Epicyclic errors: dphi (rad), dPhi_rel, deta, dxi. Cartesian errors are
    scaled by the mean-orbit sizes b, a = 2b and B = b w.
    """

    mode: str
    t: np.ndarray
    dphi: np.ndarray
    dPhi_rel: np.ndarray
    deta: np.ndarray
    dxi: np.ndarray
    dx_b: np.ndarray
    dy_a: np.ndarray
    dX_B: np.ndarray
    dY_B: np.ndarray

    COLUMNS = ("t", "dphi", "dPhi_rel", "deta", "dxi", "dx_b", "dy_a", "dX_B", "dY_B")

    @property
    def distance(self):
        """Scaled distance error sqrt((dx/b)^2 + (dy/a)^2)."""
        return np.hypot(self.dx_b, self.dy_a)

    def as_array(self):
        return np.column_stack([getattr(self, c) for c in self.COLUMNS])


def mean_model_from_cartesian(state, ctx=HillContext(), tables="standard"):
    """Mean elements and Lindstedt model for osculating Cartesian initial conditions.

    ``tables`` is a coefficient-table variant name or table dict.
    """
    mean = osculating_to_mean(to_epicyclic(state, ctx), ctx)
    return mean, build_model(mean, ctx=ctx, tables=tables)


def sample_times(t0, t_final, dt):
    n = int(math.floor(abs(t_final - t0) / dt + 1e-9))
    t = t0 + math.copysign(dt, t_final - t0) * np.arange(n + 1)
    if abs(t[-1] - t_final) > 1e-12 * max(1.0, abs(t_final)):
        t = np.append(t, t_final)
    return t


def _default_dt(model):
    return periods(model).T_O / 200.0


def _analytic(model, t, mode, ctx):
    q, Q, phi, _ = evaluate(model, t)
    mean = np.column_stack([phi, q, np.full_like(q, model.Phi_prime), Q])
    el = mean_to_osculating_array(mean, ctx) if mode == OSCULATING else mean
    return el, epicyclic_to_cartesian_array(el, ctx)


def _numeric(state, ctx, t, rel_tol):
    traj = propagate(state, ctx, t[-1], rel_tol, sample_dt=abs(t[1] - t[0]) if len(t) > 1 else None)
    u = traj.states
    if len(traj.t) != len(t) or not np.allclose(traj.t, t, rtol=0, atol=1e-9 * max(1.0, abs(t[-1]))):
        raise RuntimeError("numeric sampling grid does not match the analytic grid")
    return u


def propagate_mode(state, ctx=HillContext(), t_final=None, mode=NUMERIC, sample_dt=None,
                   rel_tol=1e-12, tables="standard"):
    """Propagate osculating Cartesian initial conditions in the requested mode.

    Analytic modes map the initial state to mean elements first. The default
    spacing is T_O / 200 and the default span one libration period.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    mean, model = mean_model_from_cartesian(state, ctx, tables)
    dt = sample_dt or _default_dt(model)
    if t_final is None:
        t_final = state.t + periods(model).T_L
    t = sample_times(state.t, t_final, dt)
    if mode == NUMERIC:
        u = _numeric(state, ctx, t, rel_tol)
        return ModeTrajectory(mode, t, u, cartesian_to_epicyclic_array(u, ctx))
    el, u = _analytic(model, t, mode, ctx)
    return ModeTrajectory(mode, t, u, el)


def error_series(state, ctx=HillContext(), t_final=None, mode=MEAN, sample_dt=None,
                 rel_tol=1e-12, concurrent=False, tables="standard"):
    """Errors of an analytic mode against numerical propagation of ``state``.

    With ``concurrent=True`` the numeric and analytic legs run in two threads;
    the results are identical to the sequential evaluation.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    mean, model = mean_model_from_cartesian(state, ctx, tables)
    dt = sample_dt or _default_dt(model)
    if t_final is None:
        t_final = state.t + periods(model).T_L
    t = sample_times(state.t, t_final, dt)

    def analytic_leg():
        if mode == NUMERIC:
            u = _numeric(state, ctx, t, rel_tol)
            return cartesian_to_epicyclic_array(u, ctx), u
        return _analytic(model, t, mode, ctx)

    def numeric_leg():
        return _numeric(state, ctx, t, rel_tol)

    if concurrent:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fa, fn = pool.submit(analytic_leg), pool.submit(numeric_leg)
            (el, ua), un = fa.result(), fn.result()
    else:
        el, ua = analytic_leg()
        un = numeric_leg()
    en = cartesian_to_epicyclic_array(un, ctx)
    # align the unwrapped numeric phase with the analytic branch
    en[:, 0] += 2.0 * math.pi * np.round((el[0, 0] - en[0, 0]) / (2.0 * math.pi))

    w = ctx.omega
    b = math.sqrt(2.0 * model.Phi_prime / w)
    a, B = 2.0 * b, b * w
    d = el - en
    du = ua - un
    return ErrorSeries(
        mode, t,
        dphi=d[:, 0],
        dPhi_rel=d[:, 2] / en[:, 2],
        deta=2.0 * K_MOD * d[:, 1] / a,
        dxi=d[:, 3] / (2.0 * K_MOD * B),
        dx_b=du[:, 0] / b, dy_a=du[:, 1] / a, dX_B=du[:, 2] / B, dY_B=du[:, 3] / B,
    )


def guiding_center_track(elements, ctx=HillContext()):
    """Guiding-center coordinates (x_C, y_C) = (Q / (k w), 2 k q) of element samples."""
    el = np.asarray(elements)
    return el[:, 3] / (K_MOD * ctx.omega), 2.0 * K_MOD * el[:, 1]


def x_velocity_reversals(t, xc, yc, window=0.1):
    """Indices where dx_C/dt changes sign while |y_C| is within ``window`` of its maximum.

    Returns the reversal indices near the y_C maximum and near the y_C minimum.
    """
    vx = np.gradient(xc, t)
    flips = np.nonzero(np.sign(vx[1:]) != np.sign(vx[:-1]))[0]
    span = np.max(yc) - np.min(yc)
    top = flips[yc[flips] > np.max(yc) - window * span]
    bottom = flips[yc[flips] < np.min(yc) + window * span]
    return top, bottom
