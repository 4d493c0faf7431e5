"""Orbit design from (a, rho): mean initial conditions, resonance tuning and
differential correction to exact periodic orbits of the Hill problem."""

from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp

from .elliptic import K_MOD
from .epicyclic import MEAN, EpicyclicState, from_epicyclic
from .hill import CartesianState, HillContext, _rhs, hamiltonian, state_transition
from .lindstedt import build_model, periods
from .short_period import mean_to_osculating

__all__ = [
    "DesignParams",
    "PeriodicOrbitResult",
    "TuningError",
    "CorrectionError",
    "GeometryError",
    "mean_initial_conditions",
    "tune_resonance",
    "tune_resonance_history",
    "design_to_cartesian",
    "default_pins",
    "section_crossing",
    "differential_correct",
]

log = logging.getLogger(__name__)

_COORDS = ("x", "y", "X", "Y")


@dataclass(frozen=True)
class DesignParams:
    """Reference-ellipse semi-major axis ``a``, minimum y-distance ``rho`` to the
    primary, deferent phase ``psi`` and epicycle phase ``phi0``."""

    a: float
    rho: float
    psi: float = math.pi / 2
    phi0: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not 0 < self.rho <= self.a:
            raise ValueError(f"rho must satisfy 0 < rho <= a, got rho={self.rho}, a={self.a}")


@dataclass(frozen=True)
class PeriodicOrbitResult:
    """Converged periodic orbit and its monodromy spectrum."""

    initial_state: CartesianState
    period: float
    iterations: int
    residual: np.ndarray
    monodromy_eigenvalues: np.ndarray
    pinned: tuple = ()
    history: list = field(default_factory=list, repr=False)

    @property
    def max_residual(self):
        return float(np.max(np.abs(self.residual)))


class TuningError(RuntimeError):
    """Secant iteration did not reach the target ratio."""

    def __init__(self, message, history):
        super().__init__(message)
        self.history = history


class CorrectionError(RuntimeError):
    """Newton correction did not converge."""

    def __init__(self, message, history):
        super().__init__(message)
        self.history = history


class GeometryError(ValueError):
    """Correction Jacobian is singular beyond the energy direction."""


def _Phi_of_a(a, w):
    b = a / 2.0
    return w * b * b / 2.0


def _a_of_Phi(Phi, w):
    return 2.0 * math.sqrt(2.0 * Phi / w)


def mean_initial_conditions(params, ctx=HillContext()):
    """Mean initial state and its Lindstedt model for the design parameters.

    Returns
    -------
    state : EpicyclicState
        Mean elements (phi'_0, q'_0, Phi', Q'_0).
    model : LindstedtModel or None
        None without gravity, where the libration frequency vanishes and the
        guiding center drifts instead of librating.
    """
    w = ctx.omega
    Phi = _Phi_of_a(params.a, w)
    M = (params.a - params.rho) / (2.0 * K_MOD)
    Om = build_model(Phi, 0.0, 0.0, ctx).Omega if ctx.mu > 0 else 0.0
    q0 = M * math.cos(params.psi)
    Q0 = Om * M * math.sin(params.psi)
    if M == 0:
        q0 = Q0 = 0.0
    state = EpicyclicState(params.phi0, q0, Phi, Q0, 0.0, MEAN)
    return state, build_model(state, ctx=ctx) if ctx.mu > 0 else None


def _ratio(params, ctx):
    _, model = mean_initial_conditions(params, ctx)
    return periods(model).r


def tune_resonance(params, target_r, ctx=HillContext(), tol=1e-6, max_iter=12):
    """Adjust ``a`` by the secant method on Phi' until T_L / T_O = ``target_r``.

    ``rho`` and ``psi`` are held fixed. Use :func:`tune_resonance_history`
    to also obtain the iterates.
    """
    return tune_resonance_history(params, target_r, ctx, tol, max_iter)[0]


def tune_resonance_history(params, target_r, ctx=HillContext(), tol=1e-6, max_iter=12):
    """Like :func:`tune_resonance` but also returns the iterate history.

    Returns
    -------
    params : DesignParams
    history : list of (Phi', r)
        Secant iterates after the starting point; its length is the iteration count.
    """
    if not target_r > 0:
        raise ValueError("target ratio must be positive")
    w = ctx.omega

    def at(Phi):
        p = replace(params, a=_a_of_Phi(Phi, w))
        return p, _ratio(p, ctx) - target_r

    P0 = _Phi_of_a(params.a, w)
    p0, f0 = at(P0)
    if abs(f0) < tol:
        return params, []
    P1 = P0 * 1.02
    _check_monotone(at, P0, P1)
    p1, f1 = at(P1)
    history = []
    for _ in range(max_iter):
        if f1 == f0:
            break
        P2 = P1 - f1 * (P1 - P0) / (f1 - f0)
        if not P2 > 0:
            break
        p2, f2 = at(P2)
        history.append((P2, f2 + target_r))
        log.debug("secant iterate Phi'=%.12g r=%.12g", P2, f2 + target_r)
        if abs(f2) < tol:
            return p2, history
        P0, f0, P1, f1 = P1, f1, P2, f2
    raise TuningError(f"resonance tuning did not converge in {max_iter} iterations", history)


def _check_monotone(at, P0, P1, samples=5):
    lo, hi = min(P0, P1), max(P0, P1)
    grid = np.linspace(lo - (hi - lo), hi + (hi - lo), samples)
    grid = grid[grid > 0]
    r = np.array([at(P)[1] for P in grid])
    d = np.diff(r)
    if not (np.all(d > 0) or np.all(d < 0)):
        log.warning("period ratio is not monotone over the secant bracket")
        return False
    return True


def design_to_cartesian(params, ctx=HillContext()):
    """Osculating Cartesian initial conditions for the design parameters."""
    mean, _ = mean_initial_conditions(params, ctx)
    if ctx.mu == 0:
        return from_epicyclic(mean, ctx)
    return from_epicyclic(mean_to_osculating(mean, ctx), ctx)


def section_crossing(state, ctx=HillContext(), coordinate="y", t_max=100.0, rel_tol=1e-12):
    """First crossing of ``coordinate = 0`` after ``state.t``.

    Moving a design seed onto a symmetry section (for instance y = 0)
    before correction lets that coordinate be pinned exactly.

    Returns
    -------
    CartesianState
        State at the crossing, with the crossed coordinate set to zero.
    """
    if coordinate not in _COORDS:
        raise ValueError(f"unknown coordinate {coordinate!r}")
    idx = _COORDS.index(coordinate)
    mu, w = ctx.mu, ctx.omega
    u0 = state.as_array()

    def event(t, u):
        return u[idx]
    event.terminal = True

    # skip a seed already on the section
    first = solve_ivp(lambda t, u: _rhs(u, mu, w), (state.t, state.t + 1e-6), u0,
                      method="DOP853", rtol=rel_tol, atol=rel_tol * np.linalg.norm(u0))
    u1 = first.y[:, -1]
    sol = solve_ivp(lambda t, u: _rhs(u, mu, w), (first.t[-1], state.t + t_max), u1,
                    method="DOP853", events=event, rtol=rel_tol,
                    atol=rel_tol * np.linalg.norm(u0))
    if not len(sol.t_events[0]):
        raise GeometryError(f"no {coordinate} = 0 crossing within {t_max}")
    u = sol.y_events[0][0].copy()
    u[idx] = 0.0
    return CartesianState.from_array(u, float(sol.t_events[0][0]))


def default_pins(guess, ctx=HillContext()):
    """Coordinates to hold fixed during correction.

    A seed on the x = 0 axis with Y close to zero pins both x and Y; otherwise
    the coordinate of smallest magnitude is pinned.
    """
    u = guess.as_array() if isinstance(guess, CartesianState) else np.asarray(guess, float)
    scale = max(np.linalg.norm(u), 1e-300)
    small = np.abs(u) <= 1e-6 * scale
    if small[0] and small[3]:
        return ("x", "Y")
    return (_COORDS[int(np.argmin(np.abs(u)))],)


def differential_correct(guess, period_guess, ctx=HillContext(), tol=1e-10, max_iter=10,
                         pin=None, rel_tol=1e-13, fix=None):
    """Newton correction of ``guess`` to a periodic orbit of period near ``period_guess``.

    Parameters
    ----------
    guess : CartesianState
    period_guess : float
    tol : float
        Success when every component of flow_T(s) - s is below ``tol``.
    pin : sequence of str, optional
        Coordinates held fixed; defaults to :func:`default_pins`.
    rel_tol : float
        Integrator tolerance for the flow and its state-transition matrix.
    fix : {None, "energy", "period"}
        Optional extra constraint. ``"period"`` keeps ``period_guess`` fixed;
        ``"energy"`` appends the condition H = H(guess). The default leaves the
        family direction to the minimum-norm step.

    Returns
    -------
    PeriodicOrbitResult

    Notes
    -----
    Unknowns are the free coordinates and the period. The Newton step is the
    minimum-norm least-squares solution of ``[Phi - I | f(s_T)] du = -F``,
    with singular values below 1e-10 sigma_max discarded. Rank loss beyond
    the energy direction (multi-revolution resonant orbits have a monodromy
    close to the identity) is accepted as long as the step can still remove
    most of the residual; otherwise :class:`GeometryError` is raised.
    """
    if tol < 1e-13:
        raise ValueError("tol must be at least 1e-13")
    if not period_guess > 0:
        raise ValueError("period guess must be positive")
    pins = tuple(pin) if pin is not None else default_pins(guess, ctx)
    for p in pins:
        if p not in _COORDS:
            raise ValueError(f"unknown coordinate {p!r}")
    if fix not in (None, "energy", "period"):
        raise ValueError(f"unknown constraint {fix!r}")
    free = [i for i, c in enumerate(_COORDS) if c not in pins]
    nf = len(free)
    u = guess.as_array().astype(float)
    H0 = hamiltonian(u, ctx)
    T = float(period_guess)
    history = []
    for it in range(max_iter + 1):
        phi, uf = state_transition(CartesianState.from_array(u), ctx, T, rel_tol,
                                   return_final=True)
        F = uf - u
        res = float(np.max(np.abs(F)))
        history.append((u.copy(), T, F.copy()))
        log.debug("iteration %d residual %.3e", it, res)
        if res < tol:
            return PeriodicOrbitResult(CartesianState.from_array(u, guess.t), T, it, F,
                                       np.linalg.eigvals(phi), pins, history)
        if it == max_iter:
            break
        A = (phi - np.eye(4))[:, free]
        rhs = -F
        if fix != "period":
            A = np.column_stack([A, _rhs(uf, ctx.mu, ctx.omega)])
        if fix == "energy":
            f0 = _rhs(u, ctx.mu, ctx.omega)
            grad_H = np.array([-f0[2], -f0[3], f0[0], f0[1]])
            row = np.zeros(A.shape[1])
            row[:nf] = grad_H[free]
            A = np.vstack([A, row])
            rhs = np.append(rhs, H0 - hamiltonian(u, ctx))
        U, sv, Vt = np.linalg.svd(A, full_matrices=False)
        keep = sv > 1e-10 * sv[0]
        step = Vt[keep].T @ ((U[:, keep].T @ rhs) / sv[keep])
        # extra rank loss is tolerated while the residual still lies in the range
        if keep.sum() < A.shape[1] - 1 and (
                np.linalg.norm(A @ step - rhs) > 0.5 * np.linalg.norm(rhs)):
            raise GeometryError("correction Jacobian is singular beyond the energy direction")
        u[free] += step[:nf]
        if fix != "period":
            T += step[nf]
    raise CorrectionError(f"no convergence in {max_iter} iterations (residual {res:.3e})",
                          history)
