"""Planar Hill problem in a rotating frame.

Hamiltonian

    H = 1/2 (X + w y)^2 + 1/2 (Y - w x)^2 - 3/2 w^2 x^2 - mu / r

with (X, Y) the momenta conjugate to (x, y). ``mu = 0`` gives the
Clohessy-Wiltshire limit. Numerical propagation uses the DOP853 pair of
:func:`scipy.integrate.solve_ivp`; the variational equations are
integrated alongside the flow with the analytic Jacobian.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "HillContext",
    "CartesianState",
    "Trajectory",
    "SingularityError",
    "PropagationError",
    "hamiltonian",
    "eom",
    "jacobian",
    "propagate",
    "flow",
    "state_transition",
    "SYMPLECTIC_J",
]

SYMPLECTIC_J = np.array(
    [[0.0, 0.0, 1.0, 0.0],
     [0.0, 0.0, 0.0, 1.0],
     [-1.0, 0.0, 0.0, 0.0],
     [0.0, -1.0, 0.0, 0.0]]
)


class SingularityError(ValueError):
    """Gravitational term evaluated at the origin."""


class PropagationError(RuntimeError):
    """Integrator failed; ``trajectory`` holds the samples reached so far."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class HillContext:
    """Physical parameters: gravitational parameter ``mu`` and rotation rate ``omega``."""

    mu: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"mu must be non-negative, got {self.mu}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class CartesianState:
    """Rotating-frame coordinates and conjugate momenta at epoch ``t``."""

    x: float
    y: float
    X: float
    Y: float
    t: float = 0.0

    @classmethod
    def from_array(cls, u, t=0.0):
        x, y, X, Y = (float(v) for v in u)
        return cls(x, y, X, Y, t)

    def as_array(self):
        return np.array([self.x, self.y, self.X, self.Y])


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled propagation result.

    ``states`` has shape ``(len(t), 4)`` with columns x, y, X, Y.
    """

    context: HillContext
    t: np.ndarray
    states: np.ndarray
    steps: int = 0
    rejected: int = 0
    nfev: int = 0
    stm: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.t)

    def __getitem__(self, i):
        return CartesianState.from_array(self.states[i], self.t[i])

    @property
    def final(self):
        return self[-1]


def _unpack(state):
    if isinstance(state, CartesianState):
        return state.as_array()
    return np.asarray(state, dtype=float)


def hamiltonian(state, ctx=HillContext()):
    """Energy of a Cartesian state (or an ``(..., 4)`` array of states)."""
    u = _unpack(state)
    x, y, X, Y = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
    w = ctx.omega
    quad = 0.5 * (X + w * y) ** 2 + 0.5 * (Y - w * x) ** 2 - 1.5 * w * w * x * x
    if ctx.mu == 0:
        return quad
    r = np.hypot(x, y)
    if np.any(r == 0):
        raise SingularityError("hamiltonian evaluated at r = 0")
    return quad - ctx.mu / r


def _rhs(u, mu, w):
    x, y, X, Y = u
    r2 = x * x + y * y
    g = mu / (r2 * math.sqrt(r2)) if mu else 0.0
    return np.array([
        X + w * y,
        Y - w * x,
        w * (Y - w * x) + 3.0 * w * w * x - g * x,
        -w * (X + w * y) - g * y,
    ])


def eom(state, ctx=HillContext()):
    """Hamilton's equations: returns (dx/dt, dy/dt, dX/dt, dY/dt)."""
    u = _unpack(state)
    if ctx.mu and u[0] == 0 and u[1] == 0:
        raise SingularityError("equations of motion evaluated at r = 0")
    return _rhs(u, ctx.mu, ctx.omega)


def _jac(u, mu, w):
    x, y = u[0], u[1]
    a11 = a12 = a22 = 0.0
    if mu:
        r2 = x * x + y * y
        r3 = r2 * math.sqrt(r2)
        r5 = r3 * r2
        a11 = -mu / r3 + 3.0 * mu * x * x / r5
        a12 = 3.0 * mu * x * y / r5
        a22 = -mu / r3 + 3.0 * mu * y * y / r5
    return np.array([
        [0.0, w, 1.0, 0.0],
        [-w, 0.0, 0.0, 1.0],
        [2.0 * w * w + a11, a12, 0.0, w],
        [a12, -w * w + a22, -w, 0.0],
    ])


def jacobian(state, ctx=HillContext()):
    """Jacobian of :func:`eom` with respect to (x, y, X, Y)."""
    return _jac(_unpack(state), ctx.mu, ctx.omega)


def _check_tol(rel_tol):
    if not 1e-14 <= rel_tol <= 1e-6:
        raise ValueError(f"rel_tol must lie in [1e-14, 1e-6], got {rel_tol}")


def _sample_times(t0, t_final, sample_dt):
    span = t_final - t0
    if sample_dt is None or sample_dt <= 0:
        return np.array([t0, t_final])
    n = int(math.floor(abs(span) / sample_dt + 1e-9))
    t = t0 + math.copysign(sample_dt, span) * np.arange(n + 1)
    if abs(t[-1] - t_final) > 1e-12 * max(1.0, abs(t_final)):
        t = np.append(t, t_final)
    else:
        t[-1] = t_final
    return t


# Local error control lets the global error grow past the requested tolerance
# over tens of revolutions; the integrator runs this much tighter.
_TOL_SAFETY = 0.25
_RTOL_FLOOR = 2.3e-14  # scipy clamps rtol below 100 eps


def _solve(fun, y0, t0, t_final, t_eval, rel_tol, atol):
    rtol = max(_TOL_SAFETY * rel_tol, _RTOL_FLOOR)
    return solve_ivp(fun, (t0, t_final), y0, method="DOP853", t_eval=t_eval,
                     rtol=rtol, atol=np.asarray(atol) * (rtol / rel_tol))


def propagate(state, ctx=HillContext(), t_final=None, rel_tol=1e-12, sample_dt=None):
    """Propagate a Cartesian state with the adaptive DOP853 integrator.

    Parameters
    ----------
    state : CartesianState
        Initial conditions; ``state.t`` is the start epoch.
    ctx : HillContext
    t_final : float
        Final epoch (may precede ``state.t`` for backward propagation).
    rel_tol : float
        Relative tolerance in ``[1e-14, 1e-6]``; the absolute tolerance is
        ``rel_tol`` times the norm of the initial state. Both are tightened
        by a fixed safety factor before reaching the integrator.
    sample_dt : float, optional
        Output spacing. ``None`` returns only the end points.

    Returns
    -------
    Trajectory
    """
    _check_tol(rel_tol)
    if not isinstance(state, CartesianState):
        state = CartesianState.from_array(state)
    u0 = state.as_array()
    if ctx.mu and u0[0] == 0 and u0[1] == 0:
        raise SingularityError("initial state at r = 0")
    t_eval = _sample_times(state.t, t_final, sample_dt)
    atol = rel_tol * max(np.linalg.norm(u0), 1e-300)
    mu, w = ctx.mu, ctx.omega
    sol = _solve(lambda t, u: _rhs(u, mu, w), u0, state.t, t_final, t_eval, rel_tol, atol)
    traj = Trajectory(ctx, sol.t, sol.y.T.copy(), steps=int(sol.nfev // 12),
                      nfev=int(sol.nfev))
    if sol.status != 0:
        raise PropagationError(f"propagation failed: {sol.message}", traj)
    return traj


def flow(state, ctx, T, rel_tol=1e-12):
    """Final state (as an array) after propagating ``state`` for a time ``T``."""
    if not isinstance(state, CartesianState):
        state = CartesianState.from_array(state)
    return propagate(state, ctx, state.t + T, rel_tol).states[-1]


def _variational(mu, w):
    def fun(t, z):
        u = z[:4]
        phi = z[4:].reshape(4, 4)
        return np.concatenate([_rhs(u, mu, w), (_jac(u, mu, w) @ phi).ravel()])
    return fun


def state_transition(state, ctx=HillContext(), T=0.0, rel_tol=1e-12, return_final=False):
    """State-transition matrix d(final state)/d(initial state) over a time ``T``.

    With ``return_final=True`` also returns the final state array.
    """
    _check_tol(rel_tol)
    u0 = _unpack(state)
    if isinstance(state, CartesianState):
        t0 = state.t
    else:
        t0 = 0.0
    if T == 0:
        return (np.eye(4), u0.copy()) if return_final else np.eye(4)
    z0 = np.concatenate([u0, np.eye(4).ravel()])
    atol = np.concatenate([np.full(4, rel_tol * max(np.linalg.norm(u0), 1e-300)),
                           np.full(16, rel_tol)])
    sol = _solve(_variational(ctx.mu, ctx.omega), z0, t0, t0 + T, None, rel_tol, atol)
    if sol.status != 0:
        partial = Trajectory(ctx, sol.t, sol.y[:4].T.copy())
        raise PropagationError(f"variational propagation failed: {sol.message}", partial)
    zf = sol.y[:, -1]
    phi = zf[4:].reshape(4, 4)
    return (phi, zf[:4]) if return_final else phi
