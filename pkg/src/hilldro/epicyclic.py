"""Scaled epicyclic variables (phi, q, Phi, Q) of the planar Hill problem.

The transformation is

    x = 2 b xi + b sin(phi)        X = -2 B eta - B cos(phi)
    y = a eta  + a cos(phi)        Y = -B xi    - B sin(phi)

with b = sqrt(2 Phi / w), a = 2 b, B = b w, xi = Q / (2 k B), eta = 2 k q / a
and the scaling k = sqrt(3/4). With mu = 0 the Hamiltonian reduces to
w Phi - (3/8) (Q/k)^2, so the orbit is a 2:1 ellipse whose center drifts
along y unless Q = 0.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .elliptic import K_MOD, K_SQ
from .hill import CartesianState, HillContext

__all__ = [
    "OSCULATING",
    "MEAN",
    "EpicyclicState",
    "EpicyclicGeometry",
    "DegenerateStateError",
    "CollisionError",
    "to_epicyclic",
    "from_epicyclic",
    "cartesian_to_epicyclic_array",
    "epicyclic_to_cartesian_array",
    "guiding_center",
    "geometry",
    "gamma_of",
    "hamiltonian_epicyclic",
]

OSCULATING = "osculating"
MEAN = "mean"
_FLAVORS = (OSCULATING, MEAN)


class DegenerateStateError(ValueError):
    """The reference ellipse has zero size (b = 0)."""


class CollisionError(ValueError):
    """Non-positive radicand in the epicyclic distance."""


@dataclass(frozen=True)
class EpicyclicState:
    """Epicyclic state with an explicit flavor tag (``"osculating"`` or ``"mean"``).

    ``phi`` is unbounded; it grows by about ``w`` per unit time.
    """

    phi: float
    q: float
    Phi: float
    Q: float
    t: float = 0.0
    flavor: str = OSCULATING

    def __post_init__(self):
        if self.flavor not in _FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")

    def as_array(self):
        return np.array([self.phi, self.q, self.Phi, self.Q])

    @classmethod
    def from_array(cls, e, t=0.0, flavor=OSCULATING):
        phi, q, Phi, Q = (float(v) for v in e)
        return cls(phi, q, Phi, Q, t, flavor)

    def with_flavor(self, flavor):
        return replace(self, flavor=flavor)


@dataclass(frozen=True)
class EpicyclicGeometry:
    """Derived ellipse/hodograph quantities of an epicyclic state."""

    b: float
    a: float
    B: float
    xi: float
    eta: float
    gamma: float
    Delta: float


def gamma_of(Phi, ctx=HillContext()):
    """Perturbation size mu w / (2 w Phi)^(3/2).

    Accepts arrays; raises ``ValueError`` for non-positive actions.
    """
    Phi = np.asarray(Phi, dtype=float)
    if np.any(Phi <= 0):
        raise ValueError("Phi must be positive")
    g = ctx.mu * ctx.omega / (2.0 * ctx.omega * Phi) ** 1.5
    return g[()] if g.ndim == 0 else g


def _scales(Phi, w):
    b = np.sqrt(2.0 * Phi / w)
    return b, 2.0 * b, b * w


def cartesian_to_epicyclic_array(states, ctx=HillContext(), unwrap=True):
    """Map an ``(..., 4)`` array of (x, y, X, Y) to (phi, q, Phi, Q).

    For a 2-D array of samples ``phi`` is unwrapped along the first axis.
    """
    u = np.asarray(states, dtype=float)
    w = ctx.omega
    x, y, X, Y = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
    hc = X + w * y       # B cos(phi)
    hs = -(2.0 * Y + w * x)  # B sin(phi)
    Phi = (hc * hc + hs * hs) / (2.0 * w)
    if np.any(Phi <= 0):
        raise DegenerateStateError("reference ellipse has zero size")
    b, a, B = _scales(Phi, w)
    phi = np.arctan2(hs, hc)
    if unwrap and phi.ndim == 1:
        phi = np.unwrap(phi)
    eta = y / a - hc / B
    q = a * eta / (2.0 * K_MOD)
    Q = 2.0 * K_MOD * (Y + w * x)
    return np.stack([phi, q, Phi, Q], axis=-1)


def epicyclic_to_cartesian_array(elements, ctx=HillContext()):
    """Inverse of :func:`cartesian_to_epicyclic_array`."""
    e = np.asarray(elements, dtype=float)
    phi, q, Phi, Q = e[..., 0], e[..., 1], e[..., 2], e[..., 3]
    if np.any(Phi <= 0):
        raise ValueError("Phi must be positive")
    b, a, B = _scales(Phi, ctx.omega)
    xi = Q / (2.0 * K_MOD * B)
    eta = 2.0 * K_MOD * q / a
    s, c = np.sin(phi), np.cos(phi)
    return np.stack([2.0 * b * xi + b * s, a * eta + a * c,
                     -2.0 * B * eta - B * c, -B * xi - B * s], axis=-1)


def to_epicyclic(state, ctx=HillContext()):
    """Cartesian state -> osculating :class:`EpicyclicState`."""
    e = cartesian_to_epicyclic_array(state.as_array(), ctx)
    return EpicyclicState.from_array(e, state.t, OSCULATING)


def from_epicyclic(state, ctx=HillContext()):
    """Epicyclic state (either flavor) -> :class:`CartesianState`."""
    if not state.Phi > 0:
        raise ValueError(f"Phi must be positive, got {state.Phi}")
    u = epicyclic_to_cartesian_array(state.as_array(), ctx)
    return CartesianState.from_array(u, state.t)


def guiding_center(state, ctx=HillContext()):
    """Center (x_C, y_C) = (Q / (k w), 2 k q) of the reference ellipse."""
    return state.Q / (K_MOD * ctx.omega), 2.0 * K_MOD * state.q


def geometry(state, ctx=HillContext()):
    """Ellipse size, hodograph radius and scaled center of ``state``."""
    b, a, B = _scales(state.Phi, ctx.omega)
    return EpicyclicGeometry(
        b=float(b), a=float(a), B=float(B),
        xi=state.Q / (2.0 * K_MOD * B),
        eta=2.0 * K_MOD * state.q / a,
        gamma=gamma_of(state.Phi, ctx),
        Delta=math.sqrt(1.0 - K_SQ * math.sin(state.phi) ** 2),
    )


def hamiltonian_epicyclic(state, ctx=HillContext()):
    """Hill Hamiltonian written in epicyclic variables.

    w Phi (1 - 3 xi^2 - gamma / sqrt(Delta^2 + xi s + 2 eta c + xi^2 + eta^2))
    """
    g = geometry(state, ctx)
    w = ctx.omega
    if g.gamma == 0:
        return w * state.Phi * (1.0 - 3.0 * g.xi ** 2)
    s, c = math.sin(state.phi), math.cos(state.phi)
    rad = g.Delta ** 2 + g.xi * s + 2.0 * g.eta * c + g.xi ** 2 + g.eta ** 2
    if rad <= 0:
        raise CollisionError("collision configuration (r = 0)")
    return w * state.Phi * (1.0 - 3.0 * g.xi ** 2 - g.gamma / math.sqrt(rad))
