"""Higher-order Lindstedt series solution of the averaged DRO flow.

In the strained time tau = n t the mean variables read

    q'  = sum c q'_0 cos((2i+1) Omega tau) + s (Q'_0/Omega) sin((2i+1) Omega tau)
    Q'  = sum C Q'_0 cos((2i+1) Omega tau) + S (q'_0 Omega) sin((2i+1) Omega tau)
    phi' = phi'_0 + (1/n) { w (1 + alpha d) tau + (Omega/w) [p(tau) - p(0)] }

with every coefficient weighted by alpha^(...) (Q'_0/(Omega b))^(2j) (q'_0/b)^(2k)
and alpha = (Omega/w)^2. Orbital and libration periods follow as
T_O = 2 pi / (w (1 + alpha d)) and T_L = 2 pi / (Omega n).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .elliptic import CONSTANTS
from .epicyclic import MEAN, EpicyclicState
from .hill import HillContext
from .lindstedt_expansion import expanded_tables
from .lindstedt_tables import lindstedt_tables
from .mean_model import MeanTrajectory, libration_frequency

__all__ = [
    "TABLES",
    "TABLE_VARIANTS",
    "tables_for",
    "DegenerateFrequencyError",
    "LindstedtModel",
    "Periods",
    "build_model",
    "evaluate",
    "periods",
]

TABLES = lindstedt_tables(CONSTANTS.Ktilde, CONSTANTS.Etilde)
TABLE_VARIANTS = ("standard", "printed", "consistent")


def tables_for(variant="standard"):
    """Coefficient tables by name.

    ``"standard"`` is the closed-form set with the first-order amplitude factor
    restored (the default), ``"printed"`` the closed forms exactly as
    printed, and ``"consistent"`` the set regenerated from the averaged
    Hamiltonian by :func:`hilldro.lindstedt_expansion.expanded_tables`.
    The standard and printed sets share n and d, hence identical periods.
    """
    if variant == "standard":
        return TABLES
    if variant == "printed":
        return lindstedt_tables(CONSTANTS.Ktilde, CONSTANTS.Etilde, as_printed=True)
    if variant == "consistent":
        return expanded_tables(CONSTANTS.Ktilde, CONSTANTS.Etilde)
    raise ValueError(f"unknown table variant {variant!r}; expected one of {TABLE_VARIANTS}")


class DegenerateFrequencyError(ValueError):
    """Libration frequency vanishes (mu = 0); the series is undefined."""


@dataclass(frozen=True)
class Periods:
    T_O: float
    T_L: float
    r: float


@dataclass(frozen=True)
class LindstedtModel:
    """Lindstedt solution for fixed mean initial conditions.

    The harmonic amplitudes are folded once at construction: ``q_cos[i]``
    multiplies cos((2i+1) Omega tau), ``p_sin[i]`` multiplies sin(2i Omega tau)
    and so on.
    """

    context: HillContext
    Phi_prime: float
    q0: float
    Q0: float
    phi0: float
    t0: float
    Omega: float
    alpha: float
    b: float
    n: float
    d_total: float
    tables: dict = field(repr=False)
    q_cos: np.ndarray = field(repr=False)
    q_sin: np.ndarray = field(repr=False)
    Q_cos: np.ndarray = field(repr=False)
    Q_sin: np.ndarray = field(repr=False)
    p_cos: np.ndarray = field(repr=False)
    p_sin: np.ndarray = field(repr=False)
    p_first: float = 0.0

    @property
    def initial_state(self):
        return EpicyclicState(self.phi0, self.q0, self.Phi_prime, self.Q0, self.t0, MEAN)

    def __call__(self, t):
        return evaluate(self, t)


def build_model(Phi_prime, q0=0.0, Q0=0.0, ctx=HillContext(), phi0=0.0, t0=0.0, tables=TABLES):
    """Fold the series coefficients for the mean initial conditions.

    ``Phi_prime`` may also be a mean :class:`EpicyclicState`, in which case
    its q', Q', phi' and epoch are used. ``tables`` may be a table dict or
    a variant name accepted by :func:`tables_for`.
    """
    if isinstance(tables, str):
        tables = tables_for(tables)
    if isinstance(Phi_prime, EpicyclicState):
        st = Phi_prime
        if st.flavor != MEAN:
            raise ValueError("build_model expects mean elements")
        Phi_prime, q0, Q0, phi0, t0 = st.Phi, st.q, st.Q, st.phi, st.t
    if not Phi_prime > 0:
        raise ValueError("Phi' must be positive")
    if ctx.mu == 0:
        raise DegenerateFrequencyError("Omega = 0 for mu = 0; the Lindstedt series is undefined")
    w = ctx.omega
    Om = float(libration_frequency(Phi_prime, ctx))
    alpha = (Om / w) ** 2
    b = math.sqrt(2.0 * Phi_prime / w)
    aq = q0 / b            # q'_0 / b
    aQ = Q0 / (Om * b)     # (Q'_0 / Omega) / b

    def weight(m, j, k, shift=0):
        return alpha ** (m - j - k + shift) * aQ ** (2 * j) * aq ** (2 * k)

    n = sum(weight(m, j, k) * v for (m, j, k), v in tables["n"].items())

    q_cos, q_sin, Q_cos, Q_sin = (np.zeros(3) for _ in range(4))
    for (m, i, j, k), v in tables["c"].items():
        q_cos[i] += weight(m, j, k) * v * q0
    for (m, i, j, k), v in tables["s"].items():
        q_sin[i] += weight(m, j, k) * v * Q0 / Om
    for (m, i, j, k), v in tables["C"].items():
        Q_cos[i] += weight(m, j, k) * v * Q0
    for (m, i, j, k), v in tables["S"].items():
        Q_sin[i] += weight(m, j, k) * v * q0 * Om

    p_cos, p_sin = np.zeros(4), np.zeros(4)
    for (m, i, j, k), v in tables["kappa"].items():
        p_cos[i] += aq * aQ * weight(m, j, k) * v
    for (m, i, j, k), v in tables["sigma"].items():
        p_sin[i] += weight(m, j, k, shift=1) * v
    p_first = tables.get("p_first", 0.0) * alpha ** 2

    Kt, Et = CONSTANTS.Ktilde, CONSTANTS.Etilde
    d_total = Kt / (Kt - Et) + sum(weight(m, j, k, shift=1) * v
                                   for (m, j, k), v in tables["d"].items())
    if not n > 0:
        raise ValueError(f"Lindstedt frequency factor is not positive (n = {n})")
    return LindstedtModel(ctx, float(Phi_prime), float(q0), float(Q0), float(phi0), float(t0),
                          Om, alpha, b, float(n), float(d_total), tables,
                          q_cos, q_sin, Q_cos, Q_sin, p_cos, p_sin, float(p_first))


def _p_of(model, theta):
    """Long-period phase term p at theta = Omega tau."""
    aq = model.q0 / model.b
    aQ = model.Q0 / (model.Omega * model.b)
    p = model.p_first * (aq * np.sin(theta) + aQ * np.cos(theta))
    for i in range(1, 4):
        p = p + model.p_cos[i] * np.cos(2 * i * theta) + model.p_sin[i] * np.sin(2 * i * theta)
    return p


def evaluate(model, t):
    """Mean elements at epoch(s) ``t``.

    Returns
    -------
    q, Q, phi, p : float or ndarray
        q', Q', the mean phase phi' (including phi'_0) and the long-period term p(tau).
    """
    t = np.asarray(t, dtype=float)
    w = model.context.omega
    tau = model.n * (t - model.t0)
    theta = model.Omega * tau
    q = np.zeros_like(theta)
    Q = np.zeros_like(theta)
    for i in range(3):
        ci, si = np.cos((2 * i + 1) * theta), np.sin((2 * i + 1) * theta)
        q = q + model.q_cos[i] * ci + model.q_sin[i] * si
        Q = Q + model.Q_cos[i] * ci + model.Q_sin[i] * si
    p = _p_of(model, theta)
    phi = model.phi0 + (w * (1.0 + model.alpha * model.d_total) * tau
                        + (model.Omega / w) * (p - _p_of(model, 0.0))) / model.n
    out = (q, Q, phi, p)
    if t.ndim == 0:
        return tuple(float(v) for v in out)
    return out


def mean_trajectory(model, t):
    """Sample the series on the epochs ``t`` as a :class:`MeanTrajectory`."""
    q, Q, phi, _ = evaluate(model, np.atleast_1d(t))
    el = np.column_stack([phi, q, np.full_like(q, model.Phi_prime), Q])
    return MeanTrajectory(model.context, np.atleast_1d(np.asarray(t, dtype=float)), el)


def periods(model, ctx=None):
    """Orbital period T_O, libration period T_L and their ratio r = T_L / T_O."""
    w = (ctx or model.context).omega
    T_O = 2.0 * math.pi / (w * (1.0 + model.alpha * model.d_total))
    T_L = 2.0 * math.pi / (model.Omega * model.n)
    return Periods(T_O, T_L, T_L / T_O)
