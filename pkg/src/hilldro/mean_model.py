"""Long-term (averaged) Hamiltonian of the DRO problem in prime variables.

    H' = w Phi' - 1/2 (Q'^2 + Omega^2 q'^2) + P(q', Q', Phi')

    P  = w Phi' sum_{i,j,n} p_{i,j,n} gamma^(i+1) xi^(2j) eta^(2n)

with the libration frequency Omega = w sqrt(K~ - E~) sqrt(gamma). Phi' is a
constant of the averaged flow; (q', Q') obey a one-degree-of-freedom system
and phi' follows by quadrature.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import solve_ivp

from .elliptic import CONSTANTS, K_MOD
from .epicyclic import MEAN, EpicyclicState, gamma_of
from .hill import HillContext, PropagationError

__all__ = [
    "PerturbationCoefficients",
    "PoincareElements",
    "MeanTrajectory",
    "p_coefficients",
    "P_COEFFS",
    "libration_frequency",
    "alpha_of",
    "perturbation_P",
    "perturbation_gradient",
    "mean_hamiltonian",
    "mean_rates",
    "semianalytic_propagate",
    "zeroth_order_solution",
    "amplitude_phase",
]


def p_coefficients(K, E):
    """Coefficients p_{i,j,n} of the averaged perturbation as ``{(i, j, n): value}``.

    ``K`` and ``E`` are the complete integrals divided by pi. Works with any
    numeric type supporting ``+ - * /`` (floats, mpmath numbers, ...).
    """
    return {
        (0, 0, 0): -2 * K,
        (0, 0, 1): 0 * K,
        (0, 0, 2): (14 * E - 11 * K) / 9,
        (0, 0, 3): 2 * (71 * E - 50 * K) / 81,
        (0, 0, 4): (644 * E - 425 * K) / 324,
        (0, 1, 0): 4 * (K - 4 * E) / 3,
        (0, 1, 1): 4 * (K - 12 * E),
        (0, 1, 2): -10 * (74 * E - 35 * K) / 27,
        (0, 2, 0): 4 * (K - 16 * E) / 9,
        (1, 0, 0): (1 - 4 * K ** 2) / 2,
        (1, 0, 1): (21 + 64 * E ** 2 + 32 * E * K - 96 * K ** 2) / 18,
        (1, 0, 2): (9 - 8 * E ** 2 + 44 * E * K - 30 * K ** 2) / 3,
        (1, 1, 0): 8 * (3 - 8 * E * K + 2 * K ** 2) / 3,
        (2, 0, 0): (4 - 15 * E + 15 * K - 15 * K ** 3) / 3,
    }


@dataclass(frozen=True)
class PerturbationCoefficients:
    """Table of p_{i,j,n} evaluated once at k^2 = 3/4."""

    values: dict

    def __getitem__(self, ijn):
        return self.values[ijn]

    def __iter__(self):
        return iter(sorted(self.values.items()))

    def __len__(self):
        return len(self.values)

    def truncated(self, keep):
        """Copy with only the index triples in ``keep``."""
        return PerturbationCoefficients({key: v for key, v in self.values.items() if key in keep})


P_COEFFS = PerturbationCoefficients(p_coefficients(CONSTANTS.Ktilde, CONSTANTS.Etilde))


@dataclass(frozen=True)
class PoincareElements:
    """Action-angle form of the deferent oscillation plus amplitude/phase."""

    G: float
    g: float
    M: float
    psi: float


@dataclass(frozen=True)
class MeanTrajectory:
    """Samples of the mean elements; ``elements`` columns are phi', q', Phi', Q'."""

    context: HillContext
    t: np.ndarray
    elements: np.ndarray

    def __len__(self):
        return len(self.t)

    def __getitem__(self, i):
        return EpicyclicState.from_array(self.elements[i], self.t[i], MEAN)


def _check_phi(Phi):
    if not np.all(np.asarray(Phi) > 0):
        raise ValueError("Phi' must be positive")


def alpha_of(Phi_prime, ctx=HillContext()):
    """(Omega / w)^2 = (K~ - E~) gamma(Phi')."""
    _check_phi(Phi_prime)
    return (CONSTANTS.Ktilde - CONSTANTS.Etilde) * gamma_of(Phi_prime, ctx)


def libration_frequency(Phi_prime, ctx=HillContext()):
    """Libration frequency Omega(Phi') of the guiding center."""
    return ctx.omega * np.sqrt(alpha_of(Phi_prime, ctx))


def _xi_eta(q, Q, Phi, w):
    b = np.sqrt(2.0 * Phi / w)
    return Q / (2.0 * K_MOD * b * w), K_MOD * q / b, b


def perturbation_P(q_prime, Q_prime, Phi_prime, ctx=HillContext(), coeffs=P_COEFFS):
    """Averaged perturbation P(q', Q', Phi')."""
    _check_phi(Phi_prime)
    w = ctx.omega
    xi, eta, _ = _xi_eta(q_prime, Q_prime, Phi_prime, w)
    gamma = gamma_of(Phi_prime, ctx)
    total = 0.0
    for (i, j, n), p in coeffs:
        total = total + p * gamma ** (i + 1) * xi ** (2 * j) * eta ** (2 * n)
    return w * Phi_prime * total


def perturbation_gradient(q_prime, Q_prime, Phi_prime, ctx=HillContext(), coeffs=P_COEFFS):
    """Analytic partials (dP/dq', dP/dQ', dP/dPhi')."""
    _check_phi(Phi_prime)
    w = ctx.omega
    xi, eta, b = _xi_eta(q_prime, Q_prime, Phi_prime, w)
    gamma = gamma_of(Phi_prime, ctx)
    scale = w * Phi_prime
    dq = dQ = dPhi = 0.0
    for (i, j, n), p in coeffs:
        g = p * gamma ** (i + 1)
        if n:
            dq = dq + g * xi ** (2 * j) * 2 * n * eta ** (2 * n - 1) * (K_MOD / b)
        if j:
            dQ = dQ + g * 2 * j * xi ** (2 * j - 1) * eta ** (2 * n) / (2.0 * K_MOD * b * w)
        # each term scales as Phi'^(1 - 3(i+1)/2 - j - n)
        dPhi = dPhi + g * xi ** (2 * j) * eta ** (2 * n) * (1.0 - 1.5 * (i + 1) - j - n)
    return scale * dq, scale * dQ, w * dPhi


def mean_hamiltonian(q_prime, Q_prime, Phi_prime, ctx=HillContext(), coeffs=P_COEFFS):
    """w Phi' - (Q'^2 + Omega^2 q'^2)/2 + P."""
    Om2 = ctx.omega ** 2 * alpha_of(Phi_prime, ctx)
    return (ctx.omega * Phi_prime - 0.5 * (Q_prime ** 2 + Om2 * q_prime ** 2)
            + perturbation_P(q_prime, Q_prime, Phi_prime, ctx, coeffs))


def mean_rates(q_prime, Q_prime, Phi_prime, ctx=HillContext(), coeffs=P_COEFFS):
    """Time derivatives (dphi'/dt, dq'/dt, dQ'/dt) of the averaged flow."""
    Om2 = ctx.omega ** 2 * alpha_of(Phi_prime, ctx)
    Pq, PQ, PPhi = perturbation_gradient(q_prime, Q_prime, Phi_prime, ctx, coeffs)
    # dOmega^2/dPhi' = -(3/2) Omega^2 / Phi'
    dphi = ctx.omega + 0.75 * Om2 * q_prime ** 2 / Phi_prime + PPhi
    return dphi, -Q_prime + PQ, Om2 * q_prime - Pq


def semianalytic_propagate(state, ctx=HillContext(), t_final=None, rel_tol=1e-12,
                           sample_dt=None, t_eval=None, coeffs=P_COEFFS):
    """Numerically integrate the averaged equations from mean initial conditions.

    Parameters
    ----------
    state : EpicyclicState
        Mean initial conditions (``flavor == "mean"``).
    t_final : float
        Final epoch.
    rel_tol : float
        Relative integration tolerance.
    sample_dt : float, optional
        Output spacing; ignored when ``t_eval`` is given.
    coeffs : PerturbationCoefficients
        Use ``P_COEFFS.truncated({(0, 0, 0)})`` for the zeroth-order model.

    Returns
    -------
    MeanTrajectory
    """
    if state.flavor != MEAN:
        raise ValueError("semianalytic_propagate expects mean elements")
    Phi = state.Phi
    _check_phi(Phi)
    if t_eval is None:
        if sample_dt:
            n = int(math.floor(abs(t_final - state.t) / sample_dt + 1e-9))
            t_eval = state.t + math.copysign(sample_dt, t_final - state.t) * np.arange(n + 1)
            if abs(t_eval[-1] - t_final) > 1e-12 * max(1.0, abs(t_final)):
                t_eval = np.append(t_eval, t_final)
        else:
            t_eval = np.array([state.t, t_final])
    t_eval = np.asarray(t_eval, dtype=float)
    t_final = t_eval[-1]

    def rhs(t, z):
        return np.array(mean_rates(z[1], z[2], Phi, ctx, coeffs))

    z0 = np.array([state.phi, state.q, state.Q])
    b = math.sqrt(2.0 * Phi / ctx.omega)
    atol = np.array([rel_tol, rel_tol * b, rel_tol * b * ctx.omega])
    if t_final == state.t:
        z = np.tile(z0, (len(t_eval), 1)).T
    else:
        sol = solve_ivp(rhs, (state.t, t_final), z0, method="DOP853", t_eval=t_eval,
                        rtol=rel_tol, atol=atol)
        if sol.status != 0:
            raise PropagationError(f"mean propagation failed: {sol.message}")
        z = sol.y
    elements = np.column_stack([z[0], z[1], np.full(z.shape[1], Phi), z[2]])
    return MeanTrajectory(ctx, t_eval, elements)


def zeroth_order_solution(state, ctx=HillContext(), t=0.0):
    """Closed-form solution of the p_000-truncated averaged Hamiltonian.

    Returns ``(q', Q', phi')`` at elapsed time ``t`` (scalar or array).
    """
    _check_phi(state.Phi)
    w = ctx.omega
    Om = libration_frequency(state.Phi, ctx)
    alpha = (Om / w) ** 2
    q0, Q0 = state.q, state.Q
    t = np.asarray(t, dtype=float)
    c, s = np.cos(Om * t), np.sin(Om * t)
    A = Q0 / Om
    q = q0 * c - A * s
    Q = Q0 * c + Om * q0 * s
    bk2 = 2.0 * state.Phi / w / CONSTANTS.k ** 2  # (b/k)^2
    Kt, Et = CONSTANTS.Ktilde, CONSTANTS.Etilde
    d = Kt / (Kt - Et) + (q0 ** 2 + A ** 2) / bk2

    def p(tt):
        return (q0 * A / bk2 * np.cos(2.0 * Om * tt)
                + (q0 ** 2 - A ** 2) / (2.0 * bk2) * np.sin(2.0 * Om * tt))

    phi = state.phi + w * (1.0 + alpha * d) * t + (Om / w) * (p(t) - p(0.0))
    return q, Q, phi


def amplitude_phase(state, ctx=HillContext()):
    """Libration amplitude M and deferent phase psi of mean initial conditions.

    The guiding center then follows
    x_C = (Omega / (k w)) M sin(Omega t + psi), y_C = 2 k M cos(Omega t + psi).
    """
    Om = libration_frequency(state.Phi, ctx)
    A = state.Q / Om
    M = math.hypot(state.q, A)
    return PoincareElements(G=0.5 * Om * M * M, g=math.atan2(state.q, A), M=M,
                            psi=math.atan2(A, state.q))
