"""Short-period corrections between mean (prime) and osculating epicyclic variables.

Direct map, evaluated at the mean variables::

    beta = beta' + gamma(Phi') * sum_{i=1..6} dbeta_i(phi', q', Phi', Q')

Inverse map, evaluated at the osculating variables::

    beta' = beta + gamma(Phi) * sum_{i=1..6} dbeta'_i(phi, q, Phi, Q)

where dbeta'_i = -dbeta_i except for five entries (dphi'_5, dphi'_6,
dPhi'_5, dPhi'_6, dQ'_6) which carry their own second-order terms.
Corrections to q, Phi and Q are expressed relative to b, Phi and B.
"""

from dataclasses import dataclass

import numpy as np

from .elliptic import CONSTANTS, K_MOD, K_SQ, starred
from .epicyclic import MEAN, OSCULATING, EpicyclicState, from_epicyclic, gamma_of
from .hill import HillContext

__all__ = [
    "DIRECT",
    "INVERSE",
    "CorrectionTerms",
    "correction_terms",
    "mean_to_osculating",
    "osculating_to_mean",
    "osculating_cartesian",
    "mean_to_osculating_array",
    "osculating_to_mean_array",
]

DIRECT = "direct"
INVERSE = "inverse"

_k = K_MOD
_k2 = K_SQ
_Kt = CONSTANTS.Ktilde
_Et = CONSTANTS.Etilde


@dataclass(frozen=True)
class CorrectionTerms:
    """Per-order corrections; index ``i - 1`` holds order ``i`` (zeros where absent).

    ``dq``, ``dPhi`` and ``dQ`` are relative to b, Phi and B respectively. The
    terms are not yet multiplied by the leading gamma.
    """

    dphi: tuple
    dq: tuple
    dPhi: tuple
    dQ: tuple
    direction: str
    gamma: object
    b: object
    B: object

    def totals(self):
        """Absolute increments (dphi, dq, dPhi, dQ) including the leading gamma."""
        return (self.gamma * sum(self.dphi),
                self.gamma * self.b * sum(self.dq),
                self.gamma * sum(self.dPhi),
                self.gamma * self.B * sum(self.dQ))


def _direct_terms(phi, xi, eta, gamma):
    s, c = np.sin(phi), np.cos(phi)
    D = np.sqrt(1.0 - _k2 * s * s)
    Fs, Es, Ps = starred(phi)
    k, k2, Kt, Et = _k, _k2, _Kt, _Et
    eta2 = eta * eta
    xi2 = xi * xi
    log8 = np.log(8.0 * (D + k * c) ** 2)
    logs = np.log((1.0 + k * s) / (1.0 - k * s))

    dphi1 = -0.5 * Fs
    dphi2 = -eta * s / D
    dphi3 = c / D * ((1 / D**2 + 1) * eta2 * k2 * s + 2 * xi) + eta2 * (Es - Fs)
    dphi4 = eta * ((1 / D**3 - 8 * Et) * xi
                   + s / (9 * D) * (3 / D**4 - 7 / D**2 - 14) * eta2)
    dphi5 = (gamma * (Ps - (2 * k2 * Kt + 1 / (4 * D)) * Fs)
             + 5 / 36 * (14 * Es - 11 * Fs) * eta2**2 + (Fs - 4 * Es) * xi2
             + c / D * (2 / 3 * (8 + 1 / D**2 - 3 / D**4) * eta2 * xi
                        - (3 + k2 / D**2) * xi2 * s
                        + 5 / 48 * (14 + 11 / D**2 + 8 / D**4 - 5 / D**6) * eta2**2 * s))
    dphi6 = (gamma * eta / D * (s * (11 / (8 * D) - 4 * Kt) + c * Fs / (2 * D**2))
             + xi * (k * log8 + 5 * eta**3 / (18 * D**5) * (19 - 5 / D**2))
             + 1.25 * gamma * eta * k * logs
             + eta * xi2 / (3 * D) * (8 + 4 / D**2 - 3 / D**4) * s
             - eta**5 * s / (4 * D) * (7 / (6 * D**8) - 17 / (3 * D**6) + 33 / (10 * D**4)
                                       + 22 / (5 * D**2) + 44 / 5))

    dq3 = -c / (2 * k * D)
    dq4 = -eta / (6 * k) * (1 / D**3 - 8 * Et)
    dq5 = (1 / k) * ((4 * Es - Fs) * xi / 3
                     + c / (4 * D) * ((1 / D**4 - 1 / (3 * D**2) - 8 / 3) * eta2
                                      + (1 / D**2 + 4) * xi * s))
    dq6 = (1 / k) * 0.25 * (eta**3 / (9 * D**5) * (5 / D**2 - 19) - k * log8
                            + eta * xi / (k2 * D) * (k2 / D**4 - 1 / D**2 - 2) * s)

    dPhi1 = 1 / D - 2 * Kt
    dPhi2 = -eta * c / D**3
    dPhi3 = 4 / 3 * eta2 * (Et - Kt) + 1 / (2 * D**3) * ((3 - 1 / D**2) * eta2 - xi * s)
    dPhi4 = eta * c / (2 * D**5) * ((5 / D**2 - 11) * eta2 / 3 + 3 * xi * s)
    dPhi5 = (gamma * (1 - 1 / (2 * D**2) + Kt * (1 / D - 2 * Kt) - k2 / (2 * D**3) * Fs * s * c)
             + xi2 * (1 / D**3 * (1 / (2 * D**2) - 1) + (Kt - 4 * Et) / k2)
             + eta2**2 / 9 * (1 / (8 * D**5) * (35 / D**4 - 190 / D**2 + 227) + 14 * Et - 11 * Kt)
             + eta2 * xi / (4 * D**5) * (5 / D**2 - 17) * s)
    dPhi6 = (k2 * xi / D * (5 * eta**3 / (9 * D**6) * (19 - 7 / D**2) * c - 2) * s
             + c * eta / D**5 * ((4 - 5 / (2 * D**2)) * xi2
                                 - eta2**2 / (8 * D**2) * (7 / D**4 - 98 / (3 * D**2) + 101 / 3))
             + gamma * eta / (2 * D**2) * ((2 - 4 * Kt / D + 1 / D**2) * c
                                           - Fs / D * (k2 / D**2 - 2) * s))

    dQ2 = -k * s / (2 * D)
    dQ3 = eta / (2 * k) * (k2 / D * (1 / D**2 + 1) * c * s + Es - Fs)
    dQ4 = k / 3 * ((1 / D**3 - 8 * Et) * xi + s / (4 * D) * (3 / D**4 - 7 / D**2 - 14) * eta2)
    dQ5 = k / 9 * ((14 * Es - 11 * Fs) * eta2
                   + 3 / D * (xi * (8 + 1 / D**2 - 3 / D**4)
                              + eta2 * (3.5 + 11 / (4 * D**2) + 2 / D**4 - 5 / (4 * D**6)) * s) * c
                   ) * eta
    dQ6 = k / 9 * (gamma / (2 * D) * (s * (k2 / D - 2 * Kt) + c * Fs / (2 * D**2))
                   + eta2 * xi / (6 * D**5) * (19 - 5 / D**2)
                   + xi2 * s / (3 * D) * (2 - k2 / D**4 + 1 / D**2)
                   + 0.25 * gamma * k * logs
                   - eta2**2 * s / (2 * D) * (35 / (72 * D**8) - 85 / (36 * D**6) + 11 / (8 * D**4)
                                              + 11 / (6 * D**2) + 11 / 3))

    zero = 0.0 * phi
    terms = dict(
        dphi=[dphi1, dphi2, dphi3, dphi4, dphi5, dphi6],
        dq=[zero, zero, dq3, dq4, dq5, dq6],
        dPhi=[dPhi1, dPhi2, dPhi3, dPhi4, dPhi5, dPhi6],
        dQ=[zero, dQ2, dQ3, dQ4, dQ5, dQ6],
    )
    aux = dict(s=s, c=c, D=D, Fs=Fs)
    return terms, aux


def _inverse_terms(phi, xi, eta, gamma):
    terms, aux = _direct_terms(phi, xi, eta, gamma)
    s, c, D, Fs = aux["s"], aux["c"], aux["D"], aux["Fs"]
    k, k2, Kt = _k, _k2, _Kt
    inv = {key: [-v for v in vals] for key, vals in terms.items()}
    inv["dphi"][4] = gamma * (1 / (2 * D) - Kt) * Fs - terms["dphi"][4]
    inv["dphi"][5] = (gamma * eta / (36 * D) * (c / D**2 * Fs + 74 * (1 / D - 2 * Kt) * s)
                      - terms["dphi"][5])
    inv["dPhi"][4] = (2 * gamma * Kt * (1 / D - Kt)
                      - gamma / (2 * D**2) * (1 + k2 / D * Fs * s * c)
                      - terms["dPhi"][4])
    inv["dPhi"][5] = (((15 / D**2 + 14 - 58 / D * Kt) * c + 11 / D * (2 - k2 / D**2) * Fs * s)
                      * gamma * eta / (18 * D**2) - terms["dPhi"][5])
    inv["dQ"][5] = (11 * k * gamma / (18 * D) * (c / (2 * D**2) * Fs + (1 / D - 2 * Kt) * s)
                    - terms["dQ"][5])
    return inv


def correction_terms(phi, q, Phi, Q, ctx=HillContext(), direction=DIRECT):
    """Evaluate all six correction orders at (phi, q, Phi, Q).

    Scalars or equally shaped arrays are accepted. xi, eta and gamma are
    built from the given variables themselves.
    """
    phi = np.asarray(phi, dtype=float)
    Phi = np.asarray(Phi, dtype=float)
    w = ctx.omega
    b = np.sqrt(2.0 * Phi / w)
    B = b * w
    xi = Q / (2.0 * _k * B)
    eta = _k * q / b
    gamma = gamma_of(Phi, ctx)
    if direction == DIRECT:
        terms, _ = _direct_terms(phi, xi, eta, gamma)
    elif direction == INVERSE:
        terms = _inverse_terms(phi, xi, eta, gamma)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return CorrectionTerms(tuple(terms["dphi"]), tuple(terms["dq"]), tuple(terms["dPhi"]),
                           tuple(terms["dQ"]), direction, gamma, b, B)


def _apply(e, ctx, direction):
    e = np.asarray(e, dtype=float)
    phi, q, Phi, Q = e[..., 0], e[..., 1], e[..., 2], e[..., 3]
    if ctx.mu == 0:
        return e.copy()
    terms = correction_terms(phi, q, Phi, Q, ctx, direction)
    dphi, dq, dPhi_rel, dQ = terms.totals()
    return np.stack([phi + dphi, q + dq, Phi * (1.0 + dPhi_rel), Q + dQ], axis=-1)


def mean_to_osculating_array(elements, ctx=HillContext()):
    """Direct map on an ``(..., 4)`` array of mean (phi', q', Phi', Q')."""
    return _apply(elements, ctx, DIRECT)


def osculating_to_mean_array(elements, ctx=HillContext()):
    """Inverse map on an ``(..., 4)`` array of osculating (phi, q, Phi, Q)."""
    return _apply(elements, ctx, INVERSE)


def mean_to_osculating(state, ctx=HillContext()):
    """Apply the direct short-period corrections to a mean state."""
    if state.flavor != MEAN:
        raise ValueError("mean_to_osculating expects a mean state")
    if not state.Phi > 0:
        raise ValueError("Phi' must be positive")
    e = mean_to_osculating_array(state.as_array(), ctx)
    return EpicyclicState.from_array(e, state.t, OSCULATING)


def osculating_to_mean(state, ctx=HillContext()):
    """Apply the inverse short-period corrections to an osculating state."""
    if state.flavor != OSCULATING:
        raise ValueError("osculating_to_mean expects an osculating state")
    if not state.Phi > 0:
        raise ValueError("Phi must be positive")
    e = osculating_to_mean_array(state.as_array(), ctx)
    return EpicyclicState.from_array(e, state.t, MEAN)


def osculating_cartesian(state, ctx=HillContext()):
    """Cartesian state recovered from mean elements (direct map, then Cartesian)."""
    return from_epicyclic(mean_to_osculating(state, ctx), ctx)
