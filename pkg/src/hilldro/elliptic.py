"""Elliptic integrals at the fixed modulus k^2 = 3/4.

Complete integrals come from the arithmetic-geometric mean; incomplete ones
from Carlson's symmetric forms R_F and R_D after reducing the amplitude to
[-pi/2, pi/2]. Every routine accepts an amplitude of arbitrary size, since
the epicycle phase grows secularly over long propagations.

The "starred" functions

    F* = 2 K~ phi - F(phi | 3/4)
    E* = 2 E~ phi - E(phi | 3/4)
    P* = 2 phi   - Pi(3/4; phi | 0)

are the pi-periodic building blocks of the short-period corrections.
"""

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "EllipticConstants",
    "CONSTANTS",
    "K_SQ",
    "K_MOD",
    "complete_KE",
    "carlson_rf",
    "carlson_rd",
    "incomplete_F",
    "incomplete_E",
    "pi3_zero_modulus",
    "starred",
]

K_SQ = 0.75
K_MOD = math.sqrt(K_SQ)

_AGM_TOL = 1e-16
_CARLSON_TOL = 1e-4  # Carlson's r parameter; error ~ r^6 / (4 (1 - r))


def _check_parameter(m):
    if not 0.0 <= m < 1.0:
        raise ValueError(f"elliptic parameter m must lie in [0, 1), got {m!r}")


def complete_KE(m):
    """Complete elliptic integrals K(m), E(m) by the AGM iteration.

    Parameters
    ----------
    m : float
        Parameter (squared modulus), ``0 <= m < 1``.

    Returns
    -------
    K, E : float
    """
    _check_parameter(m)
    a = 1.0
    g = math.sqrt(1.0 - m)
    c2_sum = 0.5 * m  # sum of 2^(n-1) c_n^2, starting with c_0^2 = m
    power = 0.5
    for _ in range(64):
        a_next = 0.5 * (a + g)
        c = 0.5 * (a - g)
        power *= 2.0
        c2_sum += power * c * c
        g = math.sqrt(a * g)
        a = a_next
        if abs(c) <= _AGM_TOL * a:
            break
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - c2_sum)


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z) (duplication algorithm)."""
    for _ in range(100):
        mu = (x + y + z) / 3.0
        dx, dy, dz = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
        if max(abs(dx), abs(dy), abs(dz)) < _CARLSON_TOL:
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(mu)


def carlson_rd(x, y, z):
    """Carlson's symmetric integral R_D(x, y, z) (duplication algorithm)."""
    total = 0.0
    scale = 1.0
    for _ in range(100):
        mu = (x + y + 3.0 * z) / 5.0
        dx, dy, dz = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
        if max(abs(dx), abs(dy), abs(dz)) < _CARLSON_TOL:
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        total += scale / (sz * (z + lam))
        scale *= 0.25
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    series = 1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee) \
        + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea))
    return 3.0 * total + scale * series / (mu * math.sqrt(mu))


def _reduce(phi):
    """Split phi = j*pi + theta with theta in [-pi/2, pi/2)."""
    j = math.floor((phi + 0.5 * math.pi) / math.pi)
    return j, phi - j * math.pi


def _incomplete_F_scalar(phi, m):
    j, theta = _reduce(phi)
    s, c = math.sin(theta), math.cos(theta)
    value = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
    if j:
        value += 2.0 * j * complete_KE(m)[0]
    return value


def _incomplete_E_scalar(phi, m):
    j, theta = _reduce(phi)
    s, c = math.sin(theta), math.cos(theta)
    x, y = c * c, 1.0 - m * s * s
    value = s * carlson_rf(x, y, 1.0) - m * s ** 3 * carlson_rd(x, y, 1.0) / 3.0
    if j:
        value += 2.0 * j * complete_KE(m)[1]
    return value


def incomplete_F(phi, m=K_SQ):
    """Incomplete elliptic integral of the first kind F(phi | m).

    Accepts scalars or arrays for ``phi``; values are exact in the
    quasi-period count, ``F(phi + pi) = F(phi) + 2 K(m)``.
    """
    _check_parameter(m)
    if np.ndim(phi) == 0:
        return _incomplete_F_scalar(float(phi), m)
    return np.vectorize(_incomplete_F_scalar, otypes=[float])(phi, m)


def incomplete_E(phi, m=K_SQ):
    """Incomplete elliptic integral of the second kind E(phi | m)."""
    _check_parameter(m)
    if np.ndim(phi) == 0:
        return _incomplete_E_scalar(float(phi), m)
    return np.vectorize(_incomplete_E_scalar, otypes=[float])(phi, m)


def pi3_zero_modulus(phi):
    """Third-kind integral Pi(3/4; phi | 0) = int_0^phi dtheta / (1 - 3/4 sin^2 theta).

    The closed form 2 arctan(tan(phi) / 2) is rewritten as
    2 phi + 2 atan2(-sin phi cos phi, 1 + cos^2 phi), which is smooth and
    unbounded with no branch bookkeeping at the half turns.
    """
    phi = np.asarray(phi, dtype=float)
    s, c = np.sin(phi), np.cos(phi)
    value = 2.0 * phi + 2.0 * np.arctan2(-s * c, 1.0 + c * c)
    return value[()] if value.ndim == 0 else value


@dataclass(frozen=True)
class EllipticConstants:
    """Complete integrals at the Hill-DRO modulus and their pi-scaled versions."""

    k: float
    m: float
    K: float
    E: float
    Ktilde: float
    Etilde: float


def _build_constants():
    K, E = complete_KE(K_SQ)
    return EllipticConstants(k=K_MOD, m=K_SQ, K=K, E=E, Ktilde=K / math.pi, Etilde=E / math.pi)


CONSTANTS = _build_constants()


def starred(phi):
    """Return the pi-periodic combinations (F*, E*, P*) at amplitude ``phi``."""
    Fs = 2.0 * CONSTANTS.Ktilde * phi - incomplete_F(phi, K_SQ)
    Es = 2.0 * CONSTANTS.Etilde * phi - incomplete_E(phi, K_SQ)
    Ps = 2.0 * phi - pi3_zero_modulus(phi)
    return Fs, Es, Ps
