"""Lindstedt coefficients generated directly from the averaged Hamiltonian.

With u = q'/b, v = Q'/(Omega b) and s = Omega t the mean equations read

    du/ds = -v + dP/dv,   dv/ds = u - dP/du,
    P = 1/2 sum p_ijn D^-(i+1) alpha^(i+j) (v^2 / 4k^2)^j (k u)^(2n),   D = K - E.

The expansion works with trigonometric polynomials in theta = n s whose
coefficients are polynomials in alpha and the initial values aq = u(0),
aQ = v(0). A term alpha^e0 aq^e1 aQ^e2 has weight 2 e0 + e1 + e2; the
second-order series needs weights up to 5 in u, v and 6 in the phase rate.

The result is keyed exactly like :func:`hilldro.lindstedt_tables.lindstedt_tables`,
so it can be passed to :func:`hilldro.lindstedt.build_model` in place of
the closed-form tables.
"""

from functools import lru_cache

from .lindstedt_tables import TABLE_NAMES, index_ranges
from .mean_model import p_coefficients

__all__ = ["expand", "expanded_tables"]

_WMAX = 6


def _add(*terms):
    out = {}
    for scale, f in terms:
        for key, v in f.items():
            out[key] = out.get(key, 0) + scale * v
    return out


def _mul(f, g):
    out = {}
    for (h1, a1, b1, c1), v1 in f.items():
        w1 = 2 * a1 + b1 + c1
        for (h2, a2, b2, c2), v2 in g.items():
            if w1 + 2 * a2 + b2 + c2 <= _WMAX:
                key = (h1 + h2, a1 + a2, b1 + b2, c1 + c2)
                out[key] = out.get(key, 0) + v1 * v2
    return out


def _pow(f, n, one):
    out = {(0, 0, 0, 0): one}
    for _ in range(n):
        out = _mul(out, f)
    return out


def _deriv(f):
    return {k: 1j * k[0] * v for k, v in f.items()}


def _weight_part(f, w):
    return {k: v for k, v in f.items() if 2 * k[1] + k[2] + k[3] == w}


def _conj(z):
    return z.conjugate()


def _real_imag(z):
    """Split z = u + i v (u, v real functions) into the two real parts."""
    u, v = {}, {}
    for (h, *e), c in z.items():
        for out, a, b in ((u, c / 2, _conj(c) / 2), (v, c / 2j, -_conj(c) / 2j)):
            out[(h, *e)] = out.get((h, *e), 0) + a
            out[(-h, *e)] = out.get((-h, *e), 0) + b
    return u, v


def _divide_secular(R1, w, tiny):
    """Real N of weight w - 1 with R1 = (i aq - aQ) N; R1 maps (e0, e1, e2) to values."""
    N = {}
    for e0 in range(w // 2 + 1):
        rest = w - 2 * e0
        for e2 in range(rest + 1):
            e1 = rest - e2
            r = R1.get((e0, e1, e2), 0) + N.get((e0, e1, e2 - 1), 0)
            if e1 == 0:
                if abs(r) > tiny:
                    raise ArithmeticError(f"secular term cannot be removed at weight {w}")
                continue
            N[(e0, e1 - 1, e2)] = r / 1j
    return {(0,) + k: v.real for k, v in N.items() if abs(v) > tiny}


def expand(K, E, k2=0.75, tiny=1e-13):
    """Second-order Lindstedt expansion of the averaged flow.

    Parameters
    ----------
    K, E : float or mpmath number
        pi-scaled complete integrals at parameter ``k2``.
    tiny : float
        Magnitude below which coefficients are treated as zero.

    Returns
    -------
    u, v, N, G : dict
        u(theta), v(theta), n - 1 and the scaled phase rate G with
        dphi'/dt = w (1 + alpha G). Keys are (h, e0, e1, e2) for the term
        exp(i h theta) alpha^e0 aq^e1 aQ^e2.
    """
    one = 1 + 0 * K
    p = p_coefficients(K, E)
    D = K - E
    half = one / 2
    u = {(1, 0, 1, 0): half + 0j, (-1, 0, 1, 0): half + 0j,
         (1, 0, 0, 1): half * 1j, (-1, 0, 0, 1): -half * 1j}
    v = {(1, 0, 1, 0): -half * 1j, (-1, 0, 1, 0): half * 1j,
         (1, 0, 0, 1): half + 0j, (-1, 0, 0, 1): half + 0j}
    z1 = {(1, 0, 1, 0): one + 0j, (1, 0, 0, 1): one * 1j}
    N = {}
    terms = [(i, j, n, val / D ** (i + 1) / (4 * k2) ** j * k2 ** n)
             for (i, j, n), val in p.items() if val != 0]

    for w in (3, 5):
        Pu, Pv = {}, {}
        for i, j, n, coef in terms:
            a = {(0, i + j, 0, 0): one}
            if n:
                Pu = _add((1, Pu), (coef * n, _mul(_mul(a, _pow(v, 2 * j, one)),
                                                   _pow(u, 2 * n - 1, one))))
            if j:
                Pv = _add((1, Pv), (coef * j, _mul(_mul(a, _pow(v, 2 * j - 1, one)),
                                                   _pow(u, 2 * n, one))))
        nfac = _add((1, {(0, 0, 0, 0): one}), (1, N))
        res_u = _add((1, _mul(nfac, _deriv(u))), (1, v), (-1, Pv))
        res_v = _add((1, _mul(nfac, _deriv(v))), (-1, u), (1, Pu))
        R = _add((-1, _weight_part(res_u, w)), (-1j, _weight_part(res_v, w)))
        Nw = _divide_secular({k[1:]: c for k, c in R.items() if k[0] == 1}, w, tiny)
        N = _add((1, N), (1, Nw))
        R = _add((1, R), (-1, _mul(Nw, _deriv(z1))))
        # z_w' - i z_w = R off resonance, plus the free e^{i theta} term fixing z_w(0) = 0
        zw = {k: c / (1j * (k[0] - 1)) for k, c in R.items() if k[0] != 1 and abs(c) > tiny}
        for key, c in list(zw.items()):
            hk = (1,) + key[1:]
            zw[hk] = zw.get(hk, 0) - c
        du, dv = _real_imag(zw)
        u, v = _add((1, u), (1, du)), _add((1, v), (1, dv))

    G = _mul({(0, 0, 0, 0): 1.5 * one}, _mul(u, u))
    for i, j, n, coef in terms:
        f = 1 - 1.5 * (i + 1) - j - n
        G = _add((1, G), (coef * f, _mul({(0, i + j, 0, 0): one},
                                         _mul(_pow(v, 2 * j, one), _pow(u, 2 * n, one)))))
    clean = lambda f: {k: c for k, c in f.items() if abs(c) > tiny}
    return clean(u), clean(v), clean(N), clean(G)


def _harmonic(f, h, kind, tiny):
    out = {}
    for key, c in f.items():
        if key[0] != h:
            continue
        other = f.get((-h,) + key[1:], 0)
        amp = ((c + other) if h else c).real if kind == "cos" else (1j * (c - other)).real
        if abs(amp) > tiny:
            out[key[1:]] = amp
    return out


def _tables(K, E, tiny):
    u, v, N, G = expand(K, E, tiny=tiny)
    zero = 0 * K
    raw = {name: {} for name in TABLE_NAMES}
    raw["n"][(0, 0, 0)] = 1 + zero
    for (_, e0, e1, e2), c in N.items():
        raw["n"][(e0 + (e1 + e2) // 2, e2 // 2, e1 // 2)] = c
    for i in range(3):
        for name, f, kind, on_q in (("c", u, "cos", True), ("s", u, "sin", False),
                                    ("C", v, "cos", False), ("S", v, "sin", True)):
            for (e0, e1, e2), c in _harmonic(f, 2 * i + 1, kind, tiny).items():
                e1, e2 = (e1 - 1, e2) if on_q else (e1, e2 - 1)
                raw[name][(e0 + (e1 + e2) // 2, i, e2 // 2, e1 // 2)] = c
    for (e0, e1, e2), c in _harmonic(G, 0, "cos", tiny).items():
        if (e0, e1, e2) != (0, 0, 0):
            raw["d"][(e0 + (e1 + e2) // 2 - 1, e2 // 2, e1 // 2)] = c
    for i in range(1, 4):
        # p' = G - d: cos terms integrate to sigma sin, sin terms to kappa cos
        for (e0, e1, e2), c in _harmonic(G, 2 * i, "cos", tiny).items():
            raw["sigma"][(e0 + (e1 + e2) // 2 - 1, i, e2 // 2, e1 // 2)] = c / (2 * i)
        for (e0, e1, e2), c in _harmonic(G, 2 * i, "sin", tiny).items():
            e1, e2 = e1 - 1, e2 - 1
            raw["kappa"][(e0 + (e1 + e2) // 2, i, e2 // 2, e1 // 2)] = -c / (2 * i)
    out = {}
    for name in TABLE_NAMES:
        table = {key: zero for key in index_ranges(name)}
        extra = set(raw[name]) - set(table)
        if extra:
            raise ArithmeticError(f"{name}: terms outside the summation range {sorted(extra)}")
        table.update(raw[name])
        out[name] = table
    out["p_first"] = zero
    return out


@lru_cache(maxsize=8)
def _cached(K, E, tiny):
    return _tables(K, E, tiny)


def expanded_tables(K, E, tiny=1e-13):
    """Self-consistent Lindstedt tables derived from the averaged Hamiltonian.

    ``K`` and ``E`` are pi-scaled integrals (floats or mpmath numbers).
    Float results are cached. There is no odd-harmonic phase term, so
    ``p_first`` is zero.
    """
    if isinstance(K, float) and isinstance(E, float):
        return {k: (dict(v) if isinstance(v, dict) else v) for k, v in _cached(K, E, tiny).items()}
    return _tables(K, E, tiny)
