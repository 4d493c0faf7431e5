"""Closed-form coefficients of the Lindstedt series of the mean flow.

Every table is a dict keyed by its index tuple and covering exactly the
index ranges of the corresponding summation (zeros included). ``K`` and
``E`` are the pi-scaled complete integrals K(3/4)/pi and E(3/4)/pi; the
functions accept floats or mpmath numbers so the tables can be evaluated at
two precisions.

The first-order amplitude entries of the c, s, C and S tables (m = 1 with
j + k = 1) are printed as bare rationals in the source tables, and so is
the first summand of s_{1,0,0,0} (shared by S_{1,0,0,0}). Matched against
the averaged equations they all carry the common factor
n_{1,0,1} / 3 = (11 K - 14 E) / (64 (K - E)). ``lindstedt_tables`` applies
that factor unless ``as_printed=True``.
"""

__all__ = ["lindstedt_tables", "amplitude_factor", "TABLE_NAMES", "index_ranges"]

TABLE_NAMES = ("n", "c", "s", "C", "S", "kappa", "sigma", "d")


def index_ranges(name):
    """All index tuples of a table, in summation order."""
    if name in ("n",):
        return [(m, j, k) for m in range(3) for j in range(m + 1) for k in range(m - j + 1)]
    if name in ("c", "s", "C", "S"):
        return [(m, i, j, k) for m in range(3) for i in range(m + 1)
                for j in range(m + 1) for k in range(m - j + 1)]
    if name == "kappa":
        return [(m, i, j, k) for m in range(3) for i in range(1, m + 2)
                for j in range(m + 1) for k in range(m - j + 1)]
    if name == "sigma":
        return [(m, i, j, k) for m in range(3) for i in range(1, m + 2)
                for j in range(2 * m + 2) for k in range(m + 2 - j)]
    if name == "d":
        return [(m, j, k) for m in range(3) for j in range(m + 2) for k in range(m + 2 - j)]
    raise KeyError(name)


def _filled(name, entries, zero):
    table = {key: zero for key in index_ranges(name)}
    unknown = set(entries) - set(table)
    if unknown:
        raise KeyError(f"{name}: entries outside the summation range: {sorted(unknown)}")
    table.update(entries)
    return table


def amplitude_factor(K, E):
    """Factor n_{1,0,1} / 3 carried by the first-order amplitude entries."""
    return (11 * K - 14 * E) / (64 * (K - E))


def lindstedt_tables(K, E, as_printed=False):
    """Evaluate the n, c, s, C, S, kappa, sigma and d tables.

    The returned dict also holds the scalar ``p_first``, the coefficient of
    the first-harmonic summand of the phase term p.

    With ``as_printed=True`` the entries listed in the module docstring are
    returned exactly as printed.
    """
    zero = 0 * K
    D2 = (E - K) ** 2
    EK, K2, E2 = E * K, K * K, E * E

    def quad(a, b, c, den):
        # (a E K + b K^2 + c E^2) / (den (E - K)^2)
        return (a * EK + b * K2 + c * E2) / (den * D2)

    n = {
        (0, 0, 0): 1 + zero,
        (1, 0, 0): -(-64 * EK - 256 * K2 + 320 * E2 + 63) / (144 * D2),
        (1, 0, 1): 3 * (11 * K - 14 * E) / (64 * (K - E)),
        (2, 0, 0): -2 * (4 * E - K) ** 2 / (81 * D2),
        (2, 0, 1): -quad(-370, 35, 344, 96),
        (2, 0, 2): quad(-12892, 5459, 7244, 16384),
        (2, 1, 0): -quad(-162, 19, 152, 32),
        (2, 1, 1): -quad(-1892, 349, 2164, 8192),
    }
    n[(1, 1, 0)] = n[(1, 0, 1)]
    n[(2, 2, 0)] = n[(2, 1, 1)] / 2
    n101, n200, n201 = n[(1, 0, 1)], n[(2, 0, 0)], n[(2, 0, 1)]

    c2202 = quad(-2860, 1163, 1724, 196608)
    c2001 = (12 * E - K) / (16 * (E - K))
    c = {
        (0, 0, 0, 0): 1 + zero,
        (1, 0, 1, 0): 0.75 + zero,
        (1, 1, 1, 0): -0.75 + zero,
        (1, 1, 0, 1): 0.25 + zero,
        (1, 0, 0, 1): -0.25 + zero,
        (2, 0, 0, 1): c2001,
        (2, 1, 0, 1): -c2001,
        (2, 0, 0, 2): -quad(-9724, 4451, 4652, 196608),
        (2, 0, 1, 0): -quad(-526, 47, 488, 192),
        (2, 0, 1, 1): -5 * quad(-7964, 2971, 5452, 98304),
        (2, 0, 2, 0): -quad(-26972, 9019, 21004, 196608),
        (2, 1, 0, 2): quad(-286, 137, 122, 8192),
        (2, 1, 1, 0): quad(-526, 47, 488, 192),
        (2, 1, 1, 1): 5 * quad(-1804, 689, 1196, 16384),
        (2, 1, 2, 0): 3 * quad(-352, 89, 344, 16384),
        (2, 2, 0, 2): c2202,
        (2, 2, 1, 1): -5 * quad(-2860, 1163, 1724, 98304),
        (2, 2, 2, 0): 5 * quad(-2860, 1163, 1724, 196608),
    }

    s1000_first = 128 * (4 * E - K) / (9 * (14 * E - 11 * K))
    if not as_printed:
        s1000_first = s1000_first * amplitude_factor(K, E)
    s1000 = s1000_first - (32 * EK - 96 * K2 + 64 * E2 + 21) / (48 * D2)
    s = {
        (0, 0, 0, 0): -1 + zero,
        (1, 0, 0, 0): s1000,
        (1, 0, 0, 1): 5.25 + zero,
        (1, 0, 1, 0): 2.25 + zero,
        (1, 1, 0, 1): -0.75 + zero,
        (1, 1, 1, 0): 0.25 + zero,
        (2, 0, 0, 0): -n200,
        (2, 0, 0, 1): quad(-530, -5, 472, 384),
        (2, 0, 0, 2): quad(11396, 6563, -34132, 196608),
        (2, 0, 1, 0): -quad(-278, 41, 264, 128),
        (2, 0, 1, 1): -7 * quad(-17644, 6143, 13148, 98304),
        (2, 0, 2, 0): -quad(-95524, 34373, 68468, 196608),
        (2, 1, 0, 1): quad(-994, 83, 920, 384),
        (2, 1, 0, 2): 3 * quad(-968, 331, 736, 16384),
        (2, 1, 1, 0): n201 / 4,
        (2, 1, 1, 1): -quad(-5764, 2363, 3428, 16384),
        (2, 1, 2, 0): -quad(-319, 113, 233, 4096),
        (2, 2, 0, 2): -5 * c2202,
        (2, 2, 1, 1): 10 * c2202,
        (2, 2, 2, 0): -c2202,
    }

    C2010 = quad(-98, 1, 88, 192)
    C = {
        (0, 0, 0, 0): 1 + zero,
        (1, 1, 0, 1): 2.25 + zero,
        (1, 0, 0, 1): -2.25 + zero,
        (1, 0, 1, 0): 0.75 + zero,
        (1, 1, 1, 0): -0.75 + zero,
        (2, 0, 0, 1): -3 * c2001,
        (2, 1, 0, 1): 3 * c2001,
        (2, 0, 0, 2): -quad(-66748, 32531, 27116, 196608),
        (2, 0, 1, 0): C2010,
        (2, 1, 1, 0): -C2010,
        (2, 0, 1, 1): -quad(-65516, 26527, 39772, 98304),
        (2, 0, 2, 0): c[(2, 0, 2, 0)],
        (2, 1, 0, 2): 9 * (11 * EK + 8 * K2 - 37 * E2) / (4096 * D2),
        (2, 1, 1, 1): 3 * quad(-7612, 3089, 4604, 16384),
        (2, 1, 2, 0): c[(2, 1, 2, 0)],
        (2, 2, 0, 2): 25 * c2202,
        (2, 2, 1, 1): -50 * c2202,
        (2, 2, 2, 0): 5 * c2202,
    }

    S = {
        (0, 0, 0, 0): 1 + zero,
        (1, 0, 0, 0): s1000,
        (1, 0, 0, 1): 2.75 + zero,
        (1, 0, 1, 0): 15 * 2.75 / 11 + zero,
        (1, 1, 0, 1): 0.75 + zero,
        (1, 1, 1, 0): -3 * 0.75 + zero,
        (2, 0, 0, 0): 3 * s[(2, 0, 0, 0)],
        (2, 0, 0, 1): quad(-1574, 193, 1480, 1152),
        (2, 0, 0, 2): quad(-133892, 56701, 75220, 196608),
        (2, 0, 1, 0): -quad(-1226, 127, 1144, 384),
        (2, 0, 1, 1): -quad(-51436, 14687, 46172, 98304),
        (2, 0, 2, 0): -quad(-16412, 139, 25804, 196608),
        (2, 1, 0, 1): -n201 / 4,
        (2, 1, 0, 2): 3 * quad(-1496, 637, 832, 16384),
        (2, 1, 1, 0): -quad(-254, 13, 232, 128),
        (2, 1, 1, 1): 3 * quad(-7172, 2719, 4804, 16384),
        (2, 1, 2, 0): -9 * c[(2, 1, 0, 2)],
        (2, 2, 0, 2): C[(2, 2, 2, 0)],
        (2, 2, 2, 0): 5 * C[(2, 2, 2, 0)],
        (2, 2, 1, 1): -10 * C[(2, 2, 2, 0)],
    }

    k1101 = 5 * n101 / 12
    k2202 = 27 * quad(-572, 251, 300, 32768)
    k2302 = quad(-202268, 81907, 122764, 786432)
    kappa = {
        (0, 1, 0, 0): 0.75 + zero,
        (1, 1, 0, 0): -7 * (64 * EK - 128 * K2 + 64 * E2 + 27) / (192 * D2),
        (1, 1, 0, 1): k1101,
        (1, 1, 1, 0): 17 * n101 / 12,
        (1, 2, 0, 1): 13 * n101 / 24,
        (1, 2, 1, 0): -13 * n101 / 24,
        (2, 1, 0, 0): -9 * n200 / 4,
        (2, 1, 0, 1): -quad(-3446, 337, 3208, 1152),
        (2, 1, 0, 2): 7 * quad(-2948, 1237, 1684, 262144),
        (2, 1, 1, 0): -3 * S[(2, 0, 0, 1)],
        (2, 1, 1, 1): -quad(-153604, 52853, 115988, 131072),
        (2, 1, 2, 0): 9 * quad(-4796, 3067, 172, 262144),
        (2, 2, 0, 1): quad(-6842, 559, 6328, 2304),
        (2, 2, 0, 2): k2202,
        (2, 2, 2, 0): -k2202,
        (2, 2, 1, 0): 7 * S[(2, 1, 1, 0)] / 6,
        (2, 2, 1, 1): 416 * k1101 ** 2 / 25,
        (2, 3, 0, 2): k2302,
        (2, 3, 2, 0): k2302,
        (2, 3, 1, 1): -10 * k2302 / 3,
    }

    def quad_ek(e2, ek, k2, den):
        # (e2 E^2 + ek K E + k2 K^2) / (den (E - K)^2), sigma-table ordering
        return (e2 * E2 + ek * EK + k2 * K2) / (den * D2)

    s1202 = kappa[(1, 2, 0, 1)] / 4
    s2102 = 8 * (4 * E - K) / (15 * (E - K)) * k1101
    sigma = {
        (0, 1, 0, 1): 0.375 + zero,
        (0, 1, 1, 0): -0.375 + zero,
        (1, 1, 0, 1): -(128 * E2 + 176 * EK - 304 * K2 + 63) / (96 * D2),
        (1, 1, 0, 2): 5 * n101 / 6,
        (1, 1, 1, 0): (64 * E2 + 32 * EK - 96 * K2 + 21) / (64 * D2),
        (1, 1, 1, 1): 1.5 * n101,
        (1, 1, 2, 0): -n101 / 3,
        (1, 2, 0, 2): s1202,
        (1, 2, 1, 1): -6 * s1202,
        (1, 2, 2, 0): s1202,
        (2, 1, 0, 1): -3 * n200,
        (2, 1, 0, 2): s2102,
        (2, 1, 0, 3): quad_ek(298364, -510796, 211631, 524288),
        (2, 1, 1, 2): quad_ek(136636, -358028, 178111, 524288),
        (2, 1, 2, 0): 4 * s2102 / 3,
        (2, 1, 2, 1): 3 * quad_ek(138092, -233596, 96107, 524288),
        (2, 1, 3, 0): 3 * quad_ek(15916, -17468, 4891, 524288),
        (2, 2, 0, 2): quad_ek(392, -422, 39, 512),
        (2, 2, 0, 3): quad_ek(10420, -17732, 7321, 65536),
        (2, 2, 1, 1): -quad_ek(700, -761, 52, 192),
        (2, 2, 1, 2): 3 * quad_ek(9812, -13156, 4577, 65536),
        (2, 2, 2, 0): quad_ek(2072, -2290, 65, 4608),
        (2, 2, 2, 1): -3 * quad_ek(20764, -34892, 14299, 65536),
        (2, 2, 3, 0): 3 * quad_ek(76, -572, 343, 65536),
        (2, 3, 0, 3): k2302 / 6,
        (2, 3, 3, 0): -k2302 / 6,
        (2, 3, 1, 2): -2.5 * k2302,
        (2, 3, 2, 1): 2.5 * k2302,
    }

    d230 = -quad(-2332, 719, 1964, 16384) / 3
    d = {
        (0, 0, 0): -(1 - 4 * K2) / D2,
        (0, 0, 1): 0.75 + zero,
        (0, 1, 0): 0.75 + zero,
        (1, 0, 1): -(16 * EK - 272 * K2 + 256 * E2 + 63) / (48 * D2),
        (1, 0, 2): 9 * n101 / 8,
        (1, 1, 0): -7 * (-32 * EK - 32 * K2 + 64 * E2 + 9) / (96 * D2),
        (1, 1, 1): n101 / 4,
        (1, 2, 0): n101 / 8,
        (2, 0, 1): 6 * n200,
        (2, 0, 2): -quad(-1730, 205, 1624, 384),
        (2, 0, 3): quad(-55220, 22837, 32356, 49152),
        (2, 1, 1): -quad(-799, 68, 740, 48),
        (2, 1, 2): quad(-1364, 733, 388, 16384),
        (2, 2, 0): -quad(-1382, 139, 1288, 384),
        (2, 2, 1): 3 * d230,
        (2, 3, 0): d230,
    }

    if not as_printed:
        lam = amplitude_factor(K, E)
        for table in (c, s, C, S):
            for key in list(table):
                m, _, j, k = key
                if m == 1 and j + k == 1:
                    table[key] = table[key] * lam

    raw = {"n": n, "c": c, "s": s, "C": C, "S": S, "kappa": kappa, "sigma": sigma, "d": d}
    out = {name: _filled(name, raw[name], zero) for name in TABLE_NAMES}
    # first-harmonic summand of p, alpha^2 (aq sin + aQ cos) times this value
    out["p_first"] = 64 * (3 * (1 + zero) / 4) ** 0.5 / (13 * (K - E) ** 3)
    return out
