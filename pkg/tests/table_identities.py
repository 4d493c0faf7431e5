"""Relations between Lindstedt coefficients, transcribed from the tables.

Each entry is (label, lhs, rhs) with lhs and rhs callables of the evaluated
tables t and the pi-scaled integrals K, E. Vanishing entries appear with a
right-hand side of zero.
"""

_ZEROS = {
    "c": ["1000", "1100", "2000", "2100", "2200", "2201", "2210"],
    "s": ["1100", "2100", "2200", "2201", "2210"],
    "C": ["1000", "1100", "2000", "2100", "2200", "2201", "2210"],
    "S": ["1100", "2100", "2200", "2201", "2210"],
    "kappa": ["1200", "2200", "2300", "2301", "2310"],
    "sigma": ["0100", "1100", "1200", "1201", "1210", "2100", "2110", "2111", "2200",
              "2201", "2210", "2300", "2301", "2302", "2310", "2311", "2320"],
    "d": ["100", "200", "210"],
}


def _key(code):
    return tuple(int(ch) for ch in code)


def g(name, code):
    return lambda t, K, E: t[name][_key(code)]


def lin(factor, name, code):
    return lambda t, K, E: factor * t[name][_key(code)]


def _relations():
    n101, n200, n201 = g("n", "101"), g("n", "200"), g("n", "201")
    c2202 = g("c", "2202")
    rel = [
        ("n101 = n110", n101, g("n", "110")),
        ("n211 = 2 n220", g("n", "211"), lin(2, "n", "220")),
        ("c1010 = -c1110", g("c", "1010"), lin(-1, "c", "1110")),
        ("c1101 = -c1001", g("c", "1101"), lin(-1, "c", "1001")),
        ("c2001 = -c2101", g("c", "2001"), lin(-1, "c", "2101")),
        ("s2000 = -n200", g("s", "2000"), lin(-1, "n", "200")),
        ("s2110 = n201 / 4", g("s", "2110"), lin(0.25, "n", "201")),
        ("s2202 = -5 c2202", g("s", "2202"), lin(-5, "c", "2202")),
        ("s2211 = 10 c2202", g("s", "2211"), lin(10, "c", "2202")),
        ("s2220 = -c2202", g("s", "2220"), lin(-1, "c", "2202")),
        ("C1101 = -C1001", g("C", "1101"), lin(-1, "C", "1001")),
        ("C1010 = -C1110", g("C", "1010"), lin(-1, "C", "1110")),
        ("C2001 = -C2101", g("C", "2001"), lin(-1, "C", "2101")),
        ("C2001 = -3 c2001", g("C", "2001"), lin(-3, "c", "2001")),
        ("C2010 = -C2110", g("C", "2010"), lin(-1, "C", "2110")),
        ("C2020 = c2020", g("C", "2020"), g("c", "2020")),
        ("C2120 = c2120", g("C", "2120"), g("c", "2120")),
        ("C2202 = 25 c2202", g("C", "2202"), lin(25, "c", "2202")),
        ("C2211 = -50 c2202", g("C", "2211"), lin(-50, "c", "2202")),
        ("C2220 = 5 c2202", g("C", "2220"), lin(5, "c", "2202")),
        ("S1000 = s1000", g("S", "1000"), g("s", "1000")),
        ("S1001 = 11/15 S1010", g("S", "1001"), lin(11 / 15, "S", "1010")),
        ("S1101 = -1/3 S1110", g("S", "1101"), lin(-1 / 3, "S", "1110")),
        ("S2000 = 3 s2000", g("S", "2000"), lin(3, "s", "2000")),
        ("S2101 = -n201 / 4", g("S", "2101"), lin(-0.25, "n", "201")),
        ("S2120 = -9 c2102", g("S", "2120"), lin(-9, "c", "2102")),
        ("S2202 = S2220 / 5", g("S", "2202"), lin(0.2, "S", "2220")),
        ("S2202 = -S2211 / 10", g("S", "2202"), lin(-0.1, "S", "2211")),
        ("S2202 = C2220", g("S", "2202"), g("C", "2220")),
        ("kappa1101 = 5/12 n101", g("kappa", "1101"), lin(5 / 12, "n", "101")),
        ("kappa1110 = 17/12 n101", g("kappa", "1110"), lin(17 / 12, "n", "101")),
        ("kappa1201 = -kappa1210", g("kappa", "1201"), lin(-1, "kappa", "1210")),
        ("kappa1201 = 13/24 n101", g("kappa", "1201"), lin(13 / 24, "n", "101")),
        ("kappa2100 = -9/4 n200", g("kappa", "2100"), lin(-9 / 4, "n", "200")),
        ("kappa2110 = -3 S2001", g("kappa", "2110"), lin(-3, "S", "2001")),
        ("kappa2202 = -kappa2220", g("kappa", "2202"), lin(-1, "kappa", "2220")),
        ("kappa2210 = 7/6 S2110", g("kappa", "2210"), lin(7 / 6, "S", "2110")),
        ("kappa2211 = 416/25 kappa1101^2", g("kappa", "2211"),
         lambda t, K, E: 416 / 25 * t["kappa"][(1, 1, 0, 1)] ** 2),
        ("kappa2302 = kappa2320", g("kappa", "2302"), g("kappa", "2320")),
        ("kappa2311 = -10/3 kappa2302", g("kappa", "2311"), lin(-10 / 3, "kappa", "2302")),
        ("sigma0101 = -sigma0110", g("sigma", "0101"), lin(-1, "sigma", "0110")),
        ("sigma1102 = 5/6 n101", g("sigma", "1102"), lin(5 / 6, "n", "101")),
        ("sigma1111 = 3/2 n101", g("sigma", "1111"), lin(1.5, "n", "101")),
        ("sigma1120 = -1/3 n101", g("sigma", "1120"), lin(-1 / 3, "n", "101")),
        ("sigma1202 = kappa1201 / 4", g("sigma", "1202"), lin(0.25, "kappa", "1201")),
        ("sigma1211 = -6 sigma1202", g("sigma", "1211"), lin(-6, "sigma", "1202")),
        ("sigma1220 = sigma1202", g("sigma", "1220"), g("sigma", "1202")),
        ("sigma2101 = -3 n200", g("sigma", "2101"), lin(-3, "n", "200")),
        ("sigma2102 = 8(4E-K)/(15(E-K)) kappa1101", g("sigma", "2102"),
         lambda t, K, E: 8 * (4 * E - K) / (15 * (E - K)) * t["kappa"][(1, 1, 0, 1)]),
        ("sigma2120 = 4/3 sigma2102", g("sigma", "2120"), lin(4 / 3, "sigma", "2102")),
        ("sigma2303 = -sigma2330", g("sigma", "2303"), lin(-1, "sigma", "2330")),
        ("sigma2303 = kappa2302 / 6", g("sigma", "2303"), lin(1 / 6, "kappa", "2302")),
        ("sigma2312 = -sigma2321", g("sigma", "2312"), lin(-1, "sigma", "2321")),
        ("sigma2312 = -5/2 kappa2302", g("sigma", "2312"), lin(-2.5, "kappa", "2302")),
        ("d001 = d010", g("d", "001"), g("d", "010")),
        ("d102 = 9/8 n101", g("d", "102"), lin(9 / 8, "n", "101")),
        ("d111 = 2 d120", g("d", "111"), lin(2, "d", "120")),
        ("d111 = n101 / 4", g("d", "111"), lin(0.25, "n", "101")),
        ("d201 = 6 n200", g("d", "201"), lin(6, "n", "200")),
        ("d221 = 3 d230", g("d", "221"), lin(3, "d", "230")),
    ]
    zero = lambda t, K, E: 0.0
    for name, codes in _ZEROS.items():
        rel += [(f"{name}{code} = 0", g(name, code), zero) for code in codes]
    return rel


RELATIONS = _relations()


def max_defect(tables, K, E):
    """Largest |lhs - rhs| relative to max(1, |rhs|), with the offending label."""
    worst = (0.0, None)
    for label, lhs, rhs in RELATIONS:
        a, b = lhs(tables, K, E), rhs(tables, K, E)
        err = abs(a - b) / max(1.0, abs(b))
        if err > worst[0]:
            worst = (err, label)
    return worst
