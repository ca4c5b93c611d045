"""Independent reference values for crates/core/tests/oracles.rs.

Requires sympy, mpmath and numpy. Run: python3 tools/oracles.py
"""
import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 40
z, zb, t = sp.symbols("z zb t")


def hq(m, n):
    return sp.expand(
        sum((-1) ** i * sp.binomial(m, i) * sp.binomial(n, i) * sp.factorial(i)
            * z ** (m - i) * zb ** (n - i) for i in range(min(m, n) + 1))
    )


def diagonal_in_t(k):
    return sp.expand(sum(c * t ** mon[0] for mon, c in sp.Poly(hq(k, k), z, zb).terms()))


print("# H^Q_{k,k} = (-1)^k k! L_k^(0)(|q|^2)")
for k in range(7):
    lhs = diagonal_in_t(k)
    assert sp.expand(lhs - (-1) ** k * sp.factorial(k) * sp.assoc_laguerre(k, 0, t)) == 0
    if k > 0:
        assert sp.expand(lhs - (-1) ** k * sp.factorial(k) * sp.assoc_laguerre(k, 1, t)) != 0
    print(k, [int(sp.Poly(lhs, t).coeff_monomial(t ** i)) for i in range(k + 1)])

print("# (d/dz - zb)^n z^m = (-1)^n H^Q_{m,n}")
for m in range(7):
    for n in range(5):
        f = z ** m
        for _ in range(n):
            f = sp.expand(sp.diff(f, z) - zb * f)
        assert sp.expand(f - (-1) ** n * hq(m, n)) == 0
print("H^Q_{3,2} =", hq(3, 2))
print("H^Q_{2,4} =", hq(2, 4))

print("# M(-n; j+1 | t) = n!/(j+1)_n L_n^(j)(t)")
for n in range(6):
    for j in range(5):
        lhs = sp.expand(sp.hyperexpand(sp.hyper([-n], [j + 1], t)))
        rhs = sp.expand(sp.factorial(n) / sp.rf(j + 1, n) * sp.assoc_laguerre(n, j, t))
        assert sp.simplify(lhs - rhs) == 0
for n, j in [(3, 2), (4, 1), (2, 4)]:
    p = sp.Poly(sp.expand(sp.hyperexpand(sp.hyper([-n], [j + 1], t))), t)
    print(n, j, [str(p.coeff_monomial(t ** i)) for i in range(n + 1)])

print("# Kummer, Laguerre, Hermite values")
for a, c, x in [(-0.5, 1, 10.0), (0.3, 2.5, 3.0), (-2.5, 1, 64.0), (1, 2, 5.0)]:
    print("M", a, c, x, mp.nstr(mp.hyp1f1(a, c, x), 20))
for n, g, x in [(5, 0, 2.5), (7, 1, 3.3), (4, 2.5, 0.7), (30, 0, 10.0)]:
    print("L", n, g, x, mp.nstr(mp.laguerre(n, g, x), 20))
for n, x in [(10, 0.7), (25, -1.3)]:
    print("H", n, x, mp.nstr(mp.hermite(n, x), 20))

print("# Gauss-Hermite")
x, w = np.polynomial.hermite.hermgauss(5)
print("N=5 nodes", [repr(float(v)) for v in x])
print("N=5 weights", [repr(float(v)) for v in w])
x, w = np.polynomial.hermite.hermgauss(100)
print("N=100 largest node", repr(float(x[-1])), "its weight", repr(float(w[-1])))
