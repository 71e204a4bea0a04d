"""Reference values for the special-function tests.

Run with: python3 tests/oracles/bessel_oracles.py
Values printed here are frozen into tests/test_special.cpp.
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def F(k):
    return mp.besseli(1, k) / mp.besseli(0, k)


def D(k):
    f = F(k)
    return 1 - f / k - f * f


print("# bessel ratio")
for k in ["1e-8", "0.1", "1", "2", "5", "10", "14.999", "15", "15.001", "30", "50", "100", "1000", "1e6"]:
    print(k, mp.nstr(F(mp.mpf(k)), 25))

print("# denominator 1 - F/k - F^2")
for k in ["0.01", "1", "10", "49.999", "50", "50.001", "100", "1e4", "1e6"]:
    print(k, mp.nstr(D(mp.mpf(k)), 25))

print("# xi inverse")
for y in ["1e-8", "2e-4", "1e-3", "1", "100", "1e4", "1e6"]:
    y = mp.mpf(y)
    x = mp.findroot(lambda x: x * F(x) - y, mp.sqrt(2 * y) if y < 1 else y + 0.5)
    print(mp.nstr(y, 6), mp.nstr(x, 25))

print("# kappa from r")
for r in ["0.697775", "0.5", "0.99", "0.9999"]:
    r = mp.mpf(r)
    print(mp.nstr(r, 8), mp.nstr(mp.findroot(lambda k: F(k) - r, 2), 25))

print("# log(2 pi I0(k))")
for k in ["0.5", "2", "10"]:
    print(k, mp.nstr(mp.log(2 * mp.pi * mp.besseli(0, mp.mpf(k))), 25))

# Large-kappa expansion of the denominator in u = 1/kappa.
u = sp.symbols("u", positive=True)
order = 12


def scaled_series(nu):
    s = 0
    term = sp.Integer(1)
    for k in range(order + 2):
        if k > 0:
            term = term * (4 * nu**2 - (2 * k - 1) ** 2) / (k * 8)
        s += (-1) ** k * term * u**k
    return s


ratio = sp.series(scaled_series(1) / scaled_series(0), u, 0, order + 1).removeO()
den = sp.expand(sp.series(1 - ratio * u - ratio**2, u, 0, order + 1).removeO())
print("# F asymptotic coefficients of u^k")
print([sp.nsimplify(ratio.coeff(u, k)) for k in range(order + 1)])
print("# denominator asymptotic coefficients of u^k")
print([sp.nsimplify(den.coeff(u, k)) for k in range(order + 1)])
