"""Arbitrary-precision reference values for the special-function and
subordinator tests.

Mittag-Leffler values are partial sums with an interval bound on the tail:
once the term ratio r_j stays below q < 1 (checked over a window where the
ratio is monotone), the tail is bounded by |a_J| q / (1 - q).
"""
import mpmath as mp

mp.mp.dps = 50


def ml3(alpha, beta, gamma, x, eps=mp.mpf("1e-40")):
    alpha, beta, gamma, x = map(mp.mpf, (alpha, beta, gamma, x))
    s = mp.mpf(0)
    j = 0
    while True:
        a = x**j * mp.rf(gamma, j) / (mp.factorial(j) * mp.gamma(alpha * j + beta))
        s += a
        nxt = x ** (j + 1) * mp.rf(gamma, j + 1) / (mp.factorial(j + 1) * mp.gamma(alpha * (j + 1) + beta))
        if j > 5 and a != 0 and abs(nxt / a) < mp.mpf("0.5") and abs(nxt) < eps:
            q = abs(nxt / a)
            return s, abs(nxt) / (1 - q)
        j += 1


def expected_inverse_gamma(a, b, t):
    # E[L(t)] = int_0^inf P(L(t) > x) dx = int_0^inf P(G(x) <= t) dx
    #         = int_0^inf P(a x, b t) dx with P the regularized lower gamma.
    f = lambda x: mp.gammainc(a * x, 0, b * t, regularized=True)
    return mp.quad(f, [0, 1, 2, 5, 10, 20, mp.inf])


def stable_half_median():
    # alpha = 1/2, dt = 1: X has Levy law with scale 1/2, CDF erfc(1/(2 sqrt x)).
    return mp.findroot(lambda x: mp.erfc(1 / (2 * mp.sqrt(x))) - mp.mpf("0.5"), 1.1)


if __name__ == "__main__":
    v, b = ml3(0.5, 1.0, 2.0, -1.0)
    print("ml3(0.5,1,2,-1) =", mp.nstr(v, 25), " tail bound", mp.nstr(b, 3))
    v, b = ml3(0.7, 1.7, 1.0, 0.3)
    print("ml2(0.7,1.7,0.3) =", mp.nstr(v, 25), " tail bound", mp.nstr(b, 3))
    v, b = ml3(0.7, 1.4, 2.0, -0.5)
    print("ml3(0.7,1.4,2,-0.5) =", mp.nstr(v, 25))
    s = mp.mpf(2)
    print("laplace(0.7,1.4,2,-0.5; s=2) =", mp.nstr(s ** (0.7 * 2 - 1.4) / (s**0.7 + 0.5) ** 2, 25))
    print("E[L_{1,1}(1)] =", mp.nstr(expected_inverse_gamma(1, 1, 1), 20))
    print("stable median (alpha=1/2, dt=1) =", mp.nstr(stable_half_median(), 20))
