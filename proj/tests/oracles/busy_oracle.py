#!/usr/bin/env python3
"""Reference busy-period CDF of the time-changed Erlang queue by Laplace inversion.

The base queue started from `a` phases is absorbed at phase count 0 after an
operational time tau with transform f(w) = k mu [(wI - Q*)^{-1}]_{a,1}, Q*
being the generator restricted to phase counts 1..cap. The calendar busy
period is D(tau), so its CDF has transform f(psi(z)) / z.

Usage: busy_oracle.py [--dps N] [--cap N] [--a N]
"""
import argparse
import json

import mpmath as mp


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dps", type=int, default=25)
    ap.add_argument("--cap", type=int, default=100)
    ap.add_argument("--a", type=int, default=2)
    args = ap.parse_args()
    mp.mp.dps = args.dps

    lams = [mp.mpf("0.6"), mp.mpf("0.3")]
    k, mu = 2, mp.mpf("1.2")
    theta, alpha = mp.mpf("0.5"), mp.mpf("0.7")
    lam_total = sum(lams)
    n = args.cap
    psi = lambda z: (z + theta) ** alpha - theta ** alpha

    def absorption_transform(w):
        # rows/cols 0..n-1 stand for phase counts 1..n
        m = mp.zeros(n, n)
        for i in range(n):
            j = i + 1
            m[i, i] = w + lam_total + k * mu
            for b, lb in enumerate(lams, start=1):
                if i + b * k < n:
                    m[i, i + b * k] -= lb
            if i >= 1:
                m[i, i - 1] -= k * mu
        rhs = mp.zeros(n, 1)
        rhs[0] = k * mu
        x = mp.lu_solve(m, rhs)
        return x[args.a - 1]

    out = {}
    for t in ["0.1", "0.25", "0.5", "1", "1.5", "2"]:
        tt = mp.mpf(t)
        f = lambda z: absorption_transform(psi(z)) / z
        out[f"F(t={t})"] = float(mp.invertlaplace(f, tt, method="talbot"))
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
