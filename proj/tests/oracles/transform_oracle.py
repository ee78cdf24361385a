#!/usr/bin/env python3
"""Reference values for the time-changed Erlang queue by numerical Laplace inversion.

Independent of the series code: the base-queue resolvent is obtained by solving
(wI - Q) x = e_0 on a truncated phase-count generator, composed with the
inverse-subordinator transform psi(z)/z * F(psi(z)), and inverted with Talbot's
method at high working precision.

Usage: transform_oracle.py [--dps N] [--cap N]
"""
import argparse
import json

import mpmath as mp


def generator(lams, k, mu, cap):
    n = cap + 1
    q = mp.zeros(n, n)
    lam_total = sum(lams)
    for j in range(n):
        for i, li in enumerate(lams, start=1):
            if li > 0 and j + i * k <= cap:
                q[j, j + i * k] += li
        if j >= 1:
            q[j, j - 1] += k * mu
        q[j, j] = -(lam_total + (k * mu if j >= 1 else 0))
    return q


def resolvent_row0(q, w):
    # x^T (wI - Q) = e_0^T  ->  (wI - Q)^T x = e_0
    n = q.rows
    a = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            a[j, i] = -q[i, j]
        a[i, i] += w
    b = mp.zeros(n, 1)
    b[0] = 1
    return mp.lu_solve(a, b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dps", type=int, default=30)
    ap.add_argument("--cap", type=int, default=120)
    args = ap.parse_args()
    mp.mp.dps = args.dps

    lams = [mp.mpf("0.6"), mp.mpf("0.3")]
    k, mu = 2, mp.mpf("1.2")
    theta, alpha = mp.mpf("0.5"), mp.mpf("0.7")
    lam_total = sum(lams)
    q = generator(lams, k, mu, args.cap)
    psi = lambda z: (z + theta) ** alpha - theta ** alpha

    cache = {}

    def row(z):
        key = complex(z)
        if key not in cache:
            cache[key] = resolvent_row0(q, psi(z))
        return cache[key]

    out = {}
    phases = [0, 1, 2, 3, 4, 5, 8]
    for t in [mp.mpf("0.5"), mp.mpf(1), mp.mpf(2)]:
        for j in phases:
            f = lambda z, j=j: psi(z) / z * row(z)[j]
            out[f"q{j}(t={float(t)})"] = float(mp.invertlaplace(f, t, method="talbot"))
        # mean phase count
        fm = lambda z: psi(z) / z * mp.fsum(i * row(z)[i] for i in range(q.rows))
        out[f"mean(t={float(t)})"] = float(mp.invertlaplace(fm, t, method="talbot"))
    # E[Y(t)] has transform 1/(z psi(z))
    out["EY(t=1)"] = float(mp.invertlaplace(lambda z: 1 / (z * psi(z)), 1, method="talbot"))
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
