#!/usr/bin/env python3
"""Brute-force reference data for `fogdrip oracle-check`.

Enumerates every height field of an L x L interior (zero boundary), computes
the partition function of exp(-beta * sum |h_x - h_y|) and the alpha marginal
under the grand and the canonical ensemble. Written from the model definition
only; it shares no code with the C++ library.
"""

import argparse
import itertools
import json
import math


def log_binom_pmf(n, p, k):
    if k < 0 or k > n:
        return -math.inf
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
            + k * math.log(p) + (n - k) * math.log1p(-p))


def log_sum(values):
    m = max(values)
    if m == -math.inf:
        return m
    return m + math.log(sum(math.exp(v - m) for v in values))


def sigma_log_pmf(n_solid, ps, n_vapour, pv, target):
    terms = [log_binom_pmf(n_solid, ps, k) + log_binom_pmf(n_vapour, pv, target - k)
             for k in range(0, n_solid + 1)]
    return log_sum(terms)


def energy(h, side):
    def at(x, y):
        return h.get((x, y), 0)
    e = 0
    for y in range(side):
        for x in range(side):
            if x + 1 < side:
                e += abs(at(x, y) - at(x + 1, y))
            if y + 1 < side:
                e += abs(at(x, y) - at(x, y + 1))
    return e


def generate(L, hmax, beta, pv, ps, delta):
    N = L + 2
    side = N
    sites = [(x, y) for y in range(1, L + 1) for x in range(1, L + 1)]
    levels = range(-hmax, hmax + 1)
    rows = []
    for heights in itertools.product(levels, repeat=len(sites)):
        h = dict(zip(sites, heights))
        rows.append((energy(h, side), sum(heights)))

    grand = [-beta * e for e, _ in rows]
    log_z = log_sum(grand)

    half = N ** 3  # R = 1
    rho0 = 0.5 * (ps + pv)
    base = 2 * rho0 * N ** 3
    sigma = round(base + delta * N * N)
    log_q = {}
    for _, a in rows:
        if a not in log_q:
            log_q[a] = sigma_log_pmf(half + a, ps, half - a, pv, sigma)
    canonical = [-beta * e + log_q[a] for e, a in rows]
    log_zc = log_sum(canonical)

    def marginal(weights, log_norm):
        out = {}
        for (_, a), w in zip(rows, weights):
            out[a] = out.get(a, 0.0) + math.exp(w - log_norm)
        return {str(a): out[a] for a in sorted(out)}

    flat = next(i for i, (_, a) in enumerate(rows) if a == 0 and rows[i][0] == 0)
    return {
        "L": L,
        "hmax": hmax,
        "beta": beta,
        "count": len(rows),
        "log_partition": log_z,
        "flat_probability": math.exp(grand[flat] - log_z),
        "alpha_marginal": marginal(grand, log_z),
        "canonical": {
            "pv": pv,
            "ps": ps,
            "delta": delta,
            "sigma": sigma,
            "flat_probability": math.exp(canonical[flat] - log_zc),
            "alpha_marginal": marginal(canonical, log_zc),
        },
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, required=True)
    ap.add_argument("--hmax", type=int, required=True)
    ap.add_argument("--beta", type=float, required=True)
    ap.add_argument("--pv", type=float, default=0.2)
    ap.add_argument("--ps", type=float, default=0.8)
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    data = generate(args.L, args.hmax, args.beta, args.pv, args.ps, args.delta)
    with open(args.out, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
