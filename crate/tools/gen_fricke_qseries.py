#!/usr/bin/env python3
"""Generate the q-expansion of the Hauptmodul of the Fricke group of a prime
level p = 71 from weight-4 products of theta series of the reduced binary
quadratic forms of discriminant -p.

The products span the weight-4 forms invariant under Gamma_0(p) and the Fricke
involution. The form vanishing to the highest order at infinity has no other
zeros, so the quotient of the next one by it has a single simple pole at the
cusp. Output follows the q-series file format read by `cfq`.

usage: gen_fricke_qseries.py <level> <num_coeffs> > <level>A.txt
"""
import math
import sys
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np


def reduced_forms(disc):
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (b < 0 and a == c) or math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def theta(form, disc, m):
    a, b, c = form
    t = np.zeros(m, dtype=np.int64)
    ymax = math.isqrt(4 * a * m // -disc) + 2
    xmax = math.isqrt(4 * c * m // -disc) + 2
    for y in range(-ymax, ymax + 1):
        for x in range(-xmax, xmax + 1):
            v = a * x * x + b * x * y + c * y * y
            if v < m:
                t[v] += 1
    return t


def main():
    p, n = int(sys.argv[1]), int(sys.argv[2])
    disc = -p
    m = n + 32
    # (a,b,c) and (a,-b,c) share a theta series
    thetas = [theta(f, disc, m) for f in reduced_forms(disc) if f[1] >= 0]
    prods = []
    for idx in combinations_with_replacement(range(len(thetas)), 4):
        r = thetas[idx[0]]
        for i in idx[1:]:
            r = np.convolve(r, thetas[i])[:m]
        prods.append([int(x) for x in r])

    # echelon on the leading columns, tracking combinations
    cols = 64
    k = len(prods)
    mat = [[Fraction(x) for x in pr[:cols]] for pr in prods]
    combo = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    rank = 0
    pivots = []
    for col in range(cols):
        piv = next((i for i in range(rank, k) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        combo[rank], combo[piv] = combo[piv], combo[rank]
        for i in range(k):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / mat[rank][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
                combo[i] = [x - f * y for x, y in zip(combo[i], combo[rank])]
        pivots.append(col)
        rank += 1
    top = pivots[-1]
    if pivots != list(range(top + 1)):
        sys.exit(f"gap in orders at infinity: {pivots}")

    def expand(row):
        den = math.lcm(*(c.denominator for c in combo[row]))
        s = [0] * m
        for j, cf in enumerate(combo[row]):
            w = int(cf * den)
            if w:
                pr = prods[j]
                for i in range(m):
                    s[i] += w * pr[i]
        return s

    g = expand(rank - 1)[top:]
    h = expand(rank - 2)[top - 1:]
    scale = Fraction(g[0], h[0])
    out = []
    for i in range(n + 1):
        num = scale * h[i] - sum(out[j] * g[i - j] for j in range(i))
        val = num / g[0]
        if val.denominator != 1:
            sys.exit(f"non-integral coefficient at index {i}")
        out.append(int(val))
    out[1] = 0  # constant term of the q^-1 + 0 + O(q) normalization
    print(f"# label={p}A level={p} group=fricke q_min=-1")
    for v in out[:n]:
        print(v)


if __name__ == "__main__":
    main()
