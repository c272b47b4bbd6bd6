"""Exact rational oracle for the index formulas; writes tests/exponent_vectors.json.

Written against the closed forms in the original variables (p, q, r
as exponents, infinity as None) rather than the package's reciprocal
coordinates, so the two implementations share no code path.

    python3 tests/oracles/exponent_oracle.py
"""
from __future__ import annotations

import json
from fractions import Fraction as F
from pathlib import Path

INF = None


def recip(p):
    return F(0) if p is INF else 1 / F(p)


def wedge1(p):
    """1 ∧ p with infinity allowed."""
    return F(1) if p is INF or p >= 1 else F(p)


def vee1(p):
    return p if p is INF or p >= 1 else F(1)


def big_r(p, q, a1, a2, n):
    c = n * (F(a1) - F(a2))
    branches = [F(0), c * (recip(q) - recip(p)), c * (recip(p) + recip(q) - 1)]
    return max(branches)


def s_c(p, q, alpha, up, n):
    return big_r(p, q, 1, alpha, n) if up else -big_r(p, q, alpha, 1, n)


def s_p(p, n):
    return n * (1 / wedge1(p) - 1)


def in_d1(p, q):
    return recip(q) >= 2 * recip(p) and recip(p) <= F(1, 2)


def s0(p, q, alpha, n):
    a = F(alpha)
    mix = n * a * (1 - a) / (2 - a)
    x, y = recip(p), recip(q)
    if in_d1(p, q):
        return n * a * x + n * (1 - a) * (1 - min(F(1), y)) + mix * (y - 2 * x)
    m = max(F(1), x, y)
    return n * a * x + n * (1 - a) * (m - y) + mix * (m - 1)


def conj(p):
    """Hölder conjugate of p in [1, inf]."""
    if p is INF:
        return F(1)
    p = F(p)
    return INF if p == 1 else p / (p - 1)


def dual(s, p, q, alpha, n):
    s_star = -F(s) + n * F(alpha) * (1 / wedge1(p) - 1)
    return s_star, conj(vee1(p)), conj(vee1(q))


def interp(theta, A, B):
    t = F(theta)
    s = (1 - t) * F(A[0]) + t * F(B[0])
    x = (1 - t) * recip(A[1]) + t * recip(B[1])
    y = (1 - t) * recip(A[2]) + t * recip(B[2])
    back = lambda v: INF if v == 0 else 1 / v
    return s, back(x), back(y)


def sigma(r, n):
    return n * (1 / wedge1(r) - F(1, 2))


def enc(v):
    return "inf" if v is INF else str(F(v))


POINTS = [  # (p, q) including infinity and p, q < 1
    (2, 2), (1, 1), (INF, INF), (INF, 1), (1, INF), (4, F(4, 3)), (F(4, 3), 4), (F(1, 2), 2),
    (2, F(1, 2)), (3, 1), (F(2, 3), F(2, 3)), (INF, 2), (F(1, 3), 1), (5, F(5, 2)),
]
ALPHA_PAIRS = [(1, F(1, 2)), (F(1, 2), 1), (F(1, 2), 0), (0, F(1, 2)), (F(3, 10), F(7, 10)), (1, 0), (0, 1)]


def build() -> dict:
    out = {"big_r": [], "s_c": [], "s_p": [], "s0": [], "dual": [], "interp": [], "sigma": []}
    for i, (p, q) in enumerate(POINTS):
        for a1, a2 in ALPHA_PAIRS[i % 3: i % 3 + 3]:
            n = 1 + (i % 2)
            out["big_r"].append([enc(p), enc(q), enc(a1), enc(a2), n, enc(big_r(p, q, a1, a2, n))])
        for alpha in (0, F(1, 2), F(7, 10)):
            out["s0"].append([enc(p), enc(q), enc(alpha), 1, enc(s0(p, q, alpha, 1))])
        alpha = [F(0), F(3, 10), F(1, 2), F(7, 10)][i % 4]
        for up in (True, False):
            out["s_c"].append([enc(p), enc(q), enc(alpha), up, 1, enc(s_c(p, q, alpha, up, 1))])
    out["s0"].append(["2", "1/2", "1/2", 2, enc(s0(2, F(1, 2), F(1, 2), 2))])
    for p in (INF, 4, 2, 1, F(3, 4), F(1, 2), F(1, 3)):
        for n in (1, 2):
            out["s_p"].append([enc(p), n, enc(s_p(p, n))])
            out["sigma"].append([enc(p), n, enc(sigma(p, n))])
    for s, p, q, alpha in [(0, 2, 2, F(1, 2)), (1, F(4, 3), 4, F(1, 2)), (0, F(1, 2), 2, F(1, 2)),
                           (F(3, 2), 3, F(3, 2), F(3, 10)), (-1, F(1, 3), F(1, 2), F(7, 10)), (2, 1, 1, 0)]:
        out["dual"].append([enc(s), enc(p), enc(q), enc(alpha), 1, *map(enc, dual(s, p, q, alpha, 1))])
    for theta, A, B in [(F(1, 2), (0, 1, 1), (2, INF, INF)), (F(1, 3), (1, 2, 4), (-2, F(1, 2), 1)),
                        (F(3, 4), (0, 4, INF), (1, F(4, 3), 2)), (F(1, 2), (1, 2, 2), (1, 2, 2))]:
        out["interp"].append([enc(theta), list(map(enc, A)), list(map(enc, B)), list(map(enc, interp(theta, A, B)))])
    return out


if __name__ == "__main__":
    data = build()
    path = Path(__file__).resolve().parents[1] / "exponent_vectors.json"
    path.write_text(json.dumps(data, indent=1) + "\n")
    print(path, sum(len(v) for v in data.values()), "vectors")
