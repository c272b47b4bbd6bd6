"""Frequency coverings and their partitions of unity.

Two families are built here: the smooth ball covering with blocks centred at
<k>^{a} k (a = alpha/(1-alpha)) and radius C <k>^{a}, and the rectangular
shell covering whose boxes have half-side r_j |j|^{a}. Both are evaluated on a
finite tensor-product frequency lattice; symbols are stored as small patches
(bounding box of the support) rather than full arrays.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np
from scipy.optimize import linprog


class CoveringGap(ValueError):
    """Raised when a frequency is not reached by any window."""


# ---------------------------------------------------------------------------
# bumps


def smooth_step(t, inner: float, outer: float):
    """C-infinity profile: 1 for t <= inner, 0 for t >= outer."""
    t = np.asarray(t, dtype=float)
    u = np.clip((t - inner) / (outer - inner), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
        b = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
    return a / (a + b)


def rho(r):
    """Radial bump: 1 on |xi| < 1, 0 on |xi| >= 2."""
    return smooth_step(r, 1.0, 2.0)


# rect windows switch off in the outer eighth: adjacent boxes overlap by less
# than 1/8 half-side, so a wider ramp only flattens the tails being divided
RECT_INNER = 7 / 8


def rect_bump(t):
    """1 on |t| <= 7/8, 0 on |t| >= 1."""
    return smooth_step(np.abs(t), RECT_INNER, 1.0)


# transition band of the dyadic profile; phi = 1 on 3/4 <= |xi| <= 1
DYADIC_INNER, DYADIC_OUTER = 1.0, 1.5


def dyadic_rho(r):
    return smooth_step(r, DYADIC_INNER, DYADIC_OUTER)


def dyadic_phi(j: int, r):
    """Littlewood-Paley symbol of level j at radius r."""
    r = np.asarray(r, dtype=float)
    if j == 0:
        return dyadic_rho(r)
    return dyadic_rho(r / 2.0**j) - dyadic_rho(r / 2.0 ** (j - 1))


# ---------------------------------------------------------------------------
# lattice


@dataclass(frozen=True)
class FrequencyLattice:
    """Tensor lattice spacing * {-N/2, ..., N/2 - 1} in each of dim axes."""

    dim: int
    count: int
    spacing: float

    @property
    def axis(self) -> np.ndarray:
        return (np.arange(self.count) - self.count // 2) * self.spacing

    @property
    def nyquist(self) -> float:
        return self.count // 2 * self.spacing

    @property
    def box(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.full(self.dim, -self.nyquist)
        hi = np.full(self.dim, (self.count // 2 - 1) * self.spacing)
        return lo, hi

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.count,) * self.dim

    def index_range(self, lo: float, hi: float) -> slice:
        """Slice of axis points inside [lo, hi]."""
        h, c = self.spacing, self.count // 2
        i0 = max(math.ceil(lo / h - 1e-9) + c, 0)
        i1 = min(math.floor(hi / h + 1e-9) + c + 1, self.count)
        return slice(i0, max(i0, i1))

    def mesh(self, slices) -> np.ndarray:
        """Frequencies of a sub-box as an array of shape (*patch, dim)."""
        ax = self.axis
        grids = np.meshgrid(*[ax[s] for s in slices], indexing="ij")
        return np.stack(grids, axis=-1)


# ---------------------------------------------------------------------------
# smooth alpha-covering


@dataclass(frozen=True)
class AlphaParams:
    alpha: float
    dim: int = 1
    outer_c: float = 2.0
    inner_c: float = 0.75

    def __post_init__(self):
        if not 0 <= self.alpha < 1:
            raise ValueError("alpha must lie in [0, 1)")
        if self.dim not in (1, 2):
            raise ValueError("only dim 1 and 2 are supported")
        if not (0 < self.inner_c < 1 < self.outer_c):
            raise ValueError("need 0 < inner_c < 1 < outer_c")

    @property
    def expo(self) -> float:
        return self.alpha / (1 - self.alpha)

    def to_json(self) -> dict:
        return {"kind": "smooth", "alpha": self.alpha, "dim": self.dim,
                "outer_c": self.outer_c, "inner_c": self.inner_c}


def _as_index(k, dim: int | None = None) -> tuple[int, ...]:
    if np.ndim(k) == 0:
        k = (int(k),)
    k = tuple(int(v) for v in k)
    if dim is not None and len(k) != dim:
        raise ValueError(f"index {k} does not have dimension {dim}")
    return k


def weight(k) -> float:
    """<k> = (1 + |k|^2)^{1/2}."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return float(np.sqrt(1.0 + np.dot(k, k)))


def block_geometry(k, a: AlphaParams) -> tuple[np.ndarray, float]:
    k = np.asarray(_as_index(k, a.dim), dtype=float)
    scale = weight(k) ** a.expo
    return scale * k, a.outer_c * scale


def _geometry_arrays(ks: np.ndarray, a: AlphaParams):
    w = np.sqrt(1.0 + np.sum(ks.astype(float) ** 2, axis=1))
    scale = w**a.expo
    return scale[:, None] * ks, a.outer_c * scale


def _box_distance(points: np.ndarray, lo, hi) -> np.ndarray:
    d = np.maximum(np.maximum(lo - points, 0.0), points - hi)
    return np.sqrt(np.sum(d * d, axis=-1))


def _index_bound(a: AlphaParams, reach: float) -> int:
    """Every k with |c_k| - R_k <= reach satisfies |k| <= the returned bound."""
    kk = math.floor(a.outer_c) + 1
    while kk**a.expo * (kk - a.outer_c) <= reach:
        kk += 1
    return kk


def active_indices(a: AlphaParams, box) -> list[tuple[int, ...]]:
    """All k whose support ball meets the closed box (lo, hi), sorted."""
    lo, hi = (np.broadcast_to(np.asarray(b, dtype=float), (a.dim,)) for b in box)
    reach = float(np.sqrt(np.sum(np.maximum(np.abs(lo), np.abs(hi)) ** 2)))
    kmax = _index_bound(a, reach)
    rng = np.arange(-kmax, kmax + 1)
    ks = np.array(list(itertools.product(rng, repeat=a.dim)), dtype=np.int64)
    centers, radii = _geometry_arrays(ks, a)
    hit = _box_distance(centers, lo, hi) < radii
    return [tuple(int(v) for v in k) for k in ks[hit]]


def _ball_box(center, radius):
    return center - radius, center + radius


def neighbor_set(k, a: AlphaParams) -> list[tuple[int, ...]]:
    """Indices l whose support ball meets that of k."""
    c, r = block_geometry(k, a)
    cand = active_indices(a, _ball_box(c, r))
    ks = np.array(cand, dtype=np.int64).reshape(len(cand), a.dim)
    cl, rl = _geometry_arrays(ks, a)
    hit = np.linalg.norm(cl - c, axis=1) < rl + r
    return [cand[i] for i in np.flatnonzero(hit)]


def scaled_set(l, lam: float, a: AlphaParams) -> list[tuple[int, ...]]:
    """Indices k whose symbol dilated by lam meets the support of eta_l.

    supp eta_k(lam .) = supp eta_k / lam, so the test is
    |c_k - lam c_l| < R_k + lam R_l.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    c, r = block_geometry(l, a)
    c, r = lam * c, lam * r
    cand = active_indices(a, _ball_box(c, r))
    ks = np.array(cand, dtype=np.int64).reshape(len(cand), a.dim)
    ck, rk = _geometry_arrays(ks, a)
    hit = np.linalg.norm(ck - c, axis=1) < rk + r
    return [cand[i] for i in np.flatnonzero(hit)]


def rho_symbol(a: AlphaParams, k, xi) -> np.ndarray:
    """Un-normalized window rho_k(xi); supported in the block_geometry ball."""
    c, r = block_geometry(k, a)
    dist = np.linalg.norm(_points(xi, a.dim) - c, axis=-1)
    # rho has plateau radius 1 and support radius 2, so rescale by r/2
    return rho(2.0 * dist / r)


def _points(xi, dim: int) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if dim == 1 and (xi.ndim == 0 or xi.shape[-1] != 1):
        xi = xi[..., None]
    return xi


def eta_symbol(fam: "WindowFamily", k, xi) -> np.ndarray:
    """Normalized window eta_k(xi) = rho_k / sum_l rho_l at arbitrary xi."""
    a = fam.params
    pts = _points(xi, a.dim)
    flat = pts.reshape(-1, a.dim)
    lo, hi = flat.min(axis=0), flat.max(axis=0)
    total = np.zeros(len(flat))
    for l in active_indices(a, (lo, hi)):
        total += rho_symbol(a, l, flat)
    if np.any(total <= 0):
        bad = flat[np.argmin(total)]
        raise CoveringGap(f"covering gap at xi={bad.tolist()}")
    out = rho_symbol(a, k, flat) / total
    return out.reshape(pts.shape[:-1])


# ---------------------------------------------------------------------------
# rectangular covering


@dataclass(frozen=True)
class RectCovering:
    alpha: float
    dim: int
    radius_r: float
    j0: int
    small_radii: tuple[float, ...]  # half-sides R_j for j = 0..j0
    shells: tuple[tuple[tuple[float, ...], ...], ...]  # shells[j-1] = centres of shell j

    @property
    def expo(self) -> float:
        return self.alpha / (1 - self.alpha)

    def half_side(self, j: int) -> float:
        j = abs(j)
        if j <= self.j0:
            return self.small_radii[j]
        return self.radius_r * j**self.expo

    def centers(self, j: int) -> tuple[tuple[float, ...], ...]:
        if j == 0:
            return ((0.0,) * self.dim,)
        return self.shells[abs(j) - 1]

    @property
    def num_shells(self) -> int:
        return len(self.shells)

    def boxes(self):
        """Yield (j, m, center, half_side) over every box including the origin."""
        for j in range(self.num_shells + 1):
            h = self.half_side(j)
            for m, c in enumerate(self.centers(j)):
                yield j, m, np.asarray(c), h

    def to_json(self) -> dict:
        return {
            "kind": "rect",
            "alpha": self.alpha,
            "dim": self.dim,
            "r": self.radius_r,
            "j0": self.j0,
            "small_radii": list(self.small_radii),
            "shells": {str(j + 1): [list(c) for c in cs] for j, cs in enumerate(self.shells)},
        }


def rect_radius_bounds(alpha: float) -> tuple[float, float]:
    return 1.0 / (2 * (1 - alpha)), 8.0 / (15 * (1 - alpha))


def _shell_radius(j, alpha):
    return np.asarray(j, dtype=float) ** (1.0 / (1 - alpha))


def _large_j_ok(j: np.ndarray, alpha: float, r: float) -> np.ndarray:
    e = alpha / (1 - alpha)
    c0, c1 = _shell_radius(j, alpha), _shell_radius(j + 1, alpha)
    r0, r1 = r * j**e, r * (j + 1) ** e
    overlap = (c1 - r1) < (c0 + r0)
    sep = ((c1 - r1) > c0 + 7 / 8 * r0) & ((c0 + r0) < c1 - 7 / 8 * r1)
    return overlap & sep


def _small_radii_lp(alpha: float, r: float, j0: int, margin: float):
    """Half-sides R_0..R_{j0} with every adjacent overlap in [m, 1/8 - m] x radius.

    Returns None when infeasible. Overlap below 1/8 of the smaller half-side is
    exactly what keeps the 7/8-shrunk boxes apart.
    """
    e = alpha / (1 - alpha)
    nvar = j0 + 1
    c = _shell_radius(np.arange(j0 + 3), alpha)
    fixed = {j: r * j**e for j in (j0 + 1, j0 + 2)}
    rows, rhs = [], []

    def term(j, coef, row):
        if j < nvar:
            row[j] += coef
            return 0.0
        return coef * fixed[j]

    for j in range(nvar):
        d = c[j + 1] - c[j]
        for own, frac in ((j, margin), (j + 1, margin)):
            # -(R_j + R_{j+1}) + frac * R_own <= -d
            row = np.zeros(nvar)
            const = term(j, -1.0, row) + term(j + 1, -1.0, row) + term(own, frac, row)
            rows.append(row), rhs.append(-d - const)
        for own in (j, j + 1):
            row = np.zeros(nvar)
            const = term(j, 1.0, row) + term(j + 1, 1.0, row) + term(own, -(1 / 8 - margin), row)
            rows.append(row), rhs.append(d - const)
        row = np.zeros(nvar)
        const = term(j, 1.0, row) + term(j + 2, 1.0, row)
        rows.append(row), rhs.append((c[j + 2] - c[j]) * (1 - margin) - const)
    res = linprog(np.ones(nvar), A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(margin, None)] * nvar, method="highs")
    return res.x if res.status == 0 else None


def build_rect_covering(a: AlphaParams, r: float | None = None, extent: float = 4096.0) -> RectCovering:
    """Rectangular alpha-covering of the cube |xi|_inf <= extent.

    Shells j >= 1 sit at sup-radius j^{1/(1-alpha)} with half-side r j^{a}
    beyond j0. Below j0 the half-sides solve a small linear feasibility
    problem whose overlap margin is found by bisection. Each face carries an
    equispaced grid of spacing strictly below two half-sides.
    """
    alpha, n = a.alpha, a.dim
    lo, hi = rect_radius_bounds(alpha)
    if r is None:
        r = 0.5 * (lo + hi)
    if not lo < r < hi:
        raise ValueError(f"r={r} outside the admissible interval ({lo}, {hi})")
    e = alpha / (1 - alpha)

    jmax = 1
    while _shell_radius(jmax, alpha) - r * jmax**e <= extent:
        jmax += 1
    probe = np.arange(1, max(jmax, 64) + 1, dtype=float)
    bad = np.flatnonzero(~_large_j_ok(probe, alpha, r))
    j0 = int(probe[bad[-1]]) if bad.size else 0

    def best_margin(j0):
        if _small_radii_lp(alpha, r, j0, 0.0) is None:
            return 0.0
        lo_m, hi_m = 0.0, 1 / 16
        for _ in range(30):
            mid = 0.5 * (lo_m + hi_m)
            if _small_radii_lp(alpha, r, j0, mid) is None:
                hi_m = mid
            else:
                lo_m = mid
        return lo_m

    # the attainable margin saturates once j0 clears the steep start; take the
    # smallest j0 that reaches the plateau
    margins = [best_margin(j) for j in range(j0, j0 + 16)]
    top = max(margins)
    if top <= 0:
        raise ValueError(f"no small-radius table found for alpha={alpha}, r={r}")
    j0 += next(i for i, m in enumerate(margins) if m >= 0.99 * top)
    radii = _small_radii_lp(alpha, r, j0, 0.9 * top)

    def half(j):
        return float(radii[j]) if j <= j0 else r * j**e

    shells = []
    for j in range(1, jmax + 1):
        rad, h = float(_shell_radius(j, alpha)), half(j)
        if n == 1:
            shells.append(((-rad,), (rad,)))
            continue
        # spacing at most 1.75 half-sides keeps tangential overlaps wide
        m = math.ceil(2 * rad / (1.75 * h))
        grid = np.linspace(-rad, rad, m + 1)
        pts = [
            tuple(float(v) for v in p)
            for p in itertools.product(grid, repeat=n)
            if np.isclose(max(abs(v) for v in p), rad)
        ]
        shells.append(tuple(pts))
    return RectCovering(alpha, n, float(r), j0, tuple(float(x) for x in radii), tuple(shells))


def rect_overlap_counts(cov: RectCovering) -> dict[tuple[int, int], int]:
    """Number of other closed boxes meeting each box, keyed by (j, m)."""
    items = list(cov.boxes())
    cs = np.array([c for _, _, c, _ in items]).reshape(len(items), cov.dim)
    hs = np.array([h for *_, h in items])
    out = {}
    for i, (j, m, c, h) in enumerate(items):
        meet = np.all(np.abs(cs - c) <= hs[:, None] + h + 1e-12, axis=1)
        out[(j, m)] = int(meet.sum()) - 1
    return out


@lru_cache(maxsize=32)
def rect_transition_widths(cov: RectCovering) -> dict[tuple[int, int], float]:
    """Thinnest overlap with any neighbour, capped by the bump ramp width.

    This is the length over which psi falls from 1 to 0, so derivatives of
    psi are measured in units of it.
    """
    items = list(cov.boxes())
    cs = np.array([c for _, _, c, _ in items]).reshape(len(items), cov.dim)
    hs = np.array([h for *_, h in items])
    out = {}
    for i, (j, m, c, h) in enumerate(items):
        lo = np.maximum(cs - hs[:, None], c - h)
        hi = np.minimum(cs + hs[:, None], c + h)
        width = (hi - lo).min(axis=1)
        width[i] = np.inf
        width = width[width > 0]
        ramp = (1 - RECT_INNER) * h
        out[(j, m)] = float(min(width.min(), ramp)) if width.size else ramp
    return out


def rect_half_box_exclusive(cov: RectCovering) -> dict[tuple[int, int], bool]:
    """Whether the half-size box of each box meets no other box."""
    items = list(cov.boxes())
    cs = np.array([c for _, _, c, _ in items]).reshape(len(items), cov.dim)
    hs = np.array([h for *_, h in items])
    out = {}
    for i, (j, m, c, h) in enumerate(items):
        meet = np.all(np.abs(cs - c) < hs[:, None] + h / 2, axis=1)
        meet[i] = False
        out[(j, m)] = not bool(meet.any())
    return out


def psi_symbol(cov: RectCovering, idx, xi) -> np.ndarray:
    """psi_{kj}(xi); idx is (j, m) with m the position on shell j, or 0 for the origin."""
    j, m = (0, 0) if idx == 0 or idx == "origin" else idx
    pts = _points(xi, cov.dim)
    flat = pts.reshape(-1, cov.dim)
    total = np.zeros(len(flat))
    mine = None
    for jj, mm, c, h in cov.boxes():
        val = np.prod(rect_bump((flat - c) / h), axis=1)
        total += val
        if (jj, mm) == (j, m):
            mine = val
    if mine is None:
        raise KeyError(f"no box {idx}")
    if np.any(total <= 0):
        raise CoveringGap(f"covering gap at xi={flat[np.argmin(total)].tolist()}")
    return (mine / total).reshape(pts.shape[:-1])


# ---------------------------------------------------------------------------
# window families and lattice patches


@dataclass(frozen=True)
class Patch:
    """Symbol values of one window on the sub-box `slices` of the lattice."""

    index: Any
    weight_base: float  # the norm weight is weight_base ** s
    slices: tuple[slice, ...]
    values: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class WindowFamily:
    """kind is one of eta_smooth, rho_bump, psi_rect, dyadic.

    params is AlphaParams for the smooth kinds, RectCovering for psi_rect and
    the dimension (int) for dyadic.
    """

    kind: str
    params: Any

    def __post_init__(self):
        if self.kind not in ("eta_smooth", "rho_bump", "psi_rect", "dyadic"):
            raise ValueError(f"unknown window kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return self.params if self.kind == "dyadic" else self.params.dim

    @property
    def alpha(self) -> float:
        return 1.0 if self.kind == "dyadic" else self.params.alpha

    def symbol(self, index, xi) -> np.ndarray:
        if self.kind == "eta_smooth":
            return eta_symbol(self, index, xi)
        if self.kind == "rho_bump":
            return rho_symbol(self.params, index, _points(xi, self.dim))
        if self.kind == "psi_rect":
            return psi_symbol(self.params, index, xi)
        pts = _points(xi, self.dim)
        return dyadic_phi(int(index), np.linalg.norm(pts, axis=-1))

    def patches(self, lattice: FrequencyLattice) -> tuple[Patch, ...]:
        return _patches(self, lattice)


def smooth_family(a: AlphaParams) -> WindowFamily:
    return WindowFamily("eta_smooth", a)


def rho_family(a: AlphaParams) -> WindowFamily:
    return WindowFamily("rho_bump", a)


def rect_family(cov: RectCovering) -> WindowFamily:
    return WindowFamily("psi_rect", cov)


def dyadic_family(dim: int) -> WindowFamily:
    return WindowFamily("dyadic", dim)


def _ball_patch(lat: FrequencyLattice, center, radius):
    slices = tuple(lat.index_range(c - radius, c + radius) for c in center)
    if any(s.stop <= s.start for s in slices):
        return None, None
    pts = lat.mesh(slices)
    return slices, np.linalg.norm(pts - center, axis=-1)


def _raw_smooth(a: AlphaParams, lat: FrequencyLattice):
    out = []
    for k in active_indices(a, lat.box):
        c, r = block_geometry(k, a)
        slices, dist = _ball_patch(lat, c, r)
        if slices is None:
            continue
        vals = rho(2.0 * dist / r)
        if vals.any():
            out.append((k, weight(k) ** (1 / (1 - a.alpha)), slices, vals))
    return out


def _raw_rect(cov: RectCovering, lat: FrequencyLattice):
    lo, hi = lat.box
    out = []
    for j, m, c, h in cov.boxes():
        if np.any(c + h < lo) or np.any(c - h > hi):
            continue
        slices = tuple(lat.index_range(ci - h, ci + h) for ci in c)
        if any(s.stop <= s.start for s in slices):
            continue
        pts = lat.mesh(slices)
        vals = np.prod(rect_bump((pts - c) / h), axis=-1)
        if vals.any():
            out.append(((j, m), weight(j) ** (1 / (1 - cov.alpha)), slices, vals))
    return out


def _raw_dyadic(dim: int, lat: FrequencyLattice):
    out = []
    reach = lat.nyquist * math.sqrt(dim)
    j = 0
    while j == 0 or 2.0 ** (j - 1) * DYADIC_INNER < reach:
        rad = DYADIC_OUTER * 2.0**j
        slices, dist = _ball_patch(lat, np.zeros(dim), rad)
        vals = dyadic_phi(j, dist)
        if vals.any():
            out.append((j, 2.0**j, slices, vals))
        j += 1
    return out


def _accumulate(raw, shape):
    total = np.zeros(shape)
    for _, _, slices, vals in raw:
        total[slices] += vals
    return total


@lru_cache(maxsize=64)
def _patches(fam: WindowFamily, lat: FrequencyLattice) -> tuple[Patch, ...]:
    if lat.dim != fam.dim:
        raise ValueError("lattice and window family dimensions differ")
    if fam.kind in ("eta_smooth", "rho_bump"):
        raw = _raw_smooth(fam.params, lat)
    elif fam.kind == "psi_rect":
        raw = _raw_rect(fam.params, lat)
    else:
        raw = _raw_dyadic(fam.dim, lat)
    if fam.kind in ("eta_smooth", "psi_rect"):
        total = _accumulate(raw, lat.shape)
        if np.any(total <= 0):
            bad = np.unravel_index(np.argmin(total), total.shape)
            xi = [float(lat.axis[i]) for i in bad]
            raise CoveringGap(f"covering gap at xi={xi}")
        raw = [(k, w, s, v / total[s]) for k, w, s, v in raw]
    out = []
    for k, w, s, v in raw:
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        out.append(Patch(k, float(w), s, v))
    return tuple(out)


# ---------------------------------------------------------------------------
# validation


# sup <k>^{a|delta|} |D^delta eta_k| may not exceed this multiple of sup |eta_k| = 1
DERIVATIVE_TOL = 64.0


@dataclass
class ValidationReport:
    kind: str
    checks: dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def add(self, name, passed, value, worst=None, **extra):
        self.checks[name] = {"passed": bool(passed), "value": value, "worst": worst, **extra}

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "passed": self.passed, "checks": self.checks}, indent=2, sort_keys=True)


def _jsonable_index(idx):
    if isinstance(idx, tuple):
        return [_jsonable_index(v) for v in idx]
    return idx.item() if hasattr(idx, "item") else idx


def _finite_differences(vals: np.ndarray, h: float):
    """Centred differences of order 1 and 2 along every axis.

    Stencils leaving the patch come out NaN: the patch edge is either the
    support edge (values already ~0) or the lattice edge (no data).
    """
    v = np.pad(vals, 1, constant_values=np.nan)
    nd = vals.ndim

    def shifted(offsets):
        return v[tuple(slice(1 + o, v.shape[i] - 1 + o) for i, o in enumerate(offsets))]

    d1, d2 = [], []
    for ax in range(nd):
        e = [0] * nd
        e[ax] = 1
        fwd, bwd = shifted(e), shifted([-t for t in e])
        d1.append((fwd - bwd) / (2 * h))
        d2.append((fwd - 2 * vals + bwd) / h**2)
    if nd == 2:
        mixed = shifted((1, 1)) - shifted((1, -1)) - shifted((-1, 1)) + shifted((-1, -1))
        d2.append(mixed / (4 * h * h))
    return d1, d2


def _nanmax_abs(d: np.ndarray) -> float:
    d = np.abs(d)
    return float(np.nanmax(d)) if np.isfinite(d).any() else 0.0


def validate_bapu(fam: WindowFamily, lattice: FrequencyLattice) -> ValidationReport:
    """Certify the window family on the lattice; never raises."""
    rep = ValidationReport(fam.kind)
    try:
        patches = fam.patches(lattice)
    except CoveringGap as exc:
        rep.add("covering", False, None, worst=str(exc), message="covering gap")
        return rep
    rep.add("covering", True, len(patches))

    count = np.zeros(lattice.shape, dtype=np.int64)
    total = np.zeros(lattice.shape)
    for p in patches:
        total[p.slices] += p.values
        count[p.slices] += p.values > 0
    overlap = int(count.max())

    if fam.kind != "rho_bump":
        err = np.abs(total - 1.0)
        i = np.unravel_index(np.argmax(err), err.shape)
        worst = [float(lattice.axis[t]) for t in i]
        rep.add("partition_of_unity", err.max() < 1e-9, float(err.max()), worst=worst)

    sup_err, sup_worst = 0.0, None
    low, low_worst = np.inf, None
    deriv = {1: 0.0, 2: 0.0}
    deriv_worst = {1: None, 2: None}
    for p in patches:
        pts = lattice.mesh(p.slices)
        outside, inside, scale = _window_frame(fam, p.index, pts)
        if outside.any():
            e = float(np.abs(p.values[outside]).max())
            if e > sup_err:
                sup_err, sup_worst = e, _jsonable_index(p.index)
        if inside.any():
            m = float(p.values[inside].min())
            if m < low:
                low, low_worst = m, _jsonable_index(p.index)
        # finitely many rect boxes below j0 only move the constant, and their
        # neighbours differ wildly in size; (1.1d) is about the shells beyond
        if fam.kind == "psi_rect" and p.index[0] <= fam.params.j0:
            continue
        d1, d2 = _finite_differences(p.values, lattice.spacing)
        for order, ds in ((1, d1), (2, d2)):
            m = max(_nanmax_abs(d) for d in ds) * scale**order
            if m > deriv[order]:
                deriv[order], deriv_worst[order] = m, _jsonable_index(p.index)

    rep.add("support", sup_err == 0.0, sup_err, worst=sup_worst)
    # any point of a plateau sees at most `overlap` windows, each <= 1
    bound = 1.0 / max(overlap, 1)
    rep.add("lower_bound", low >= bound - 1e-12, None if low == np.inf else low, worst=low_worst, bound=bound)
    for order in (1, 2):
        rep.add(
            f"derivative_order_{order}", deriv[order] <= DERIVATIVE_TOL, deriv[order],
            worst=deriv_worst[order], tolerance=DERIVATIVE_TOL,
        )
    return rep


def _window_frame(fam: WindowFamily, index, pts):
    """Masks (outside support, inner region) and the derivative scale of one window."""
    if fam.kind in ("eta_smooth", "rho_bump"):
        a = fam.params
        c, r = block_geometry(index, a)
        dist = np.linalg.norm(pts - c, axis=-1)
        return dist >= r, dist < a.inner_c * r / a.outer_c, weight(index) ** a.expo
    if fam.kind == "psi_rect":
        cov = fam.params
        j, m = index
        h = cov.half_side(j)
        dist = np.max(np.abs(pts - np.asarray(cov.centers(j)[m])), axis=-1)
        return dist >= h, dist <= h / 2, rect_transition_widths(cov)[(j, m)]
    j = int(index)
    dist = np.linalg.norm(pts, axis=-1)
    top = DYADIC_OUTER * 2.0**j
    # derivatives in units of the ramp width, as for psi_rect
    ramp = (DYADIC_OUTER - DYADIC_INNER) * 2.0 ** max(j - 1, 0)
    if j == 0:
        return dist >= top, dist <= DYADIC_INNER, ramp
    bottom = DYADIC_INNER * 2.0 ** (j - 1)
    plateau = (dist >= DYADIC_OUTER * 2.0 ** (j - 1)) & (dist <= DYADIC_INNER * 2.0**j)
    return (dist >= top) | (dist <= bottom), plateau, ramp


# outer_c candidates, in units of sqrt(dim)
OUTER_C_LADDER = (2.0, 3.0, 4.0, 6.0, 8.0)


def default_lattice(dim: int) -> FrequencyLattice:
    """Frequency lattice of the default grid (n=1: L=64 pi, N=2^14; n=2: L=16 pi, N=2^9)."""
    if dim == 1:
        return FrequencyLattice(1, 2**14, 1.0 / 64)
    if dim == 2:
        return FrequencyLattice(2, 2**9, 1.0 / 16)
    raise ValueError("only dim 1 and 2 are supported")


@lru_cache(maxsize=None)
def certified_params(alpha: float, dim: int = 1, inner_c: float = 0.75) -> AlphaParams:
    """Smallest outer_c on the ladder whose smooth family validates on the default lattice."""
    lat = default_lattice(dim)
    for c in OUTER_C_LADDER:
        a = AlphaParams(alpha, dim, c * math.sqrt(dim), inner_c)
        if validate_bapu(smooth_family(a), lat).passed:
            return a
    raise RuntimeError(f"no outer_c on the ladder certifies alpha={alpha}, dim={dim}")
