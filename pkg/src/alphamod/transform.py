"""Sampled periodic fields, frequency blocks and (quasi-)norms.

A field lives on the torus [-L, L)^n sampled at N points per axis,
x_j = -L + j * 2L/N. Its spectrum is the plain DFT stored in centred order,
so index i on an axis is the frequency (i - N/2) * pi / L. Window symbols are
real and act pointwise on that array; the phase relating the DFT to the
continuous transform is irrelevant to them.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np
import scipy.fft as sfft

from . import covering as cv
from .exponents import SpaceParams


class AliasingError(ValueError):
    """A dilated spectrum (or spatial profile) would leave the grid."""


class UnresolvableError(ValueError):
    """A family needs frequencies beyond Nyquist or finer than one lattice cell."""


# ---------------------------------------------------------------------------
# grid and fields


@dataclass(frozen=True)
class GridSpec:
    dim: int = 1
    half_period: float = 64 * math.pi
    samples_per_axis: int = 2**14

    def __post_init__(self):
        n = self.samples_per_axis
        if self.dim not in (1, 2):
            raise ValueError("only dim 1 and 2 are supported")
        if n < 16 or n & (n - 1):
            raise ValueError("samples_per_axis must be a power of two >= 16")
        if not self.half_period > 0:
            raise ValueError("half_period must be positive")

    @classmethod
    def default(cls, dim: int = 1) -> "GridSpec":
        if dim == 1:
            return cls(1, 64 * math.pi, 2**14)
        if dim == 2:
            return cls(2, 16 * math.pi, 2**9)
        raise ValueError("only dim 1 and 2 are supported")

    @classmethod
    def for_band(cls, dim: int, max_freq: float, min_width: float) -> "GridSpec":
        """Smallest grid with >= 4 cells across min_width and max_freq <= Nyquist / 4."""
        spacing = 2.0 ** math.floor(math.log2(min_width / 4))
        n = 2 ** max(4, math.ceil(math.log2(2 * 4 * max_freq / spacing)))
        return cls(dim, math.pi / spacing, n)

    @property
    def dx(self) -> float:
        return 2 * self.half_period / self.samples_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.samples_per_axis,) * self.dim

    @property
    def lattice(self) -> cv.FrequencyLattice:
        return cv.FrequencyLattice(self.dim, self.samples_per_axis, math.pi / self.half_period)

    @property
    def nyquist(self) -> float:
        return self.lattice.nyquist

    @property
    def positions(self) -> np.ndarray:
        return -self.half_period + np.arange(self.samples_per_axis) * self.dx

    def to_json(self) -> dict:
        return {"dim": self.dim, "half_period": self.half_period, "samples_per_axis": self.samples_per_axis}


@lru_cache(maxsize=8)
def _checkerboard(grid: GridSpec) -> np.ndarray:
    """(-1)^(i_1 + ... + i_n): the DFT/continuous-transform phase on the lattice."""
    s = 1.0 - 2.0 * (np.arange(grid.samples_per_axis) % 2)
    out = s
    for _ in range(grid.dim - 1):
        out = np.multiply.outer(out, s)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SampledField:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise ValueError(f"values have shape {v.shape}, grid needs {self.grid.shape}")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @cached_property
    def spectrum(self) -> np.ndarray:
        s = sfft.fftshift(sfft.fftn(self.values))
        s.setflags(write=False)
        return s

    @classmethod
    def from_spectrum(cls, grid: GridSpec, spectrum: np.ndarray) -> "SampledField":
        f = cls(grid, sfft.ifftn(sfft.ifftshift(spectrum)))
        s = np.array(spectrum, dtype=complex)
        s.setflags(write=False)
        f.__dict__["spectrum"] = s
        return f

    @classmethod
    def from_transform(cls, grid: GridSpec, fhat: np.ndarray) -> "SampledField":
        """Field whose continuous Fourier transform, sampled on the lattice, is fhat.

        f(x) = (2 pi)^-n int fhat(xi) e^{i x.xi} d xi, truncated to the lattice.
        """
        scale = (grid.samples_per_axis / (2 * grid.half_period)) ** grid.dim
        return cls.from_spectrum(grid, scale * np.asarray(fhat) * _checkerboard(grid))

    def transform(self) -> np.ndarray:
        """Lattice samples of the continuous Fourier transform (inverse of from_transform)."""
        scale = (2 * self.grid.half_period / self.grid.samples_per_axis) ** self.grid.dim
        return scale * self.spectrum * _checkerboard(self.grid)

    def __mul__(self, other: "SampledField") -> "SampledField":
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return SampledField(self.grid, self.values * other.values)

    def __add__(self, other: "SampledField") -> "SampledField":
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return SampledField(self.grid, self.values + other.values)

    def scaled(self, c: complex) -> "SampledField":
        return SampledField(self.grid, c * self.values)


def zero_field(grid: GridSpec) -> SampledField:
    return SampledField(grid, np.zeros(grid.shape, dtype=complex))


def relative_l2_error(a: SampledField, b: SampledField) -> float:
    den = np.linalg.norm(b.values)
    num = np.linalg.norm(a.values - b.values)
    return float(num / den) if den > 0 else float(num)


# ---------------------------------------------------------------------------
# Lebesgue (quasi-)norms


def _lp_from_abs(absvals: np.ndarray, p: float, cell: float, axes=None) -> np.ndarray:
    if math.isinf(p):
        return np.max(absvals, axis=axes)
    # quasi-norm for p < 1 is the same quadrature, no convexification
    return (cell * np.sum(absvals**p, axis=axes)) ** (1.0 / p)


def lp_norm(f: SampledField, p: float) -> float:
    """Riemann-sum L^p quasi-norm over the period cell; p = inf is the sample max."""
    if not p > 0:
        raise ValueError("p must be positive")
    cell = f.grid.dx**f.grid.dim
    return float(_lp_from_abs(np.abs(f.values), p, cell))


# ---------------------------------------------------------------------------
# block decompositions


@dataclass(frozen=True, eq=False)
class BlockEntry:
    index: object
    weight_base: float
    slices: tuple
    spectrum: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Nonzero blocks of one field, kept as spectral patches.

    Blocks whose patch product vanishes are dropped: they are exact zeros.
    """

    source: SampledField
    family: cv.WindowFamily
    entries: tuple[BlockEntry, ...]

    def __len__(self):
        return len(self.entries)

    @property
    def indices(self) -> list:
        return [e.index for e in self.entries]

    @property
    def weight_bases(self) -> np.ndarray:
        return np.array([e.weight_base for e in self.entries], dtype=float)

    def field(self, index) -> SampledField:
        for e in self.entries:
            if e.index == index:
                return _materialize(self.source.grid, e)
        return zero_field(self.source.grid)

    def synthesize(self) -> SampledField:
        """Sum of all blocks (linearity lets the sum run on the spectral side)."""
        total = np.zeros(self.source.grid.shape, dtype=complex)
        for e in self.entries:
            total[e.slices] += e.spectrum
        return SampledField.from_spectrum(self.source.grid, total)

    def lp_norms(self, ps: Iterable[float]) -> dict[float, np.ndarray]:
        """L^p norm of every block, for several p at once."""
        ps = tuple(ps)
        grid = self.source.grid
        cell = grid.dx**grid.dim
        out = {p: np.zeros(len(self.entries)) for p in ps}
        if not self.entries:
            return out
        need_space = [p for p in ps if p != 2]
        if 2 in ps:
            # discrete Parseval is an identity, not an approximation
            sq = np.array([np.sum(np.abs(e.spectrum) ** 2) for e in self.entries])
            out[2] = np.sqrt(cell * sq / grid.samples_per_axis**grid.dim)
        if not need_space:
            return out
        size = grid.samples_per_axis**grid.dim
        batch = max(1, 2**22 // size)
        axes = tuple(range(1, grid.dim + 1))
        for start in range(0, len(self.entries), batch):
            chunk = self.entries[start:start + batch]
            buf = np.zeros((len(chunk),) + grid.shape, dtype=complex)
            for b, e in enumerate(chunk):
                buf[(b,) + e.slices] = e.spectrum
            vals = np.abs(sfft.ifftn(sfft.ifftshift(buf, axes=axes), axes=axes, workers=-1))
            for p in need_space:
                out[p][start:start + len(chunk)] = _lp_from_abs(vals, p, cell, axes=axes)
        return out


def _materialize(grid: GridSpec, e: BlockEntry) -> SampledField:
    spec = np.zeros(grid.shape, dtype=complex)
    spec[e.slices] = e.spectrum
    return SampledField.from_spectrum(grid, spec)


def decompose(f: SampledField, fam: cv.WindowFamily) -> BlockDecomposition:
    if fam.dim != f.grid.dim:
        raise ValueError("family and field dimensions differ")
    entries = []
    spec = f.spectrum
    for p in fam.patches(f.grid.lattice):
        prod = p.values * spec[p.slices]
        if np.any(prod):
            entries.append(BlockEntry(p.index, p.weight_base, p.slices, prod))
    return BlockDecomposition(f, fam, tuple(entries))


def block(f: SampledField, k, fam: cv.WindowFamily) -> SampledField:
    """Box_k f: multiply the spectrum by the k-th window."""
    if fam.kind in ("eta_smooth", "rho_bump"):
        k = cv._as_index(k, fam.dim)
    for p in fam.patches(f.grid.lattice):
        if p.index == k:
            spec = np.zeros(f.grid.shape, dtype=complex)
            spec[p.slices] = p.values * f.spectrum[p.slices]
            return SampledField.from_spectrum(f.grid, spec)
    return zero_field(f.grid)


def dyadic_block(f: SampledField, j: int) -> SampledField:
    return block(f, int(j), cv.dyadic_family(f.grid.dim))


def combine_blocks(weights: np.ndarray, norms: np.ndarray, s: float, q: float) -> float:
    """(sum (w^s ||block||_p)^q)^{1/q}; q = inf is the sup."""
    terms = weights**s * norms
    if terms.size == 0:
        return 0.0
    if math.isinf(q):
        return float(terms.max())
    return float(np.sum(terms**q) ** (1.0 / q))


def decomposition_norm(dec: BlockDecomposition, s: float, p: float, q: float) -> float:
    return combine_blocks(dec.weight_bases, dec.lp_norms((p,))[p], s, q)


# ---------------------------------------------------------------------------
# space norms


def default_family(alpha: float, dim: int) -> cv.WindowFamily:
    return cv.smooth_family(cv.certified_params(alpha, dim))


def circ_family(alpha: float, dim: int) -> cv.WindowFamily:
    return cv.rho_family(cv.certified_params(alpha, dim))


@lru_cache(maxsize=16)
def default_rect_covering(alpha: float, grid: GridSpec) -> cv.RectCovering:
    return cv.build_rect_covering(cv.AlphaParams(alpha, grid.dim), extent=grid.nyquist)


def alpha_mod_norm(f: SampledField, sp: SpaceParams, fam: cv.WindowFamily | None = None) -> float:
    """alpha-modulation (quasi-)norm; alpha = 1 falls through to the Besov norm."""
    if sp.besov:
        return besov_norm(f, sp.s, sp.p, sp.q)
    fam = fam or default_family(sp.alpha, f.grid.dim)
    if fam.alpha != sp.alpha:
        raise ValueError(f"family alpha {fam.alpha} does not match space alpha {sp.alpha}")
    return decomposition_norm(decompose(f, fam), sp.s, sp.p, sp.q)


def besov_norm(f: SampledField, s: float, p: float, q: float) -> float:
    return decomposition_norm(decompose(f, cv.dyadic_family(f.grid.dim)), s, p, q)


def circ_norm(f: SampledField, sp: SpaceParams) -> float:
    """Same sum with the un-normalised radial bumps as windows."""
    return decomposition_norm(decompose(f, circ_family(sp.alpha, f.grid.dim)), sp.s, sp.p, sp.q)


def rect_norm(f: SampledField, sp: SpaceParams, cov: cv.RectCovering | None = None) -> float:
    """Shell-weighted norm over the rectangular covering (weight <j>^{s/(1-alpha)})."""
    cov = cov or default_rect_covering(sp.alpha, f.grid)
    return decomposition_norm(decompose(f, cv.rect_family(cov)), sp.s, sp.p, sp.q)


def space_norm(f: SampledField, sp: SpaceParams, covering: str = "smooth") -> float:
    if sp.besov:
        return besov_norm(f, sp.s, sp.p, sp.q)
    if covering == "smooth":
        return alpha_mod_norm(f, sp)
    if covering == "circ":
        return circ_norm(f, sp)
    if covering == "rect":
        return rect_norm(f, sp)
    raise ValueError(f"unknown covering {covering!r}")


# ---------------------------------------------------------------------------
# dilation


def _support_radius(weights: np.ndarray, coords: list[np.ndarray], tol: float) -> float:
    """Largest |coordinate| (sup over axes) where weights exceed tol * max."""
    m = weights.max()
    if m == 0:
        return 0.0
    mask = weights > tol * m
    r = 0.0
    for ax, c in enumerate(coords):
        hit = np.any(mask, axis=tuple(i for i in range(mask.ndim) if i != ax))
        r = max(r, float(np.abs(c[hit]).max()))
    return r


def dilate(f: SampledField, lam: float, tol: float = 1e-10) -> SampledField:
    """f(lam x) realised spectrally: fhat -> lam^{-n} fhat(. / lam).

    lam = 2^-m samples the transform on a sublattice (exact); lam = 2^m refines
    it by zero padding in space (exact for fields supported in the cell);
    other lam use band-limited (trigonometric) resampling of the transform.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    g = f.grid
    if lam == 1:
        return f
    ax = g.lattice.axis
    fhat = f.transform()
    spec_r = _support_radius(np.abs(fhat), [ax] * g.dim, tol)
    if lam * spec_r >= g.nyquist:
        raise AliasingError(f"dilated spectrum reaches {lam * spec_r:.4g} >= Nyquist {g.nyquist:.4g}")
    space_r = _support_radius(np.abs(f.values), [g.positions] * g.dim, tol)
    if space_r / lam >= g.half_period:
        raise AliasingError(f"dilated profile reaches {space_r / lam:.4g} >= half period {g.half_period:.4g}")

    m = math.log2(lam)
    N = g.samples_per_axis
    if m == round(m) and m < 0:
        step = 2 ** int(-m)
        # new(xi_i) = lam^-n fhat(step * xi_i): every index i - N/2 maps to step * (i - N/2)
        idx = (np.arange(N) - N // 2) * step + N // 2
        ok = (idx >= 0) & (idx < N)
        new = np.zeros(g.shape, dtype=complex)
        src = fhat
        sel = tuple(np.ix_(*[np.flatnonzero(ok)] * g.dim))
        take = tuple(np.ix_(*[idx[ok]] * g.dim))
        new[sel] = src[take]
        return SampledField.from_transform(g, lam ** (-g.dim) * new)
    new = _resample_transform(f, 1.0 / lam)
    return SampledField.from_transform(g, lam ** (-g.dim) * new)


def _dtft_matrix(freqs: np.ndarray, positions: np.ndarray, dx: float) -> np.ndarray:
    return dx * np.exp(-1j * np.outer(freqs, positions))


def _resample_transform(f: SampledField, factor: float) -> np.ndarray:
    """fhat(factor * xi_i) on the lattice, from the samples (trigonometric resampling)."""
    g = f.grid
    N = g.samples_per_axis
    freqs = g.lattice.axis * factor
    inside = np.abs(freqs) < g.nyquist
    m = math.log2(1 / factor) if factor > 0 else 0
    if m == round(m) and m > 0 and N * 2 ** int(m) <= 2**22 and g.dim == 1:
        # zero padding the cell to [-up L, up L) refines the transform exactly
        # for cell-supported f; the padded origin -up L contributes (-1)^k
        up = 2 ** int(m)
        pad = np.zeros(N * up, dtype=complex)
        off = (up - 1) * N // 2
        pad[off:off + N] = f.values
        fine = sfft.fftshift(sfft.fft(pad)) * g.dx
        kk = np.arange(N * up) - N * up // 2
        fine *= 1.0 - 2.0 * (kk % 2)
        idx = (np.arange(N) - N // 2) + N * up // 2
        return np.where(inside, fine[idx], 0.0)
    # separable direct evaluation, chunked over output frequencies
    pos = g.positions
    vals = f.values
    out = vals
    for axis in range(g.dim):
        moved = np.moveaxis(out, axis, -1)
        res = np.zeros(moved.shape[:-1] + (N,), dtype=complex)
        for start in range(0, N, 512):
            sl = slice(start, start + 512)
            mat = _dtft_matrix(freqs[sl], pos, g.dx)
            res[..., sl] = moved @ mat.T
        res[..., ~inside] = 0.0
        out = np.moveaxis(res, -1, axis)
    return out


# ---------------------------------------------------------------------------
# families built from analytic spectral pieces


@dataclass(frozen=True)
class Piece:
    """amp * profile((xi - center) / width) * e^{-i xi.shift}.

    profile is "rho" (radial, 1 on r < 1, 0 on r >= 2), "gaussian",
    "annulus" (the dyadic symbol of level `level`, centred at 0) or "box"
    (indicator of the sup-ball of radius width, snapped to the lattice).
    """

    profile: str
    center: tuple
    width: float
    shift: tuple
    amp: float = 1.0
    level: int = 0

    def dilated(self, lam: float, dim: int) -> "Piece":
        # f(lam x) has transform lam^-n fhat(xi / lam)
        return Piece(
            self.profile,
            tuple(lam * c for c in self.center),
            lam * self.width,
            tuple(t / lam for t in self.shift),
            self.amp * lam ** (-dim),
            self.level,
        )

    def reach(self) -> float:
        """Sup-norm radius of the spectral support around the centre."""
        if self.profile == "rho":
            return 2 * self.width
        if self.profile == "gaussian":
            # exp(-r^2 / 2) < 1e-16 beyond 8.6 widths
            return 8.6 * self.width
        if self.profile == "annulus":
            return cv.DYADIC_OUTER * 2.0**self.level * self.width
        return self.width

    def feature(self) -> float:
        """Smallest spectral length scale the lattice must resolve."""
        if self.profile == "annulus":
            return (cv.DYADIC_OUTER - cv.DYADIC_INNER) * 2.0 ** max(self.level - 1, 0) * self.width
        return 2 * self.width


def _render(pieces: list[Piece], grid: GridSpec) -> SampledField:
    lat = grid.lattice
    h = lat.spacing
    fhat = np.zeros(grid.shape, dtype=complex)
    for pc in pieces:
        c = np.asarray(pc.center, dtype=float)
        reach = pc.reach()
        if np.any(np.abs(c) + reach >= grid.nyquist):
            raise UnresolvableError(
                f"piece at {pc.center} with reach {reach:.4g} crosses Nyquist {grid.nyquist:.4g}")
        if pc.feature() < h:
            raise UnresolvableError(f"piece width {pc.feature():.4g} is below one lattice cell {h:.4g}")
        if pc.profile == "box":
            # snap centre and half-side to the lattice so box-box convolutions are exact tents
            ci = np.round(c / h)
            m = round(pc.width / h)
            slices = tuple(slice(int(v) - m + lat.count // 2, int(v) + m + 1 + lat.count // 2) for v in ci)
            vals = np.ones(tuple(2 * m + 1 for _ in ci))
            pts = lat.mesh(slices)
        else:
            slices = tuple(lat.index_range(v - reach, v + reach) for v in c)
            pts = lat.mesh(slices)
            r = np.linalg.norm(pts - c, axis=-1)
            if pc.profile == "rho":
                vals = cv.rho(r / pc.width)
            elif pc.profile == "gaussian":
                vals = np.exp(-0.5 * (r / pc.width) ** 2)
            elif pc.profile == "annulus":
                vals = cv.dyadic_phi(pc.level, r / pc.width)
            else:
                raise ValueError(f"unknown profile {pc.profile!r}")
        phase = np.exp(-1j * (pts @ np.asarray(pc.shift, dtype=float))) if any(pc.shift) else 1.0
        fhat[slices] += pc.amp * vals * phase
    return SampledField.from_transform(grid, fhat)


def _centre(k, alpha: float) -> tuple[np.ndarray, float]:
    """Block centre <k>^{a} k and scale <k>^{a}."""
    k = np.asarray(k, dtype=float)
    sc = cv.weight(k) ** (alpha / (1 - alpha))
    return sc * k, sc


def _spaced_indices(dim: int, lo: float, hi: float, sep: int) -> list[tuple[int, ...]]:
    """Integer points with lo <= |l| <= hi on the sublattice sep * Z^n (pairwise distance >= sep)."""
    m = int(math.floor(hi / sep))
    rng = range(-m, m + 1)
    out = []
    for t in np.ndindex(*(len(rng),) * dim):
        l = tuple(sep * rng[i] for i in t)
        r = math.sqrt(sum(v * v for v in l))
        if lo <= r <= hi:
            out.append(l)
    return out


def family_pieces(name: str, params: dict, dim: int) -> list[Piece]:
    zero = (0.0,) * dim
    e1 = (1.0,) + (0.0,) * (dim - 1)
    if name == "gaussian":
        w = params.get("width", 1.0)
        return [Piece("gaussian", tuple(params.get("center", zero)), w, zero)]
    if name == "bump_atom":
        w = params.get("width", 1.0)
        if "k" in params:
            alpha = params["alpha"]
            c, sc = _centre(cv._as_index(params["k"], dim), alpha)
            return [Piece("rho", tuple(c), w * sc, zero)]
        return [Piece("rho", zero, w, zero)]
    if name == "modulated_atom":
        # e^{i x_1} F^-1 rho(lam .): a tiny ball of radius 2 / lam around e_1
        lam = params["lam"]
        return [Piece("rho", e1, 1.0 / lam, zero)]
    if name == "lattice_sum_up":
        lam, alpha = params["lam"], params["alpha"]
        c = params.get("c", 0.25)
        sep = params.get("sep", 4)
        scale = lam ** (1 - alpha)
        ls = _spaced_indices(dim, params.get("eps0", 0.25) * scale, params.get("eps1", 1.0) * scale, sep)
        out = []
        for l in ls:
            cen, sc = _centre(l, alpha)
            out.append(Piece("rho", tuple(cen / lam), c * sc / lam, tuple(scale * np.asarray(l, float))))
        return out
    if name == "lattice_sum_down":
        lam, alpha = params["lam"], params["alpha"]
        c = params.get("c", 0.25)
        sep = params.get("sep", 4)
        shift = params.get("shift", 8.0)
        scale = lam ** (alpha - 1)
        ls = _spaced_indices(dim, params.get("eps0", 0.25) * scale, params.get("eps1", 1.0) * scale, sep)
        out = []
        for l in ls:
            cen, sc = _centre(l, alpha)
            out.append(Piece("rho", tuple(cen), c * sc, tuple(shift * np.asarray(l, float))))
        return out
    if name == "annulus_plateau":
        return [Piece("annulus", zero, 1.0, zero, level=int(params["j"]))]
    if name == "translated_lattice":
        j, alpha = int(params["j"]), params["alpha"]
        sep = params.get("sep", 4)
        margin = params.get("margin", 2.0)
        shift = params.get("shift", 1.0)
        c = params.get("c", 0.25)
        lo = (5 * 2.0 ** (j - 3) + margin * 2.0 ** (j * alpha)) ** (1 - alpha)
        hi = (3 * 2.0 ** (j - 1) - margin * 2.0 ** (j * alpha)) ** (1 - alpha)
        out = []
        for k in _spaced_indices(dim, lo, hi, sep):
            cen, sc = _centre(k, alpha)
            out.append(Piece("rho", tuple(cen), c * sc, tuple(shift * np.asarray(k, float))))
        return out
    raise ValueError(f"unknown family {name!r}")


FAMILIES = (
    "gaussian", "bump_atom", "modulated_atom", "lattice_sum_up", "lattice_sum_down",
    "annulus_plateau", "translated_lattice", "char_box_pair",
)


def make_family(name: str, params: dict | None, grid: GridSpec):
    """Field of the named family on the grid; char_box_pair returns (f, g).

    params["dilation"] (default 1) returns f(dilation * x) exactly, by moving
    the analytic pieces rather than resampling.
    """
    params = dict(params or {})
    lam = params.pop("dilation", 1.0)
    if name == "char_box_pair":
        f_pieces, g_pieces = char_box_pieces(params, grid.dim)
        if lam != 1:
            f_pieces = [p.dilated(lam, grid.dim) for p in f_pieces]
            g_pieces = [p.dilated(lam, grid.dim) for p in g_pieces]
        return _render(f_pieces, grid), _render(g_pieces, grid)
    pieces = family_pieces(name, params, grid.dim)
    if not pieces:
        raise UnresolvableError(f"family {name} has no members for {params}")
    if lam != 1:
        pieces = [p.dilated(lam, grid.dim) for p in pieces]
    for pc in pieces:
        if any(abs(t) >= grid.half_period / 2 for t in pc.shift):
            raise UnresolvableError(f"translation {pc.shift} exceeds half the period cell")
    return _render(pieces, grid)


def char_box_pieces(params: dict, dim: int) -> tuple[list[Piece], list[Piece]]:
    """Indicators of A(J) = Q(J^{1/(1-alpha)} (1,..,1), r J^{a} / 2) and of -A(J)."""
    J, alpha = params["J"], params["alpha"]
    r = params.get("r", 0.5 * sum(cv.rect_radius_bounds(alpha)))
    a = alpha / (1 - alpha)
    c = (J ** (1 / (1 - alpha)),) * dim
    half = r * J**a / 2
    zero = (0.0,) * dim
    return [Piece("box", c, half, zero)], [Piece("box", tuple(-v for v in c), half, zero)]


# ---------------------------------------------------------------------------
# random suite


DEFAULT_SEEDS = tuple(range(1000, 1050))


def random_field(grid: GridSpec, seed: int, band: float = 1 / 3) -> SampledField:
    """Complex white noise restricted to the central fraction `band` of the frequency box."""
    rng = np.random.default_rng(seed)
    spec = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    ax = np.abs(grid.lattice.axis) <= band * grid.nyquist
    mask = ax
    for _ in range(grid.dim - 1):
        mask = np.logical_and.outer(mask, ax)
    return SampledField.from_spectrum(grid, spec * mask)


def random_suite(grid: GridSpec, seeds=DEFAULT_SEEDS) -> list[SampledField]:
    return [random_field(grid, s) for s in seeds]


# ---------------------------------------------------------------------------
# field files: magic, u32 header length, JSON header, raw samples


MAGIC = b"ALPHAMOD"


def write_field(path, f: SampledField, dtype: str = "complex128") -> None:
    if dtype not in ("complex64", "complex128"):
        raise ValueError("dtype must be complex64 or complex128")
    header = {
        "dim": f.grid.dim, "N": f.grid.samples_per_axis, "L": f.grid.half_period,
        "dtype": dtype, "layout": "row-major",
    }
    raw = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(raw)))
        fh.write(raw)
        fh.write(np.ascontiguousarray(f.values, dtype=np.dtype(dtype).newbyteorder("<")).tobytes())


def read_field(path) -> SampledField:
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError(f"{path}: not a field file")
        (n,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(n))
        if header.get("layout") != "row-major" or header.get("dtype") not in ("complex64", "complex128"):
            raise ValueError(f"{path}: unsupported header {header}")
        grid = GridSpec(int(header["dim"]), float(header["L"]), int(header["N"]))
        data = np.frombuffer(fh.read(), dtype=np.dtype(header["dtype"]).newbyteorder("<"))
    if data.size != math.prod(grid.shape):
        raise ValueError(f"{path}: expected {math.prod(grid.shape)} samples, found {data.size}")
    return SampledField(grid, data.reshape(grid.shape).astype(complex))
