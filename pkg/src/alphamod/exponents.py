"""Closed-form index formulas for alpha-modulation spaces.

Everything here works in the reciprocal coordinates (1/p, 1/q), so p = inf is
simply 1/p = 0 and no infinities appear in the arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

Side = Literal["up", "down"]


def inv(p: float) -> float:
    """Reciprocal of an extended-real exponent (inf -> 0)."""
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    return 0.0 if math.isinf(p) else 1.0 / p


def from_inv(x: float) -> float:
    return math.inf if x == 0 else 1.0 / x


@dataclass(frozen=True)
class IndexPair:
    inv_p: float
    inv_q: float

    def __post_init__(self):
        if self.inv_p < 0 or self.inv_q < 0:
            raise ValueError("reciprocal exponents must be nonnegative")

    @classmethod
    def of(cls, p: float, q: float) -> "IndexPair":
        return cls(inv(p), inv(q))


@dataclass(frozen=True)
class SpaceParams:
    """(s, p, q, alpha); alpha = 1 selects the Besov scale."""

    s: float
    p: float
    q: float
    alpha: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError("p and q must be positive")
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")

    @property
    def index_pair(self) -> IndexPair:
        return IndexPair.of(self.p, self.q)

    @property
    def besov(self) -> bool:
        return self.alpha == 1


@dataclass(frozen=True)
class RegionTag:
    s_region: str
    t_region: str
    d_region: str


def classify(ip: IndexPair) -> RegionTag:
    x, y = ip.inv_p, ip.inv_q
    if y >= x and x <= 0.5:
        s = "S1"
    elif x + y >= 1 and x > 0.5:
        s = "S2"
    else:
        s = "S3"
    if x >= y and x > 0.5:
        t = "T1"
    elif x + y <= 1 and x <= 0.5:
        t = "T2"
    else:
        t = "T3"
    d = "D1" if (y >= 2 * x and x <= 0.5) else "D2"
    return RegionTag(s, t, d)


def big_r(ip: IndexPair, a1: float, a2: float, n: int = 1) -> float:
    """Regularity price of the embedding M^{., a1} into M^{., a2}."""
    c = n * (a1 - a2)
    return max(0.0, c * (ip.inv_q - ip.inv_p), c * (ip.inv_p + ip.inv_q - 1))


def s_c(ip: IndexPair, alpha: float, side: Side, n: int = 1) -> float:
    if side == "up":
        return big_r(ip, 1.0, alpha, n)
    if side == "down":
        return -big_r(ip, alpha, 1.0, n)
    raise ValueError(f"side must be 'up' or 'down', got {side!r}")


def s_p(p: float, n: int = 1) -> float:
    return n * (max(inv(p), 1.0) - 1.0)


def _s_p_inv(inv_p: float, n: int) -> float:
    return n * (max(inv_p, 1.0) - 1.0)


@dataclass(frozen=True)
class ScalingSlopes:
    slope_up: float
    slope_down: float
    degenerate_up: bool = False
    degenerate_down: bool = False

    def __iter__(self):
        return iter((self.slope_up, self.slope_down))


def scaling_slopes(s: float, ip: IndexPair, alpha: float, n: int = 1) -> ScalingSlopes:
    """Log-log slopes of ||f(lambda .)|| as lambda -> inf and lambda -> 0+.

    When s + s_c vanishes on a side the power law picks up a logarithm
    (see log_correction) and the corresponding degenerate flag is set.
    """
    up = s + s_c(ip, alpha, "up", n)
    down = s + s_c(ip, alpha, "down", n)
    base = -n * ip.inv_p
    return ScalingSlopes(
        slope_up=base + max(_s_p_inv(ip.inv_p, n), up),
        slope_down=base + min(0.0, down),
        degenerate_up=math.isclose(up, 0.0, abs_tol=1e-14),
        degenerate_down=math.isclose(down, 0.0, abs_tol=1e-14),
    )


@dataclass(frozen=True)
class LogCorrection:
    """F(lambda) ~ lambda^prefactor_exponent * (ln lambda or ln 1/lambda)^log_power."""

    log_power: float
    prefactor_exponent: float = 0.0


def log_correction(ip: IndexPair, side: Side, p_regime: str | None = None, n: int = 1) -> LogCorrection:
    """Correction factor in the borderline case s = -s_c.

    p_regime is "p>=1" or "p<=1"; inferred from ip when omitted. At p = 1 the
    two up-side branches coincide.
    """
    x, y = ip.inv_p, ip.inv_q
    if p_regime is None:
        p_regime = "p>=1" if x <= 1 else "p<=1"
    if side == "down":
        return LogCorrection(max(0.0, x - y, 1 - x - y))
    if side != "up":
        raise ValueError(f"side must be 'up' or 'down', got {side!r}")
    if p_regime == "p>=1":
        return LogCorrection(max(0.0, y - x, y + x - 1))
    if p_regime == "p<=1":
        return LogCorrection(y, n * (x - 1))
    raise ValueError(f"unknown p_regime {p_regime!r}")


def embedding_threshold(ip: IndexPair, a1: float, a2: float, n: int = 1) -> float:
    """Minimal s1 - s2 for M^{s1,a1}_{p,q} into M^{s2,a2}_{p,q}; a = 1 is Besov."""
    return big_r(ip, a1, a2, n)


def algebra_s0(ip: IndexPair, alpha: float, n: int = 1) -> float:
    x, y = ip.inv_p, ip.inv_q
    mix = n * alpha * (1 - alpha) / (2 - alpha)
    if classify(ip).d_region == "D1":
        return n * alpha * x + n * (1 - alpha) * (1 - min(1.0, y)) + mix * (y - 2 * x)
    m = max(1.0, x, y)
    return n * alpha * x + n * (1 - alpha) * (m - y) + mix * (m - 1)


def algebra_s0_modulation(ip: IndexPair, n: int = 1) -> float:
    x, y = ip.inv_p, ip.inv_q
    if classify(ip).d_region == "D1":
        return n * (1 - min(1.0, y))
    return n * (max(1.0, x, y) - y)


def s0_is_sharp(ip: IndexPair) -> bool:
    """The threshold is known to be sharp only on D2 with p >= 1."""
    return classify(ip).d_region == "D2" and ip.inv_p <= 1


def algebra_product_growth(s: float, ip: IndexPair, alpha: float, n: int = 1) -> float:
    """Exponent of J in the lower bound for ||fg|| (box-pair construction)."""
    a = alpha / (1 - alpha)
    return n * a + alpha * (s / (1 - alpha) + n * a * (1 - ip.inv_p) + n * ip.inv_q)


def algebra_factor_growth(s: float, ip: IndexPair, alpha: float, n: int = 1) -> float:
    """Exponent of J in ||f|| ~ ||g|| for the box-pair construction."""
    a = alpha / (1 - alpha)
    return s / (1 - alpha) + n * a * (1 - ip.inv_p)


def algebra_deficit_slope(s: float, ip: IndexPair, alpha: float, n: int = 1) -> float:
    """Predicted slope of ln(||fg|| / (||f|| ||g||)) against ln J.

    Equals (2 - alpha)/(1 - alpha) * (algebra_box_threshold - s), so it is
    positive exactly below that threshold.
    """
    return algebra_product_growth(s, ip, alpha, n) - 2 * algebra_factor_growth(s, ip, alpha, n)


def algebra_box_threshold(ip: IndexPair, alpha: float, n: int = 1) -> float:
    """Smallest s compatible with the box-pair lower bound (p > 1, q <= 1)."""
    return n * alpha * ip.inv_p + n * alpha * (1 - alpha) / (2 - alpha) * (ip.inv_q - 1)


def algebra_wide_box_threshold(ip: IndexPair, alpha: float, n: int = 1) -> float:
    """Smallest s compatible with the wide-box lower bound on [0,1]^2 within D2."""
    return n * alpha * ip.inv_p + n * (1 - alpha) * (1 - ip.inv_q)


def dual_indices(sp: SpaceParams, n: int = 1) -> SpaceParams:
    if math.isinf(sp.p) or math.isinf(sp.q):
        raise ValueError("duality needs finite p and q")
    x, y = inv(sp.p), inv(sp.q)
    s_star = -sp.s + n * sp.alpha * (max(x, 1.0) - 1.0)
    # conjugate of max(1, p): 1/p* = 1 - min(1, 1/p)
    return SpaceParams(s_star, from_inv(1 - min(x, 1.0)), from_inv(1 - min(y, 1.0)), sp.alpha)


def interp_indices(theta: float, a: SpaceParams, b: SpaceParams) -> SpaceParams:
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if a.alpha != b.alpha:
        raise ValueError("interpolation needs a common alpha")
    s = (1 - theta) * a.s + theta * b.s
    x = (1 - theta) * inv(a.p) + theta * inv(b.p)
    y = (1 - theta) * inv(a.q) + theta * inv(b.q)
    return replace(a, s=s, p=from_inv(x), q=from_inv(y))


def bernstein_sigma(r: float, n: int = 1) -> float:
    return n * (max(inv(r), 1.0) - 0.5)


def bernstein_transfer_exponent(alpha: float, p1: float, p2: float, n: int = 1) -> float:
    """Power of <k> in ||box_k f||_{p2} <~ <k>^e ||box_k f||_{p1}."""
    return n * alpha / (1 - alpha) * (inv(p1) - inv(p2))


TABLE_COLUMNS = (
    "inv_p", "inv_q", "region_s", "region_t", "region_d",
    "R_up", "R_down", "s_c_up", "s_c_down", "s0", "s0_kind",
)


def exponent_table(alpha: float, inv_ps, inv_qs, n: int = 1) -> list[dict]:
    """Rows over the grid inv_ps x inv_qs (row-major in inv_p).

    s0_kind is "sharp" where a matching counterexample exists and
    "upper_bound" elsewhere (notably all of D1).
    """
    rows = []
    for x in inv_ps:
        for y in inv_qs:
            ip = IndexPair(float(x), float(y))
            tag = classify(ip)
            rows.append({
                "inv_p": ip.inv_p,
                "inv_q": ip.inv_q,
                "region_s": tag.s_region,
                "region_t": tag.t_region,
                "region_d": tag.d_region,
                "R_up": big_r(ip, 1.0, alpha, n),
                "R_down": big_r(ip, alpha, 1.0, n),
                "s_c_up": s_c(ip, alpha, "up", n),
                "s_c_down": s_c(ip, alpha, "down", n),
                "s0": algebra_s0(ip, alpha, n),
                "s0_kind": "sharp" if s0_is_sharp(ip) else "upper_bound",
            })
    return rows
