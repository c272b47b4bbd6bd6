import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from alphamod import covering as cv


A_HALF = cv.AlphaParams(0.5, 1, 2.0)


def test_weight_values():
    assert cv.weight(0) == 1.0
    assert cv.weight((3, 4)) == pytest.approx(math.sqrt(26), abs=1e-12)
    assert cv.weight(1) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_block_geometry_examples():
    c, r = cv.block_geometry(3, A_HALF)
    assert c[0] == pytest.approx(3 * math.sqrt(10), abs=1e-12)
    assert r == pytest.approx(2 * math.sqrt(10), abs=1e-12)
    c, r = cv.block_geometry(0, A_HALF)
    assert c[0] == 0 and r == 2.0
    a0 = cv.AlphaParams(0.0, 2, 3.0)
    c, r = cv.block_geometry((5, -2), a0)
    assert np.array_equal(c, [5.0, -2.0]) and r == 3.0


def test_alpha_params_rejects_bad_constants():
    with pytest.raises(ValueError):
        cv.AlphaParams(1.0)
    with pytest.raises(ValueError):
        cv.AlphaParams(0.5, 1, 0.9)
    with pytest.raises(ValueError):
        cv.AlphaParams(0.5, 1, 2.0, 1.2)


def test_rho_profile():
    assert cv.rho(0.5) == 1.0 and cv.rho(1.0) == 1.0
    assert cv.rho(2.0) == 0.0 and cv.rho(3.0) == 0.0
    t = np.linspace(1, 2, 101)
    assert np.all(np.diff(cv.rho(t)) <= 0)


def test_active_indices_brute_force():
    box = (np.array([-100.0]), np.array([100.0]))
    got = set(cv.active_indices(A_HALF, box))
    want = set()
    for k in range(-400, 401):
        c, r = cv.block_geometry(k, A_HALF)
        if max(-100 - c[0], c[0] - 100, 0) < r:
            want.add((k,))
    assert got == want
    assert (0,) in cv.active_indices(A_HALF, (0.0, 0.0))


@given(st.floats(-50, 50), st.floats(0, 30), st.floats(0, 30))
def test_active_indices_monotone(lo, w1, w2):
    small = set(cv.active_indices(A_HALF, (lo, lo + w1)))
    big = set(cv.active_indices(A_HALF, (lo - w2, lo + w1 + w2)))
    assert small <= big


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_eta_sums_to_one_at_random_points(alpha):
    fam = cv.smooth_family(cv.certified_params(alpha, 1))
    rng = np.random.default_rng(7)
    xi = rng.uniform(-300, 300, size=200)
    ks = cv.active_indices(fam.params, (xi.min(), xi.max()))
    total = sum(cv.eta_symbol(fam, k, xi) for k in ks)
    assert np.max(np.abs(total - 1)) < 1e-12


def test_eta_support_and_centre_bound():
    fam = cv.smooth_family(cv.certified_params(0.5, 1))
    a = fam.params
    for k in (0, 3, -7, 20):
        c, r = cv.block_geometry(k, a)
        outside = np.array([c[0] - r, c[0] + r, c[0] + 1.5 * r])
        assert np.all(cv.eta_symbol(fam, k, outside) == 0)
        # brute-force overlap count at the centre
        m = sum(cv.rho_symbol(a, l, c) > 0 for l in cv.active_indices(a, (c, c)))
        assert cv.eta_symbol(fam, k, c) >= 1 / m - 1e-12


def test_eta_2d_partition():
    fam = cv.smooth_family(cv.certified_params(0.5, 2))
    rng = np.random.default_rng(3)
    xi = rng.uniform(-12, 12, size=(100, 2))
    ks = cv.active_indices(fam.params, (xi.min(axis=0), xi.max(axis=0)))
    total = sum(cv.eta_symbol(fam, k, xi) for k in ks)
    assert np.max(np.abs(total - 1)) < 1e-12


def test_covering_gap_raised():
    fam = cv.smooth_family(cv.AlphaParams(0.7, 1, 1.2))
    with pytest.raises(cv.CoveringGap, match="covering gap"):
        cv.eta_symbol(fam, 0, np.linspace(-200, 200, 4001))


def test_validate_reports_gap_without_raising():
    rep = cv.validate_bapu(cv.smooth_family(cv.AlphaParams(0.7, 1, 1.2)), cv.default_lattice(1))
    assert not rep.passed
    assert rep.checks["covering"]["message"] == "covering gap"


def test_certified_constants():
    assert [cv.certified_params(a, 1).outer_c for a in (0.0, 0.3, 0.5, 0.7)] == [2.0, 2.0, 2.0, 3.0]
    assert cv.certified_params(0.5, 2).outer_c == pytest.approx(2 * math.sqrt(2))


def test_validate_alpha_zero_and_dyadic():
    rep = cv.validate_bapu(cv.smooth_family(cv.certified_params(0.0, 1)), cv.default_lattice(1))
    assert rep.passed
    # alpha = 0: the derivative scale is 1, so (1.1d) is plain boundedness
    assert rep.checks["derivative_order_1"]["value"] < cv.DERIVATIVE_TOL
    assert cv.validate_bapu(cv.dyadic_family(1), cv.default_lattice(1)).passed


# ---------------------------------------------------------------------------
# index sets


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_neighbor_sets_bounded_and_comparable(alpha):
    a = cv.certified_params(alpha, 1)
    sizes, ratios = [], []
    for k in range(-200, 201):
        nb = cv.neighbor_set(k, a)
        assert (k,) in nb
        sizes.append(len(nb))
        ratios += [cv.weight(l) / cv.weight(k) for l in nb]
    assert max(sizes) <= 8
    assert max(ratios) <= 4 and min(ratios) >= 1 / 4


def test_neighbor_relation_symmetric():
    a = cv.certified_params(0.5, 1)
    for k in range(-30, 31):
        for l in cv.neighbor_set(k, a):
            assert (k,) in cv.neighbor_set(l, a)


def test_scaled_set_identity_at_one():
    a = cv.certified_params(0.5, 1)
    for l in (0, 4, -17):
        assert cv.scaled_set(l, 1.0, a) == cv.neighbor_set(l, a)


@pytest.mark.parametrize("lam", [0.25, 1.0, 4.0])
def test_scaled_set_self_duality(lam):
    a = cv.certified_params(0.5, 1)
    members = {l: set(cv.scaled_set(l, lam, a)) for l in range(-30, 31)}
    for l in range(-30, 31):
        for k in range(-30, 31):
            assert ((k,) in members[l]) == ((l,) in set(cv.scaled_set(k, 1 / lam, a)))


def test_scaled_set_comparability():
    a = cv.certified_params(0.5, 1)
    l = 40
    for lam in (4, 16, 64):
        for k in cv.scaled_set(l, lam, a):
            ratio = cv.weight(k) / (lam ** 0.5 * cv.weight(l))
            assert 1 / 3 <= ratio <= 3


def test_scaled_set_rejects_nonpositive_lambda():
    with pytest.raises(ValueError):
        cv.scaled_set(0, 0.0, A_HALF)


# ---------------------------------------------------------------------------
# rectangular covering


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_rect_1d_structure(alpha):
    a = cv.AlphaParams(alpha, 1)
    cov = cv.build_rect_covering(a, extent=128)
    lo, hi = cv.rect_radius_bounds(alpha)
    assert lo < cov.radius_r < hi
    counts = cv.rect_overlap_counts(cov)
    # the last shell only has its inner neighbour
    last = cov.num_shells
    assert all(v == 2 for (j, _), v in counts.items() if j < last)
    excl = cv.rect_half_box_exclusive(cov)
    assert all(excl.values())
    # consecutive boxes overlap beyond j0 but the 7/8-shrunk box is clear of the neighbours
    right = lambda j: max(c[0] for c in cov.centers(j))
    for j in range(cov.j0 + 1, last):
        cj, cn = right(j), right(j + 1)
        hj, hn = cov.half_side(j), cov.half_side(j + 1)
        assert cj + hj > cn - hn
        assert cj + 7 / 8 * hj < cn - hn
        assert right(j - 1) + cov.half_side(j - 1) < cj - 7 / 8 * hj


def test_rect_rejects_inadmissible_r():
    a = cv.AlphaParams(0.5, 1)
    lo, hi = cv.rect_radius_bounds(0.5)
    with pytest.raises(ValueError):
        cv.build_rect_covering(a, r=lo)
    with pytest.raises(ValueError):
        cv.build_rect_covering(a, r=hi + 0.01)


def test_rect_2d_overlaps_bounded():
    cov = cv.build_rect_covering(cv.AlphaParams(0.5, 2), extent=24)
    counts = cv.rect_overlap_counts(cov)
    assert max(counts.values()) <= 8
    excl = cv.rect_half_box_exclusive(cov)
    assert all(v for (j, _), v in excl.items() if j > cov.j0)


def test_rect_psi_partition_inner_box_and_support():
    cov = cv.build_rect_covering(cv.AlphaParams(0.5, 1), extent=128)
    xi = np.linspace(-100, 100, 4001)
    idx = [(j, m) for j, m, _, _ in cov.boxes()]
    vals = {i: cv.psi_symbol(cov, i, xi) for i in idx}
    assert np.max(np.abs(sum(vals.values()) - 1)) < 1e-12
    for (j, m), v in vals.items():
        c, h = cov.centers(j)[m][0], cov.half_side(j)
        assert np.all(v[np.abs(xi - c) >= h] == 0)
        inner = np.abs(xi - c) <= h / 2
        assert np.allclose(v[inner], 1.0, atol=1e-12)


def test_rect_json_roundtrip_keys():
    cov = cv.build_rect_covering(cv.AlphaParams(0.5, 1), extent=64)
    doc = cov.to_json()
    assert {"kind", "alpha", "dim", "r", "j0", "small_radii", "shells"} <= set(doc)
    assert len(doc["small_radii"]) == cov.j0 + 1
    assert set(cv.AlphaParams(0.5).to_json()) == {"kind", "alpha", "dim", "outer_c", "inner_c"}


def test_patches_cover_lattice_once():
    lat = cv.FrequencyLattice(1, 1024, 0.25)
    fam = cv.smooth_family(cv.certified_params(0.3, 1))
    total = np.zeros(lat.shape)
    for p in fam.patches(lat):
        total[p.slices] += p.values
    assert np.max(np.abs(total - 1)) < 1e-12
    # repeated calls share the cached patches
    assert fam.patches(lat) is fam.patches(lat)


def test_lattice_axis_convention():
    lat = cv.FrequencyLattice(1, 16, 0.5)
    assert lat.axis[0] == -4.0 and lat.axis[8] == 0.0
    assert lat.nyquist == 4.0
    assert list(itertools.islice(lat.axis, 0, 3)) == [-4.0, -3.5, -3.0]
