import json
import math

import numpy as np
import pytest

from alphamod import covering as cv
from alphamod import experiments as xp
from alphamod import transform as tr
from alphamod.exponents import IndexPair, SpaceParams

XS = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]


# ---------------------------------------------------------------------------
# power-law fits


def test_fit_exact_square():
    fit = xp.fit_power_law(XS, [x**2 for x in XS])
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == 1.0 and fit.max_residual < 1e-12


def test_fit_constant_is_flat_and_perfect():
    fit = xp.fit_power_law(XS, [3.0] * 6)
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0))
    assert fit.r_squared == 1.0


def test_fit_noisy_three_halves():
    rng = np.random.default_rng(5)
    xs = np.geomspace(1, 1024, 21)
    ys = xs**1.5 * np.exp(rng.normal(0, 0.05, xs.size))
    fit = xp.fit_power_law(xs, ys)
    assert abs(fit.slope - 1.5) < 0.05 and fit.r_squared > 0.99


def test_fit_rejects_bad_input():
    with pytest.raises(xp.DegenerateFit, match="degenerate"):
        xp.fit_power_law(XS, [1, 2, 0, 4, 5, 6])
    with pytest.raises(ValueError):
        xp.fit_power_law(XS[:5], [1.0] * 5)
    with pytest.raises(ValueError):
        xp.fit_power_law(XS[::-1], [1.0] * 6)
    with pytest.raises(ValueError):
        xp.fit_power_law(XS, [1.0] * 5)
    with pytest.raises(tr.UnresolvableError):
        xp._fit_resolved(XS[:3], [1.0] * 3, "probe")


def test_grids():
    assert xp.dyadic_grid(1, 4) == pytest.approx([1, 2**0.5, 2, 2**1.5, 4])
    assert xp.integer_grid(8, 64) == [8, 11, 16, 23, 32, 45, 64]


# ---------------------------------------------------------------------------
# reports


def report(slope, theory, kind="match", r2=1.0, tol=0.1):
    fit = xp.FitResult(slope, 0.0, r2, 0.0, ())
    return xp.ExperimentReport("probe", {"x": 1}, fit, theory, tol, kind)


def test_verdict_kinds():
    assert report(0.55, 0.5).verdict and not report(0.65, 0.5).verdict
    assert report(3.0, 0.5, "lower_bound").verdict and not report(0.3, 0.5, "lower_bound").verdict
    assert report(-3.0, 0.0, "bounded").verdict and not report(0.2, 0.0, "bounded").verdict
    with pytest.raises(ValueError):
        report(0.0, 0.0, "sideways").verdict


def test_r_squared_gate_only_for_sloped_predictions():
    assert not report(0.5, 0.5, r2=0.9).verdict
    assert report(0.01, 0.0, r2=0.1).verdict
    assert report(-2.0, 0.0, "bounded", r2=0.1).verdict


def test_config_hash_is_order_independent_and_handles_inf():
    a = xp.config_hash({"p": math.inf, "q": 1.0, "xs": [1, 2]})
    b = xp.config_hash({"xs": [1, 2], "q": 1.0, "p": float("inf")})
    assert a == b and len(a) == 12
    assert a != xp.config_hash({"p": math.inf, "q": 2.0, "xs": [1, 2]})
    assert xp.config_hash({"v": np.float64(0.5)}) == xp.config_hash({"v": 0.5})


def test_report_files(tmp_path):
    rep = xp.cardinality_experiment(0.5, [4, 8, 16, 32, 64, 128])
    csv_path, json_path = rep.write(tmp_path)
    assert csv_path.name == f"cardinality_{rep.hash}.csv"
    assert json_path.name == f"cardinality_{rep.hash}.json"
    doc = json.loads(json_path.read_text())
    assert doc["config_hash"] == rep.hash
    assert doc["verdict"] == ("pass" if rep.verdict else "fail")
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "lambda,value" and len(rows) == 7
    # a second write is byte-identical
    first = json_path.read_bytes()
    rep.write(tmp_path)
    assert json_path.read_bytes() == first


# ---------------------------------------------------------------------------
# experiments on small inputs


def test_cardinality_law_and_unit_lambda():
    rep = xp.cardinality_experiment(0.5, xp.dyadic_grid(4, 256))
    assert rep.theory_slope == 0.5 and rep.verdict
    a = cv.certified_params(0.5, 1)
    assert rep.series[0][1] == len(cv.scaled_set(0, 4.0, a))
    assert len(cv.scaled_set(0, 1.0, a)) == len(cv.neighbor_set(0, a))


def test_neighbor_count_bound_small():
    assert xp.neighbor_count_bound(0.0, 20) <= 8
    assert xp.neighbor_count_bound(0.5, 20) <= 8


def test_plancherel_scaling_case():
    rep = xp.SCALING_SUITE[0].run()
    assert rep.theory_slope == -0.5 and rep.verdict
    assert rep.extra or rep.series


def test_scaling_larger_s_gives_larger_slope_at_large_lambda():
    # modulated atoms sit at frequency ~ 1, then grow: the slope is increasing in s
    lams = xp.dyadic_grid(4, 64)
    slopes = [xp.scaling_experiment("modulated_atom", SpaceParams(s, 2, 2, 0.0), lams).fit.slope
              for s in (0.0, 1.0)]
    assert slopes[0] < slopes[1]


def test_scaling_rejects_bad_anchor():
    with pytest.raises(ValueError):
        xp.scaling_experiment("gaussian", SpaceParams(0, 2, 2, 0.5), xp.dyadic_grid(1, 32), anchor="middle")


def test_scaling_too_few_resolvable_points():
    with pytest.raises(tr.UnresolvableError):
        xp.scaling_experiment("gaussian", SpaceParams(0, 2, 2, 0.5), xp.dyadic_grid(1, 4096), params={"width": 4.0})


def test_embedding_same_alpha_is_flat():
    rep = xp.EMBEDDING_SUITE[3].run()
    assert rep.theory_slope == 0 and rep.verdict


def test_bernstein_small_range():
    rep = xp.bernstein_constants(0.5, range(0, 21))
    assert rep.verdict
    assert set(rep.ratios) == {"p1=1.0 p2=2.0", "p1=2.0 p2=inf", "p1=1.0 p2=inf"}


def test_algebra_grid_holds_the_largest_box():
    g = xp.algebra_grid(0.5, 64)
    assert 64**2 <= g.nyquist / 4


def test_equivalence_small_suite():
    grid = tr.GridSpec(1, 16 * math.pi, 2**11)
    rep = xp.equivalence_check(0.5, xp.EQUIVALENCE_PQ, seeds=range(1000, 1005), grid=grid)
    assert rep.verdict
    assert all(v > 0 for vals in rep.ratios.values() for v in vals)


def test_scaling_case_shapes():
    names = [c.name for c in xp.SCALING_SUITE]
    assert len(set(names)) == len(names)
    for c in xp.SCALING_SUITE:
        assert len(c.lambdas) >= xp.MIN_POINTS
    for c in xp.EMBEDDING_SUITE:
        assert len(c.sizes) >= xp.MIN_POINTS
    assert IndexPair.of(2, 2) == IndexPair(0.5, 0.5)
