import numpy as np
import pytest

from markov_claims import verify
from markov_claims.inversion import ApproxVariant
from markov_claims.model import ModelParams
from markov_claims.verify import (BoundCheck, HypothesisError, approximation_error,
                                  check_bound, default_box, empirical_constant,
                                  exact_constant_suite, fitted_suite,
                                  nonuniform_envelopes, rate_fit, regime_errors,
                                  spectral_residual)

SMALL_BOX = [ModelParams(a, b, g, d)
             for a in (0.1, 0.5, 0.81)
             for b in (0.01, 0.15)
             for g in (0.005, 0.05)
             for d in (1, 3)]


def test_default_box_shape():
    box = default_box()
    assert len(box) == 5 * 4 * 4 * 3
    assert max(p.alpha for p in box) == 0.9 * 0.9
    dense = default_box(dense=True)
    assert len(dense) == 9 * 7 * 7 * 3


def test_exact_constant_suite_small_box():
    for c in exact_constant_suite(SMALL_BOX, n_t=128):
        assert isinstance(c, BoundCheck)
        assert c.violated is False, (c.bound_id, c.max_ratio)
        assert c.max_ratio <= 1.0 + 1e-9


def test_fitted_suite_small_box():
    for c in fitted_suite(SMALL_BOX, n_t=128):
        assert c.violated is None
        assert np.isfinite(c.max_ratio)
        assert c.max_ratio > 0.0, c.bound_id


def test_fitted_constants_stable_under_t_refinement():
    for bound_id in ("eig1_vs_a_quartic", "w1_vs_v", "g1_mod_decay"):
        coarse = check_bound(bound_id, SMALL_BOX, n_t=256).max_ratio
        fine = check_bound(bound_id, SMALL_BOX, n_t=512).max_ratio
        assert abs(fine - coarse) <= 0.1 * max(coarse, fine), bound_id


def test_alpha_floor_filters_grid():
    c = check_bound("delta1_contraction", SMALL_BOX, n_t=64)
    assert c.n_params == len([p for p in SMALL_BOX if p.alpha >= 0.3])
    with pytest.raises(ValueError):
        check_bound("delta1_contraction", [ModelParams(0.1, 0.1, 0.02, 1)], n_t=64)


def test_bound_check_serializes():
    c = check_bound("eig2_mod", SMALL_BOX[:2], n_t=32)
    d = c.to_dict()
    assert d["bound_id"] == "eig2_mod" and "worst_params" in d


def test_hypothesis_enforcement():
    low_alpha = ModelParams(0.1, 0.1, 0.03, 2)
    with pytest.raises(HypothesisError):
        approximation_error(low_alpha, 4, ApproxVariant.G1V1_E)
    low_gamma = ModelParams(0.5, 0.1, 0.005, 2)
    with pytest.raises(HypothesisError):
        approximation_error(low_gamma, 4, ApproxVariant.E_ONLY)
    # gv variant carries no floor
    approximation_error(low_alpha, 4, ApproxVariant.GV_E)


def test_spectral_residual_small(params):
    assert spectral_residual(params, 32) <= 1e-10


def test_error_at_horizon_one_is_sane(params):
    res = approximation_error(ModelParams(0.5, 0.1, 0.02, 2), 1, ApproxVariant.GV_E)
    assert np.isfinite(res.report.kolmogorov)
    assert res.report.kolmogorov <= 2.0
    assert res.report.kolmogorov <= res.report.total_variation
    assert res.report.local <= res.report.total_variation


def test_exponential_regime_errors_decrease():
    p = ModelParams(0.5, 0.1, 0.04, 2)
    errs = [approximation_error(p, n, ApproxVariant.E_ONLY).report.total_variation
            for n in (8, 16, 32, 64)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_rate_fit_validation():
    with pytest.raises(ValueError):
        rate_fit("e_only_tv_exponential", (8, 8, 16))
    with pytest.raises(ValueError):
        rate_fit("e_only_tv_exponential", (8,))
    with pytest.raises(ValueError):
        verify.fit_errors("e_only_tv_exponential", (8, 16), (0.5, 0.0))
    with pytest.raises(KeyError):
        rate_fit("nope")


def test_rate_fit_round_trip_from_precomputed():
    ns = (8, 16, 32)
    errors = [np.exp(-0.5 * n) for n in ns]
    fit = verify.fit_errors("e_only_tv_exponential", ns, errors)
    assert abs(fit.slope - (-0.5)) <= 1e-12
    assert fit.r_squared >= 1.0 - 1e-12
    assert fit.to_dict()["norm"] == "tv"


def test_regime_errors_use_policy():
    results = regime_errors("g1v1_kolmogorov_firstorder", (16, 32))
    assert results[0].params.gamma == 0.64 / 16
    assert results[1].params.gamma == 0.64 / 32
    assert all(r.variant is ApproxVariant.G1V1_E for r in results)


def test_empirical_constant_finite_and_refinement_stable():
    grid = [ModelParams(0.4, 0.1, 0.02, 2), ModelParams(0.6, 0.05, 0.04, 2)]
    coarse = empirical_constant("g1v1_kolmogorov", grid, (8, 16), inner_rate=0.5)
    assert np.isfinite(coarse) and coarse > 0.0
    denser = grid + [ModelParams(0.5, 0.075, 0.03, 2)]
    fine = empirical_constant("g1v1_kolmogorov", denser, (8, 16), inner_rate=0.5)
    assert fine >= coarse
    assert fine <= 1.1 * coarse


def test_empirical_constant_single_point_is_plain_ratio():
    p = ModelParams(0.5, 0.1, 0.03, 2)
    n = 8
    c = empirical_constant("e_only_tv", [p], [n], inner_rate=0.1)
    err = approximation_error(p, n, ApproxVariant.E_ONLY).report.total_variation
    shape = (p.d + 1) * np.exp(-0.1 * n)
    assert abs(c - err / shape) <= 1e-12


def test_inner_rate_rescaling():
    assert verify.inner_rate_for("e_only_tv", 0.02) == 0.02
    assert verify.inner_rate_for("g1v1_kolmogorov", 0.02) == 0.02 / 0.04
    assert verify.inner_rate_for("gv_kolmogorov", 0.02) == 0.02 / (0.04 * 0.5)


def test_envelopes_bounded_and_stable():
    env = nonuniform_envelopes(ModelParams(0.5, 0.1, 0.05, 3), 32)
    assert env.local_weighted.size == 32 * 3
    assert np.all(np.isfinite(env.local_weighted))
    assert env.stable
    assert env.local_constant == env.local_weighted.max()
