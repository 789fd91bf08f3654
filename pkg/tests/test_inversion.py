import numpy as np
import pytest

from conftest import random_valid_params
from markov_claims import charfn, norms
from markov_claims.exact import exact_charfn, exact_distribution_dp
from markov_claims.inversion import (AliasingRecord, ApproxVariant,
                                     ConvergenceError, aliasing_probe,
                                     approximation_measure, assemble_transform,
                                     default_window, invert_grid, lower_tail_depth,
                                     measure_from_transform, midpoint_grid,
                                     _invert, _next_pow2)
from markov_claims.measures import LatticeMeasure, unit_atom
from markov_claims.model import ModelParams

ALL_VARIANTS = tuple(ApproxVariant)


def test_midpoint_grid_avoids_zero_and_endpoints():
    g = midpoint_grid(128)
    assert g.size == 128
    assert np.min(np.abs(g)) >= np.pi / 128 - 1e-15
    assert np.max(np.abs(g)) <= np.pi - np.pi / 128 + 1e-15
    assert np.max(np.abs(g + g[::-1])) == 0.0  # symmetric under t -> -t


def test_invert_constant_transform_gives_origin_atom():
    g = midpoint_grid(64)
    m = invert_grid(np.ones_like(g, dtype=complex), (-8, 8))
    assert m.max_abs_diff(unit_atom(0).restrict(-8, 8)) <= 1e-14


def test_invert_pure_phase_gives_shifted_atom():
    g = midpoint_grid(64)
    m = invert_grid(np.exp(3j * g), (-8, 8))
    assert m.max_abs_diff(unit_atom(3).restrict(-8, 8)) <= 1e-14


def test_round_trip_random_signed_measure(rng):
    w = rng.normal(size=21)
    m = LatticeMeasure(-10, w)
    n = 64
    vals = m.fourier(midpoint_grid(n))
    rec = invert_grid(vals, (-10, 10))
    assert rec.max_abs_diff(m) <= 1e-12


def test_round_trip_payout_law(params):
    law = exact_distribution_dp(params, 6)
    n = _next_pow2(2 * (law.support[1] - law.support[0] + 1))
    rec = invert_grid(law.fourier(midpoint_grid(n)), law.support)
    assert rec.max_abs_diff(law) <= 1e-12


def test_window_and_grid_validation():
    g = np.ones(64, dtype=complex)
    with pytest.raises(ValueError):
        invert_grid(g, (-40, 40))          # window longer than N/2
    with pytest.raises(ValueError):
        invert_grid(np.ones(60, dtype=complex), (-4, 4))  # not a power of two
    with pytest.raises(ValueError):
        invert_grid(g, (4, 3))


def test_variant_parsing():
    assert ApproxVariant.from_string("GV_E") is ApproxVariant.GV_E
    assert ApproxVariant.from_string("E_only") is ApproxVariant.E_ONLY
    assert ApproxVariant.from_string("E_ONLY") is ApproxVariant.E_ONLY
    with pytest.raises(KeyError):
        ApproxVariant.from_string("nope")


def test_assembled_transform_is_one_at_zero(params):
    for variant in ALL_VARIANTS:
        val = complex(np.atleast_1d(assemble_transform(params, 0.0, 6, variant))[0])
        assert abs(val - 1.0) <= 1e-12, variant


def test_approximation_masses(params):
    for variant in ALL_VARIANTS:
        m, rec = approximation_measure(params, 8, variant, return_record=True)
        assert rec.converged
        assert rec.mass_error <= 2e-9, variant
        assert rec.tv_delta_last_doubling < 1e-10
        assert rec.n_used & (rec.n_used - 1) == 0
        assert abs(m.mass - 1.0) <= 2e-9


def test_e_only_mass_tight(params):
    m = approximation_measure(params, 8, ApproxVariant.E_ONLY)
    assert abs(m.mass - 1.0) <= 1e-10


def test_imaginary_residue_small(params):
    _, rec = approximation_measure(params, 8, ApproxVariant.GV_E, return_record=True)
    assert rec.imag_residue <= 1e-11


def test_aliasing_probe_reports(params):
    rec = aliasing_probe(params, 8, ApproxVariant.G1V2_E)
    assert isinstance(rec, AliasingRecord)
    assert rec.converged and rec.tv_delta_last_doubling < 1e-10


def test_aliasing_probe_on_polynomial_transform(params):
    # the law itself is a trigonometric polynomial: first refinement already stable
    law = exact_distribution_dp(params, 5)
    window = law.support
    n0 = _next_pow2(4 * (window[1] - window[0] + 1))
    first = measure_from_transform(lambda t: exact_charfn(params, 5, t), window, n0)
    second = measure_from_transform(lambda t: exact_charfn(params, 5, t), window, 2 * n0)
    assert float(np.abs(first.weights - second.weights).sum()) < 1e-10
    assert first.max_abs_diff(law) <= 1e-12


def test_small_alpha_gamma_deepens_window():
    shallow = ModelParams(0.5, 0.1, 0.05, 2)
    deep = ModelParams(0.1, 0.1, 0.005, 2)
    assert lower_tail_depth(deep) > 10 * lower_tail_depth(shallow)
    assert default_window(deep, 4)[0] == -lower_tail_depth(deep)


def test_fixed_window_mass_loss_detected(params):
    # a guard band of 64 cells cannot hold the lower tail: the adaptive
    # mass check must reject the fixed window
    with pytest.raises(ConvergenceError):
        approximation_measure(params, 8, ApproxVariant.E_ONLY, window=(-64, 8 * params.d + 64))


def test_absorbed_component_identity(params):
    # inverting e alone reproduces the law minus the two transient
    # spectral components
    n = 6
    window = default_window(params, n)
    n_grid = _next_pow2(4 * (window[1] - window[0] + 1))
    grid = midpoint_grid(n_grid)

    sp = charfn.spectral_parts(params, grid)
    transient = sp.lambda1 ** n * sp.w1 + sp.lambda2 ** n * sp.w2
    lhs = invert_grid(exact_charfn(params, n, grid) - transient, window)
    rhs = invert_grid(charfn.approx_transforms(params, grid, n).e, window)
    assert lhs.max_abs_diff(rhs) <= 1e-10


def test_variant_transforms_differ(params):
    g = midpoint_grid(32)
    vals = {v: assemble_transform(params, g, 6, v) for v in ALL_VARIANTS}
    assert np.max(np.abs(vals[ApproxVariant.GV_E] - vals[ApproxVariant.E_ONLY])) > 1e-6
    assert np.max(np.abs(vals[ApproxVariant.G1V1_E] - vals[ApproxVariant.G1V2_E])) > 1e-12
