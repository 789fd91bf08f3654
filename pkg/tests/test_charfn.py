import numpy as np
import pytest

from conftest import random_valid_params
from markov_claims import charfn
from markov_claims.exact import exact_charfn
from markov_claims.inversion import midpoint_grid
from markov_claims.model import ModelParams

GRID = midpoint_grid(256)


def test_base_transforms_at_zero(params):
    bt = charfn.base_transforms(params, 0.0)
    assert abs(bt.h - 1.0) <= 1e-15
    assert abs(bt.psi_minus_one - (-params.alpha / (1 - params.beta))) <= 1e-15
    assert abs(bt.u - (-params.alpha)) <= 1e-15
    assert abs(bt.psi - (1 - params.alpha / (1 - params.beta))) <= 1e-15


def test_h_at_pi_direct_substitution():
    p = ModelParams(0.5, 0.1, 0.02, 3)
    # (1-beta) e^{i pi} / (1 - beta e^{i pi}) = -0.9 / 1.1
    assert abs(complex(charfn.base_transforms(p, np.pi).h) - (-9.0 / 11.0)) <= 1e-15


def test_corrections_at_zero(params):
    c = charfn.correction_transforms(params, 0.0)
    a, g, b = params.alpha, params.gamma, params.beta
    assert abs(c.a2) <= 1e-15 and abs(c.a3) <= 1e-15 and abs(c.a5) <= 1e-15
    assert abs(c.a1 - (-a / (1 + g - b))) <= 1e-15


def test_partial_sum_identities(params):
    c = charfn.correction_transforms(params, GRID)
    g = params.gamma
    assert np.max(np.abs(c.delta - (1 + c.a1 * g))) <= 1e-13
    assert np.max(np.abs(c.delta1 - (c.delta + (c.a2 + c.a4) * g ** 2))) <= 1e-13
    assert np.max(np.abs(c.a - (c.delta1 + (c.a3 + c.a5 + c.a6) * g ** 3))) <= 1e-13


def test_sqrt_disc_at_zero_scalar_oracle():
    p = ModelParams(0.5, 0.1, 0.02, 3)
    d0 = (1 - p.gamma + p.beta) ** 2 - 4 * (p.beta - p.gamma * (1 - p.alpha))
    assert abs(d0 - 0.8064) <= 1e-15
    root = complex(charfn.sqrt_disc(p, 0.0))
    assert abs(root - np.sqrt(d0)) <= 1e-15
    assert abs(root - 0.898) <= 5e-4


def test_sqrt_disc_band_and_floor_on_box(rng):
    for _ in range(20):
        p = random_valid_params(rng)
        root = charfn.sqrt_disc(p, GRID)
        eit = np.exp(1j * GRID)
        assert np.max(np.abs(root - (1 + p.gamma - p.beta * eit))) <= 5.81 * p.gamma
        assert np.min(np.abs(root)) >= 0.6


def test_vieta_identities(params):
    sp = charfn.spectral_parts(params, GRID)
    eit = np.exp(1j * GRID)
    target_sum = 1 - params.gamma + params.beta * eit
    target_prod = eit * (params.beta - params.gamma * (1 - params.alpha))
    assert np.max(np.abs(sp.lambda1 + sp.lambda2 - target_sum)) <= 1e-12
    assert np.max(np.abs(sp.lambda1 * sp.lambda2 - target_prod)) <= 1e-12
    assert np.array_equal(sp.lambda3, np.exp(1j * params.d * GRID))


def test_eigenvalues_at_zero_quadratic_oracle(params):
    # roots of x^2 - (1 - gamma + beta) x + (beta - gamma (1 - alpha))
    roots = np.roots([1.0, -(1 - params.gamma + params.beta),
                      params.beta - params.gamma * (1 - params.alpha)])
    lo, hi = sorted(roots.real)
    sp = charfn.spectral_parts(params, 0.0)
    assert abs(complex(sp.lambda1) - hi) <= 1e-14
    assert abs(complex(sp.lambda2) - lo) <= 1e-14
    assert abs(complex(sp.lambda1) - 0.989) <= 5e-4
    assert abs(complex(sp.lambda2) - 0.091) <= 5e-4


def test_weights_at_zero(params):
    sp = charfn.spectral_parts(params, 0.0)
    assert complex(sp.w1) == 0.0
    assert complex(sp.w2) == 0.0
    assert abs(complex(sp.w3) - 1.0) <= 1e-13


def test_weights_sum_to_one_pointwise(params):
    sp = charfn.spectral_parts(params, GRID)
    assert np.max(np.abs(sp.w1 + sp.w2 + sp.w3 - 1.0)) <= 1e-10


def test_spectral_identity_against_matrix_power(rng):
    for _ in range(6):
        p = random_valid_params(rng)
        for n in (1, 4, 16, 64):
            residual = np.max(np.abs(exact_charfn(p, n, GRID)
                                     - charfn.perron_charfn(p, n, GRID)))
            assert residual <= 1e-10


def test_eig2_small_on_grid(params):
    sp = charfn.spectral_parts(params, GRID)
    assert np.max(np.abs(sp.lambda2)) <= params.beta + 4 * params.gamma
    assert np.max(np.abs(sp.lambda2)) <= 0.35


def test_w2_lipschitz_bound(params):
    sp = charfn.spectral_parts(params, GRID)
    cap = 2 * (params.d + 1) * np.abs(np.exp(1j * GRID) - 1.0)
    assert np.all(np.abs(sp.w2) <= cap)


def test_approx_transforms_at_zero(params):
    ap = charfn.approx_transforms(params, 0.0, 4)
    assert complex(ap.v) == 0.0 and complex(ap.v1) == 0.0 and complex(ap.v2) == 0.0
    assert abs(complex(ap.e) - 1.0) <= 1e-13
    g0, g10 = complex(ap.g), complex(ap.g1)
    assert abs(g0.imag) <= 1e-15 and 0.0 < g0.real <= 1.0
    assert abs(g10.imag) <= 1e-15 and 0.0 < g10.real <= 1.0


def test_e_equals_absorbed_spectral_component(params):
    for n in (1, 3, 17):
        ap = charfn.approx_transforms(params, GRID, n)
        sp = charfn.spectral_parts(params, GRID)
        assert np.max(np.abs(ap.e - sp.lambda3 ** n * sp.w3)) <= 1e-12


def test_g1_modulus_at_most_one(rng):
    for _ in range(10):
        p = random_valid_params(rng)
        ap = charfn.approx_transforms(p, GRID, 2)
        assert np.max(np.abs(ap.g1)) <= 1.0
        assert np.max(np.abs(ap.g)) <= 1.0


def test_convolution_power_is_exponent_scaling(params):
    ap = charfn.approx_transforms(params, GRID, 5)
    assert np.max(np.abs(np.exp(3 * ap.g_exponent) - ap.g ** 3)) <= 1e-12


def test_conjugate_symmetry_of_transforms(params):
    t = np.array([0.3, 1.1, 2.9])
    for name in ("h", "psi", "a1", "a4", "delta1", "a", "sqrt_disc", "w1", "w2", "w3"):
        plus = charfn.transform_by_name(params, t, name)
        minus = charfn.transform_by_name(params, -t, name)
        assert np.max(np.abs(minus - np.conj(plus))) <= 1e-12, name
    for name in ("v", "v2", "g", "g1", "e"):
        plus = charfn.transform_by_name(params, t, name, n=4)
        minus = charfn.transform_by_name(params, -t, name, n=4)
        assert np.max(np.abs(minus - np.conj(plus))) <= 1e-12, name


def test_eig1_minus_a_is_quartic_order(params):
    # grid-max oracle: the gap shrinks like gamma^4 with a stable constant
    t = np.array([0.5, 1.5, 3.0])
    ratios = []
    for g in (0.04, 0.02, 0.01):
        p = ModelParams(params.alpha, params.beta, g, params.d)
        gap = np.abs(charfn.spectral_parts(p, t).lambda1
                     - charfn.correction_transforms(p, t).a)
        re_h = charfn.base_transforms(p, t).h.real
        ratios.append(np.max(gap / (g ** 4 * ((1 - re_h) ** 2 + p.alpha ** 4))))
    assert max(ratios) <= 10.0 * min(ratios)


def test_transform_by_name_errors(params):
    with pytest.raises(KeyError):
        charfn.transform_by_name(params, 0.5, "nope")
    with pytest.raises(ValueError):
        charfn.transform_by_name(params, 0.5, "e")


def test_transform_name_exact(params):
    vals = charfn.transform_by_name(params, GRID[:8], "exact", n=3)
    assert np.max(np.abs(vals - exact_charfn(params, 3, GRID[:8]))) == 0.0
