import math
import warnings

import numpy as np
import pytest

from cpdex import oracle
from cpdex.betas import ROWS, beta

XIS = (0.0, 0.5, 1.0)


@pytest.fixture(scope="module")
def extracted():
    return {xi: oracle.extract_all(xi) for xi in XIS}


def test_b_matrix_parallel():
    b = oracle.b_matrix([0.3, 0.4], [0.3, 0.4], 0.7)
    np.testing.assert_allclose(b, np.diag([1.0, -1.0]), atol=1e-15)


def test_b_matrix_perpendicular_on_shell():
    xi = 0.8
    b = oracle.b_matrix([xi, 0.0], [0.0, xi], xi)
    assert b[0, 0] == pytest.approx(0.5, abs=1e-15)
    assert b[0, 1] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert b[1, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert b[1, 1] == pytest.approx(0.0, abs=1e-15)


def test_b_matrix_exchange_and_rotation(rng):
    s3 = np.diag([1.0, -1.0])
    for _ in range(10):
        k, kp = rng.normal(size=2), rng.normal(size=2)
        xi = rng.uniform(0.1, 2)
        b = oracle.b_matrix(k, kp, xi)
        np.testing.assert_allclose(oracle.b_matrix(kp, k, xi), s3 @ b.T @ s3, atol=1e-14)
        t = rng.uniform(0, 2 * np.pi)
        r = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
        np.testing.assert_allclose(oracle.b_matrix(r @ k, r @ kp, xi), b, atol=1e-13)


def test_b_matrix_degenerate():
    with pytest.warns(oracle.DegenerateMomentumWarning):
        oracle.b_matrix([0.0, 0.0], [1.0, 0.0], 0.5)
    with pytest.raises(ValueError):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            oracle.b_matrix([0.0, 0.0], [1.0, 0.0], 0.0)


def test_b2_matrix_collinear():
    k, xi = np.array([0.6, 0.0]), 0.8
    q = math.hypot(0.6, xi)
    np.testing.assert_allclose(oracle.b2_matrix(k, k, k, xi), 2 * q * np.diag([1.0, -1.0]),
                               atol=1e-14)


def test_loop_grid_fixed_size():
    sizes = {oracle.loop_grid(xi).w.size for xi in (0.0, 1e-3, 0.5, 3.0)}
    assert len(sizes) == 1
    with pytest.raises(ValueError):
        oracle.loop_grid(-1.0)


@pytest.mark.parametrize("xi", [0.0, 0.5, 1.0, 2.0])
def test_flat_kernel(xi):
    fk = oracle.flat_kernel(xi)
    assert fk.beta01 == pytest.approx(beta((0, 1), xi), abs=1e-6)
    assert fk.beta02 == pytest.approx(beta((0, 2), xi), abs=1e-6)
    assert fk.G[0, 0] == pytest.approx(fk.G[1, 1], abs=1e-14)
    assert np.abs(fk.G - np.diag(np.diag(fk.G))).max() < 1e-14


def test_g1_kernel_depends_on_modulus_only():
    xi = 0.5
    g_x = oracle.g1_kernel([0.4, 0.0], xi)
    t = 0.7
    r = np.array([[np.cos(t), -np.sin(t), 0], [np.sin(t), np.cos(t), 0], [0, 0, 1]])
    g_r = oracle.g1_kernel([0.4 * np.cos(t), 0.4 * np.sin(t)], xi)
    np.testing.assert_allclose(g_r, r @ g_x @ r.T, atol=1e-12)


def test_g2_kernel_symmetric():
    a = oracle.g2_kernel([0.3, 0.1], [-0.2, 0.25], 0.5)
    b = oracle.g2_kernel([-0.2, 0.25], [0.3, 0.1], 0.5)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("k,xi", [([0.5, 0.0], 0.0), ([0.3, 0.1], 0.5), ([0.2, -0.4], 2.0)])
def test_translation_identities(k, xi):
    r1, r2 = oracle.translation_residuals(k, xi)
    assert r1 < 1e-12
    assert r2 < 1e-5


@pytest.mark.parametrize("xi", XIS)
def test_extraction_matches_rows(extracted, xi):
    ex = extracted[xi]
    for key, val in ex.values.items():
        assert val == pytest.approx(beta(key, xi), abs=oracle.TOLERANCES[key[0]]), key


@pytest.mark.parametrize("xi", XIS)
def test_extraction_reality_and_checks(extracted, xi):
    ex = extracted[xi]
    assert max(abs(v) for v in ex.imag.values()) < 1e-12
    assert ex.checks["isotropy"] < 1e-10
    assert ex.checks["yy_consistency"] < 1e-8


def test_fd_agrees_with_ad(extracted):
    fd = oracle.extract_low_order(0.5, method="fd")
    fdq = oracle.extract_quadratic(0.5, method="fd")
    for key, val in {**fd.values, **fdq.values}.items():
        assert val == pytest.approx(extracted[0.5][key], abs=1e-5), key
    with pytest.raises(ValueError):
        oracle.extract_low_order(0.5, method="cheb")


@pytest.mark.parametrize("eps", [0.1, -0.1])
def test_reference_split_exact(eps):
    xi = 0.5
    ref = oracle.extract_low_order(xi)
    moved = oracle.reference_split_low_order(xi, eps)
    for key in ref.values:
        assert moved[key] == pytest.approx(ref[key], abs=1e-10), key


def test_reference_split_truncation_order():
    xi = 0.5
    ref = oracle.extract_low_order(xi)
    errs = []
    for eps in (0.1, 0.05):
        moved = oracle.reference_split_low_order(xi, eps, order=1)
        errs.append(max(abs(moved[k] - ref[k]) for k in ref.values))
    # first-order truncation leaves an O(eps^2) error
    assert 3.0 < errs[0] / errs[1] < 5.0


def test_recover_row_matches_stored():
    row, diag = oracle.recover_row()
    assert row == ROWS[4, 2]
    assert diag["rational_residual"] < 1e-6


def test_validate_records():
    recs = oracle.validate(xis=(0.5,), include_quadratic=False)
    assert all(r["pass"] for r in recs)
    report = oracle.validation_report(recs)
    assert '"all_pass": true' in report
