from fractions import Fraction as Fr

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cpdex.betas import (RECOVERED, RECOVERED_ROW_42, VALID_INDICES, VERBATIM, VERBATIM_ROWS,
                         BetaDecomposition, BetaIndex, beta, beta_classical, beta_moment,
                         classical_coefficients, moment_mapping, row)

# rows re-typed in closed form, evaluated with mpmath as an independent reference
def _ref(key, x):
    x = mp.mpf(x)
    E = mp.e ** (-2 * x)
    Ei = -mp.e1(2 * x) if x > 0 else 0
    rows = {
        (0, 1): (1 + 2 * x + 4 * x ** 2) / 8 * E,
        (0, 2): (1 + 2 * x) / 4 * E,
        (2, 1): -(3 + 6 * x + 6 * x ** 2 + 4 * x ** 3) / 32 * E - x ** 4 / 4 * Ei,
        (2, 2): -(1 + 2 * x - 2 * x ** 2 + 4 * x ** 3) / 16 * E + x ** 2 * (1 - x ** 2 / 2) * Ei,
        (2, 3): -(3 + 6 * x + 2 * x ** 2 - 4 * x ** 3) / 32 * E + x ** 4 / 4 * Ei,
        (3, 1): (1 + 2 * x - 2 * x ** 2 + 4 * x ** 3) / 32 * E - x ** 2 / 4 * (2 - x ** 2) * Ei,
        (4, 1): (3 + 6 * x + 15 * x ** 2 + 22 * x ** 3 + 2 * x ** 4 - 4 * x ** 5) / 384 * E
        + x ** 4 / 48 * (6 - x ** 2) * Ei,
        (4, 3): (15 + 30 * x - 9 * x ** 2 + 70 * x ** 3 + 2 * x ** 4 - 4 * x ** 5) / 192 * E
        + x ** 4 / 24 * (18 - x ** 2) * Ei,
        (4, 4): (45 + 218 * x - 59 * x ** 2 + 146 * x ** 3 + 14 * x ** 4 - 28 * x ** 5) / 480 * E
        + x ** 4 / 60 * (40 - 7 * x ** 2) * Ei,
        (4, 5): (9 + 18 * x - 27 * x ** 2 + 50 * x ** 3 - 2 * x ** 4 + 4 * x ** 5) / 96 * E
        + x ** 4 * (1 + x ** 2 / 12) * Ei,
    }
    return float(rows[key])


UNCORRUPTED = [k for k in VALID_INDICES if k != (4, 2)]


@pytest.mark.parametrize("key", UNCORRUPTED)
@pytest.mark.parametrize("xi", [0.0, 0.01, 0.3, 1.0, 2.5, 7.0])
def test_rows_against_independent_evaluation(key, xi):
    assert beta(key, xi) == pytest.approx(_ref(key, xi), rel=1e-12, abs=1e-15)


def test_documented_values():
    assert beta((2, 2), 1.0) == pytest.approx(-0.066743, abs=5e-7)
    # (7/8) e^{-2}
    assert beta((0, 1), 1.0) == pytest.approx(7 / 8 * np.exp(-2), rel=1e-14)
    assert beta((0, 1), 0.0) == 0.125
    assert beta((2, 2), 0.0) == -1 / 16


def test_classical_limits_exact():
    expected = {(0, 1): Fr(1, 8), (0, 2): Fr(1, 4), (2, 1): Fr(-3, 32), (2, 2): Fr(-1, 16),
                (2, 3): Fr(-3, 32), (3, 1): Fr(1, 32), (4, 1): Fr(3, 384),
                (4, 2): Fr(-15, 960), (4, 3): Fr(15, 192), (4, 4): Fr(45, 480),
                (4, 5): Fr(9, 96)}
    for key, val in expected.items():
        assert beta_classical(key) == val
        assert isinstance(beta_classical(key), Fr)


@pytest.mark.parametrize("key", VALID_INDICES)
def test_moment_matches_mpmath_quadrature(key):
    r = row(key)
    num = mp.quad(lambda x: _mp_row(r, x), [0, 0.5, 2, mp.inf])
    assert float(beta_moment(key)) == pytest.approx(float(num), rel=1e-12)


def _mp_row(r, x):
    p = sum(mp.mpf(c.numerator) / c.denominator * x ** n for n, c in enumerate(r.exp_poly))
    q = sum(mp.mpf(c.numerator) / c.denominator * x ** n for n, c in enumerate(r.ei_poly))
    return p * mp.e ** (-2 * x) - (q * mp.e1(2 * x) if x > 0 else 0)


def test_recovered_row_content():
    r = RECOVERED_ROW_42
    assert r.provenance == RECOVERED
    assert r.exp_poly == VERBATIM_ROWS[(4, 2)].exp_poly
    assert r.ei_poly == (0, 0, Fr(-2), 0, Fr(7, 6), 0, Fr(-7, 120))
    assert r.moment() == Fr(-1, 120)
    assert row((4, 2)) is r
    assert row((4, 2), verbatim=True).provenance == VERBATIM


def test_verbatim_42_moment_is_far_off():
    m = beta_moment((4, 2), verbatim=True)
    assert abs(float(m) + 1 / 120) > 37


def test_moment_mapping_closed_form():
    m = moment_mapping()
    assert (m.flat_perp, m.flat_zz) == (Fr(1, 8), Fr(1, 8))
    assert (m.lin_perp, m.lin_zz, m.lin_aniso) == (Fr(-3, 40), Fr(-1, 15), Fr(-1, 40))
    assert m.grad == Fr(1, 30)
    assert (m.quad_sum_perp, m.quad_sum_zz) == (Fr(3, 280), Fr(-1, 240))
    assert (m.quad_sq_perp, m.quad_sq_zz) == (Fr(13, 280), Fr(3, 40))
    assert m.quad_aniso == Fr(9, 560)
    assert moment_mapping(verbatim=True).quad_sum_zz != Fr(-1, 240)


def test_classical_coefficients():
    c = classical_coefficients()
    assert c["xx"] == {"1": Fr(1, 8), "c1": Fr(-9, 64), "c2": Fr(-3, 64),
                       "c1^2": Fr(17, 128), "c2^2": Fr(5, 128), "c1*c2": Fr(2, 128)}
    assert c["zz"] == {"1": Fr(1, 4), "c1": Fr(-1, 16), "c2": Fr(-1, 16),
                       "c1^2": Fr(5, 64), "c2^2": Fr(5, 64), "c1*c2": Fr(-2, 64)}
    assert c["yy"]["c1"] == c["xx"]["c2"]


@pytest.mark.parametrize("bad", [(1, 1), (0, 3), (3, 2), (4, 6), (5, 1)])
def test_invalid_index(bad):
    with pytest.raises(IndexError):
        BetaIndex(*bad)
    with pytest.raises(IndexError):
        beta(bad, 0.5)


def test_negative_xi_rejected():
    with pytest.raises(ValueError):
        beta((0, 1), -0.1)


def test_ei_polynomial_must_start_at_xi_squared():
    with pytest.raises(ValueError):
        BetaDecomposition((Fr(1),), (Fr(0), Fr(1)))


@given(st.sampled_from(VALID_INDICES), st.floats(min_value=0, max_value=30))
def test_parts_sum_and_array_consistency(key, xi):
    r = row(key)
    assert float(r.exp_part(xi) + r.ei_part(xi)) == pytest.approx(beta(key, xi), abs=1e-15)
    arr = beta(key, np.array([xi, xi]))
    assert arr.shape == (2,) and arr[0] == beta(key, xi)


@given(st.sampled_from(VALID_INDICES))
def test_continuity_at_zero(key):
    assert beta(key, 1e-9) == pytest.approx(float(beta_classical(key)), abs=1e-7)
