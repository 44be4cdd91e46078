import math

import numpy as np
import pytest

from openxxz.errors import QuadratureError
from openxxz.quadrature import cutoff_for, quad_semi_infinite


def test_exponential():
    value, err = quad_semi_infinite(lambda w: math.exp(-w), 1.0, 1e-12)
    assert abs(value - 1) < 1e-12
    assert err < 1e-11


@pytest.mark.parametrize("lam", [0.3, 1.0, 2.0])
def test_sine_transform_closed_form(lam):
    value, err = quad_semi_infinite(lambda w: math.sin(2 * w * lam) * math.exp(-w) / w, 1.0, 1e-12)
    assert abs(value - math.atan(2 * lam)) < 1e-12
    assert err < 1e-11


def test_error_monotone_in_tol():
    f = lambda w: math.sin(2 * w) * math.exp(-w) / w  # noqa: E731
    errs = [quad_semi_infinite(f, 1.0, tol)[1] for tol in (1e-6, 5e-7, 2.5e-7, 1e-9, 5e-10, 1e-12)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_error_bounds_actual_error():
    for tol in (1e-6, 1e-8, 1e-10):
        value, err = quad_semi_infinite(lambda w: math.sin(2 * w) * math.exp(-w) / w, 1.0, tol)
        assert abs(value - math.atan(2)) <= err


def test_complex_integrand():
    value, _ = quad_semi_infinite(lambda w: complex(math.exp(-w), 2 * math.exp(-2 * w)), 1.0, 1e-12,
                                  complex_valued=True)
    assert abs(value - (1 + 1j)) < 1e-12


def test_wrong_decay_model_detected():
    with pytest.raises(QuadratureError):
        quad_semi_infinite(lambda w: 1.0 / (1 + w), 1.0, 1e-10)


def test_cutoff_validation():
    with pytest.raises(QuadratureError):
        cutoff_for(0.0, 1e-10)
    with pytest.raises(ValueError):
        cutoff_for(1.0, -1.0)
    assert cutoff_for(2.0, 1e-10) == pytest.approx((math.log(1e10) + 5) / 2)
    assert np.isfinite(cutoff_for(0.1, 1e-14))
