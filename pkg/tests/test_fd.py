import numpy as np
import pytest

from frameforge.fd import DerivConfig, derivative, stencil_weights


def test_config_validation():
    DerivConfig(order=2)
    DerivConfig(order=4)
    with pytest.raises(ValueError):
        DerivConfig(order=3)


def test_stencil_weights_central_first():
    w = stencil_weights([-1, 0, 1], deriv=1)
    assert np.allclose(w, [-0.5, 0.0, 0.5])


def test_stencil_weights_central_second():
    w = stencil_weights([-1, 0, 1], deriv=2)
    assert np.allclose(w, [1.0, -2.0, 1.0])


@pytest.mark.parametrize("acc", [2, 4])
@pytest.mark.parametrize("deriv", [1, 2])
def test_exact_on_polynomials(acc, deriv):
    # A degree-acc polynomial is differentiated exactly (including the
    # one-sided boundary rows, which carry an extra point).
    x = np.linspace(0.0, 1.0, 21)
    h = x[1] - x[0]
    coeffs = np.array([0.3, -1.2, 2.0, 0.7, -0.4][: acc + 1])
    f = np.polyval(coeffs, x)
    expected = np.polyval(np.polyder(coeffs, deriv), x)
    got = derivative(f, h, deriv=deriv, acc=acc)
    assert np.abs(got - expected).max() < 1e-10


@pytest.mark.parametrize("acc,rate", [(2, 4.0), (4, 16.0)])
def test_convergence_order(acc, rate):
    def err(n):
        x = np.linspace(0.0, 1.0, n)
        got = derivative(np.sin(3 * x), x[1] - x[0], deriv=1, acc=acc)
        return np.abs(got - 3 * np.cos(3 * x)).max()

    e1, e2 = err(101), err(201)
    assert e1 / e2 > 0.7 * rate


def test_derivative_along_axis():
    x = np.linspace(0, 1, 31)
    f = np.sin(x)[None, :, None] * np.ones((4, 1, 5))
    d = derivative(f, x[1] - x[0], axis=1, deriv=1)
    assert d.shape == f.shape
    assert np.abs(d[2, :, 3] - np.cos(x)).max() < 1e-6


def test_too_few_samples():
    with pytest.raises(ValueError):
        derivative(np.zeros(4), 0.1, deriv=1, acc=4)
    with pytest.raises(ValueError):
        derivative(np.zeros(5), 0.1, deriv=3, acc=2)
