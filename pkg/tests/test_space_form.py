import numpy as np
import pytest

from frameforge.pseudo_metric import inner
from frameforge.space_form import (SpaceForm, contains,
                                   principal_normal_geodesic,
                                   project_to_form, signature_for)


def test_signature_for():
    assert signature_for(0, 1) == 0
    assert signature_for(1, 1) == 1
    assert signature_for(0, -1) == 1
    assert signature_for(1, -1) == 2
    with pytest.raises(ValueError):
        signature_for(2, 1)
    with pytest.raises(ValueError):
        signature_for(0, 2)


def test_space_form_derives_index():
    assert SpaceForm(0, 1).v == 0
    assert SpaceForm(1, -1).v == 2


def test_contains():
    sphere = SpaceForm(0, 1)
    assert contains([1.0, 0.0, 0.0, 0.0], sphere)
    assert not contains([1.1, 0.0, 0.0, 0.0], sphere)
    hyp = SpaceForm(0, -1)
    assert contains([1.0, 0.0, 0.0, 0.0], hyp)  # <x,x> = -1 under v=1
    assert contains([1.0 + 4e-10, 0.0, 0.0, 0.0], sphere)  # within tol
    assert not contains([1.0 + 5e-9, 0.0, 0.0, 0.0], sphere)


def test_project_to_form():
    sphere = SpaceForm(0, 1)
    p = project_to_form(np.array([3.0, 4.0, 0.0, 0.0]), sphere)
    assert contains(p, sphere)
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(20, 4)) + 2.0
    proj = project_to_form(pts, sphere)
    assert np.allclose(inner(proj, proj, 0), 1.0)
    with pytest.raises(ValueError):
        project_to_form(np.zeros(4), sphere)


def test_principal_normal_geodesic_trig_case():
    sphere = SpaceForm(0, 1)
    gamma = np.array([1.0, 0.0, 0.0, 0.0])
    n = np.array([0.0, 1.0, 0.0, 0.0])
    t = np.linspace(0, 2 * np.pi, 50)
    curve = principal_normal_geodesic(gamma, n, t, eps2=1, form=sphere)
    # eps2 * c = 1: circular arc staying on the form
    assert np.allclose(inner(curve, curve, 0), 1.0, atol=1e-12)
    assert np.allclose(curve[0], gamma)


def test_principal_normal_geodesic_hyperbolic_case():
    hyp = SpaceForm(0, -1)
    gamma = np.array([1.0, 0.0, 0.0, 0.0])
    n = np.array([0.0, 1.0, 0.0, 0.0])
    t = np.linspace(0.0, 1.0, 20)
    curve = principal_normal_geodesic(gamma, n, t, eps2=1, form=hyp)
    # eps2 * c = -1: (cosh, sinh) branch, stays on <x,x> = -1
    assert np.allclose(inner(curve, curve, 1), -1.0, atol=1e-12)


def test_principal_normal_geodesic_validation():
    sphere = SpaceForm(0, 1)
    gamma = np.array([1.0, 0.0, 0.0, 0.0])
    n = np.array([0.0, 1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        principal_normal_geodesic(2 * gamma, n, 0.1, eps2=1, form=sphere)
    with pytest.raises(ValueError):
        principal_normal_geodesic(gamma, gamma, 0.1, eps2=1, form=sphere)
    with pytest.raises(ValueError):
        principal_normal_geodesic(gamma, 2 * n, 0.1, eps2=1, form=sphere)
    with pytest.raises(ValueError):
        principal_normal_geodesic(gamma, n, 0.1, eps2=0, form=sphere)
