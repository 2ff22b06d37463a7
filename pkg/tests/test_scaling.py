import math

import numpy as np
import pytest

from qthresh import LawKind, ScalingLaw


def test_noise_at_examples():
    assert ScalingLaw.polynomial(0.3, 0.5, 2).noise_at(1.0) == pytest.approx(0.3, abs=1e-15)
    assert ScalingLaw.polynomial(0.1, 1, 1).noise_at(2.0) == pytest.approx(0.2, abs=1e-15)
    assert ScalingLaw.exponential(0.5, 10, 1).noise_at(2.0) == 1.0  # clamped


def test_noise_at_requires_k_at_least_one():
    law = ScalingLaw.polynomial(0.1, 1, 1)
    with pytest.raises(ValueError):
        law.noise_at(0.5)


def test_constructor_validation():
    with pytest.raises(ValueError):
        ScalingLaw.polynomial(1.2, 1, 1)
    with pytest.raises(ValueError):
        ScalingLaw.polynomial(0.5, -1, 1)
    with pytest.raises(ValueError):
        ScalingLaw.exponential(0.5, 1, -2)


def test_degenerate_laws_normalize_to_constant():
    for law in (ScalingLaw.polynomial(0.4, 0.0, 2.0),
                ScalingLaw.polynomial(0.4, 2.0, 0.0),
                ScalingLaw.exponential(0.4, 0.0, 1.0),
                ScalingLaw.exponential(0.4, 1.0, 0.0)):
        assert law.kind is LawKind.CONSTANT
        assert law.noise_at(1.0) == 0.4
        assert law.noise_at(50.0) == 0.4


def test_noise_derivs_examples():
    d1, d2 = ScalingLaw.polynomial(0.1, 1, 1).noise_derivs(3.0)
    assert d1 == pytest.approx(0.1, abs=1e-15)
    assert d2 == pytest.approx(0.0, abs=1e-15)
    d1, d2 = ScalingLaw.constant(0.7).noise_derivs(5.0)
    assert (d1, d2) == (0.0, 0.0)
    d1, d2 = ScalingLaw.polynomial(0.1, 0.5, 2).noise_derivs(3.0)
    assert d1 == pytest.approx(0.2, abs=1e-12)
    assert d2 == pytest.approx(0.05, abs=1e-12)


@pytest.mark.parametrize("law", [
    ScalingLaw.polynomial(0.1, 0.5, 2.0),
    ScalingLaw.polynomial(0.2, 1.3, 0.7),
    ScalingLaw.exponential(0.05, 0.3, 1.5),
    ScalingLaw.exponential(0.02, 0.8, 1.0),
])
def test_noise_derivs_match_finite_differences(law):
    h1, h2 = 1e-5, 1e-4  # the second difference needs the larger step to beat roundoff
    k_hi = min(law.k_max(), 50.0)
    for k in np.linspace(1.5, k_hi - 0.5, 23):
        k = float(k)
        d1, d2 = law.noise_derivs(k)
        fd1 = (law.noise_at(k + h1) - law.noise_at(k - h1)) / (2 * h1)
        fd2 = (law.noise_at(k + h2) - 2 * law.noise_at(k) + law.noise_at(k - h2)) / h2**2
        assert d1 == pytest.approx(fd1, rel=1e-6, abs=1e-8)
        assert d2 == pytest.approx(fd2, rel=1e-4, abs=1e-6)


def test_noise_derivs_flagged_in_clamped_region():
    law = ScalingLaw.polynomial(0.5, 1.0, 1.0)  # saturates at k = 2
    with pytest.raises(ValueError):
        law.noise_derivs(3.0)


def test_k_max_examples():
    assert ScalingLaw.polynomial(0.25, 1, 1).k_max() == pytest.approx(4.0, abs=1e-12)
    assert ScalingLaw.polynomial(1.0, 1, 1).k_max() == 1.0
    assert ScalingLaw.constant(1.0).k_max() == 1.0
    assert ScalingLaw.exponential(0.5, math.log(2.0), 1).k_max() == pytest.approx(2.0, abs=1e-12)


def test_k_max_exponential_agrees_with_numeric_root():
    law = ScalingLaw.exponential(0.37, 0.9, 1.4)
    target = law.k_max()
    lo, hi = 1.0, 100.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if law.noise_at(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    assert target == pytest.approx(0.5 * (lo + hi), abs=1e-9)


def test_k_max_unbounded_sentinel():
    assert math.isinf(ScalingLaw.constant(0.3).k_max())
    assert math.isinf(ScalingLaw.polynomial(0.0, 1.0, 1.0).k_max())
    assert math.isinf(ScalingLaw.exponential(0.0, 1.0, 1.0).k_max())


@pytest.mark.parametrize("law", [
    ScalingLaw.polynomial(0.3, 0.7, 1.2),
    ScalingLaw.polynomial(0.02, 2.0, 0.4),
    ScalingLaw.exponential(0.15, 0.5, 2.0),
])
def test_saturation_consistency(law):
    kmx = law.k_max()
    assert math.isfinite(kmx)
    assert law.noise_at(kmx) == pytest.approx(1.0, abs=1e-9)
    ks = np.linspace(1.0, kmx * 1.5, 400)
    ps = law.noise_at(ks)
    assert np.all(np.diff(ps) >= -1e-12)
    assert np.all(ps <= 1.0)


def test_parameter_monotonicity():
    ks = np.linspace(1.0, 6.0, 25)
    base = ScalingLaw.polynomial(0.2, 0.8, 1.5)
    for bumped in (ScalingLaw.polynomial(0.25, 0.8, 1.5),
                   ScalingLaw.polynomial(0.2, 0.9, 1.5),
                   ScalingLaw.polynomial(0.2, 0.8, 1.7)):
        assert np.all(bumped.noise_at(ks) >= base.noise_at(ks) - 1e-12)
    base = ScalingLaw.exponential(0.1, 0.4, 1.1)
    for bumped in (ScalingLaw.exponential(0.12, 0.4, 1.1),
                   ScalingLaw.exponential(0.1, 0.5, 1.1)):
        assert np.all(bumped.noise_at(ks) >= base.noise_at(ks) - 1e-12)
    # exponential gamma bumps dominate only where the base k-1 is >= 1
    ks_far = ks[ks >= 2.0]
    bumped = ScalingLaw.exponential(0.1, 0.4, 1.3)
    assert np.all(bumped.noise_at(ks_far) >= base.noise_at(ks_far) - 1e-12)


def test_power_law_is_alpha_one_polynomial():
    # p0 * (1 + 1*(k-1))**g == p0 * k**g for every gamma
    law = ScalingLaw.polynomial(0.3, 1.0, 0.6)
    for k in np.linspace(1.0, 7.0, 31):
        assert law.noise_at(float(k)) == pytest.approx(
            min(0.3 * float(k) ** 0.6, 1.0), abs=1e-14)


def test_serialization_roundtrip():
    for law in (ScalingLaw.constant(0.25),
                ScalingLaw.polynomial(0.1, 0.5, 2.0),
                ScalingLaw.exponential(0.3, 1.0, 1.5)):
        assert ScalingLaw.from_dict(law.to_dict()) == law
    parsed = ScalingLaw.from_dict({"law": "polynomial", "p0": 0.1, "alpha": 1, "gamma": 1})
    assert parsed.kind is LawKind.POLYNOMIAL


def test_array_and_scalar_paths_agree():
    laws = [ScalingLaw.constant(0.4),
            ScalingLaw.polynomial(0.2, 0.7, 1.8),
            ScalingLaw.exponential(0.1, 0.6, 1.2)]
    ks = np.linspace(1.0, 9.0, 40)
    for law in laws:
        arr = law.noise_at(ks)
        for k, v in zip(ks, arr):
            assert v == pytest.approx(law.noise_at(float(k)), abs=1e-15)
