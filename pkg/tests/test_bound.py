import math

import numpy as np
import pytest

from qthresh import (AccuracySpec, ChannelKind, ScalingLaw, binary_entropy,
                     capacity_cost, error_lower_bound, holevo, objective,
                     redundancy_lower_bound)

ERA = ChannelKind.ERASURE
DEP = ChannelKind.DEPOLARIZING

# frozen from 40-digit evaluations of the defining formulas
C_128 = 0.8963359719250837
C_RF0 = -0.0036640280749162595
EPS_STAR_96_128 = 0.2437405812859270  # root of eps = 1 - (96 + h2(eps))/128


def test_accuracy_spec_validation():
    with pytest.raises(ValueError):
        AccuracySpec(0.0, 128, 128)
    with pytest.raises(ValueError):
        AccuracySpec(0.5, 128, 128)
    with pytest.raises(ValueError):
        AccuracySpec(0.1, 129, 128)  # range larger than 2**n
    with pytest.raises(ValueError):
        AccuracySpec(0.1, 10, 0)


def test_capacity_cost_values(spec128):
    assert capacity_cost(spec128) == pytest.approx(C_128, abs=1e-12)
    assert capacity_cost(AccuracySpec(0.1, 0.0, 128)) == pytest.approx(C_RF0, abs=1e-12)
    # eps -> 0 with log2_rf = n approaches 1
    assert capacity_cost(AccuracySpec(1e-12, 128, 128)) == pytest.approx(1.0, abs=1e-9)


def test_capacity_cost_decreasing_in_eps():
    eps = np.linspace(1e-4, 0.4999, 300)
    vals = [capacity_cost(AccuracySpec(float(e), 64, 128)) for e in eps]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_objective_composition(spec128):
    flat = ScalingLaw.constant(0.0)
    c = capacity_cost(spec128)
    assert objective(ERA, flat, spec128, 1.0) == pytest.approx(c - 1.0, abs=1e-12)
    law = ScalingLaw.polynomial(0.1, 1, 1)
    assert objective(ERA, law, spec128, 2.0) == pytest.approx(-0.3518320140374582, abs=1e-9)
    # saturated noise leaves only the positive 1/k term
    sat = ScalingLaw.constant(1.0)
    assert objective(ERA, sat, spec128, 4.0) == pytest.approx(c / 4.0, abs=1e-12)


def test_objective_accepts_arrays(spec128):
    law = ScalingLaw.polynomial(0.1, 1, 1)
    ks = np.linspace(1.0, 8.0, 15)
    arr = objective(ERA, law, spec128, ks)
    for k, v in zip(ks, arr):
        assert v == pytest.approx(objective(ERA, law, spec128, float(k)), abs=1e-14)


def test_redundancy_lower_bound_cases():
    near_zero_eps = AccuracySpec(1e-9, 128, 128)
    res = redundancy_lower_bound(ERA, 0.5, near_zero_eps)
    assert res.status == "ok"
    assert res.n_min == pytest.approx(256.0, rel=1e-6)

    spec = AccuracySpec(0.1, 64, 128)
    res = redundancy_lower_bound(DEP, 0.0, spec)
    assert res.status == "ok"
    assert res.n_min == pytest.approx(128 * capacity_cost(spec), abs=1e-12)

    res = redundancy_lower_bound(DEP, 1.0, spec)
    assert res.status == "infeasible"
    assert math.isinf(res.n_min)

    vac = AccuracySpec(0.1, 0.0, 128)
    res = redundancy_lower_bound(ERA, 0.3, vac)
    assert res.status == "vacuous"
    assert res.n_min < 0.0


def test_error_lower_bound_zero_when_capacity_covers_range():
    assert error_lower_bound(ERA, ScalingLaw.constant(0.0), 1.0, 128, 128).epsilon == 0.0
    res = error_lower_bound(ERA, ScalingLaw.constant(0.5), 2.0, 128, 128)
    assert res.epsilon == 0.0 and not res.saturated


def test_error_lower_bound_root_value():
    res = error_lower_bound(ERA, ScalingLaw.constant(0.5), 1.5, 128, 128)
    assert not res.saturated
    assert res.epsilon == pytest.approx(EPS_STAR_96_128, abs=1e-6)


def test_error_lower_bound_matches_grid_scan_oracle():
    # independent oracle: scan eps on a 1e-6 grid for the first non-negative residual
    k, log2rf, n = 1.5, 128.0, 128
    cap = k * n * holevo(ERA, 0.5)
    eps = np.arange(0.0, 0.5, 1e-6)
    h = np.zeros_like(eps)
    mask = eps > 0
    h[mask] = -eps[mask] * np.log2(eps[mask]) - (1 - eps[mask]) * np.log2(1 - eps[mask])
    residual = eps - 1.0 + (cap + h) / log2rf
    first = float(eps[int(np.argmax(residual >= 0.0))])
    res = error_lower_bound(ERA, ScalingLaw.constant(0.5), k, log2rf, n)
    assert res.epsilon == pytest.approx(first, abs=2e-6)


def test_error_lower_bound_saturation():
    # chi = 0.4 at k = 1: K + 1 < R/2, no root below 1/2
    res = error_lower_bound(ERA, ScalingLaw.constant(0.6), 1.0, 128, 128)
    assert res.saturated and res.epsilon == 0.5


def test_error_lower_bound_rejects_zero_range():
    with pytest.raises(ValueError):
        error_lower_bound(ERA, ScalingLaw.constant(0.5), 1.0, 0.0, 128)


def test_error_lower_bound_monotone_in_k_for_constant_laws():
    law = ScalingLaw.constant(0.3)
    ks = np.linspace(1.0, 6.0, 40)
    vals = [error_lower_bound(ERA, law, float(k), 128, 128).epsilon for k in ks]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_error_lower_bound_saturates_after_noise_clamp():
    # growing noise eventually saturates the law and the floor sticks at 1/2
    law = ScalingLaw.polynomial(0.5, 1.0, 1.0)  # p = 1 at k = 2
    res = error_lower_bound(ERA, law, 3.0, 128, 128)
    assert res.saturated and res.epsilon == 0.5


def test_objective_sign_vs_redundancy_bound_consistency(spec128):
    # a negative objective at (k, p0) means the required N at noise p(k) is < k*n
    law = ScalingLaw.polynomial(0.1, 1.0, 1.0)
    c = capacity_cost(spec128)
    for k in np.linspace(1.0, 9.5, 18):
        k = float(k)
        val = objective(ERA, law, spec128, k)
        if val < 0.0:
            res = redundancy_lower_bound(ERA, law.noise_at(k), spec128)
            assert res.status == "ok"
            assert res.n_min < k * spec128.n
