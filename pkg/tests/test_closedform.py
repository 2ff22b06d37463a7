import numpy as np
import pytest

from qthresh import (BRANCH_BOUNDARY, BRANCH_INTERIOR, ChannelKind, ScalingLaw,
                     erasure_threshold_linear, erasure_threshold_power, holevo,
                     threshold_branch)

# frozen from 40-digit evaluations at c = capacity cost of (0.1, 128, 128)
LINEAR_A005 = 0.6840251934933516
POWER_G05 = 0.4065488160053750


def _power_law_objective_min(p_th: float, gamma: float, c: float, steps: int = 200_001):
    """Grid minimum of c/k + p0*k**gamma - 1 over the unsaturated range."""
    k_hi = (1.0 / p_th) ** (1.0 / gamma)
    ks = np.linspace(1.0, k_hi, steps)
    return float(np.min(c / ks + p_th * ks**gamma - 1.0))


def _linear_law_objective_min(p_th: float, alpha: float, c: float, steps: int = 200_001):
    k_hi = 1.0 + (1.0 / p_th - 1.0) / alpha
    ks = np.linspace(1.0, k_hi, steps)
    return float(np.min(c / ks + p_th * (1.0 + alpha * (ks - 1.0)) - 1.0))


def test_branch_selection():
    assert threshold_branch(1.0, 0.5) == BRANCH_BOUNDARY  # c/(1-c) = 1
    assert threshold_branch(0.999, 0.5) == BRANCH_INTERIOR
    assert erasure_threshold_linear(1.0, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_linear_values(c128):
    assert erasure_threshold_linear(10.0, c128) == pytest.approx(1.0 - c128, abs=1e-9)
    assert erasure_threshold_linear(0.05, c128) == pytest.approx(LINEAR_A005, abs=1e-9)


def test_power_values(c128):
    assert erasure_threshold_power(10.0, c128) == pytest.approx(1.0 - c128, abs=1e-9)
    assert erasure_threshold_power(0.5, c128) == pytest.approx(POWER_G05, abs=1e-9)
    # gamma -> 0: the threshold tends to 1 (constant noise violates only at p0 = 1)
    assert erasure_threshold_power(1e-9, 0.25) == pytest.approx(1.0, abs=1e-6)


def test_cost_out_of_range_rejected():
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            erasure_threshold_linear(1.0, bad)
        with pytest.raises(ValueError):
            erasure_threshold_power(1.0, bad)


@pytest.mark.parametrize("c", [0.3, 0.55, 0.8963359719250837])
def test_branch_continuity(c):
    crossover = c / (1.0 - c)
    assert erasure_threshold_linear(crossover, c) == pytest.approx(1.0 - c, abs=1e-9)
    assert erasure_threshold_power(crossover, c) == pytest.approx(1.0 - c, abs=1e-9)
    # approaching from the interior side agrees too
    assert erasure_threshold_linear(crossover * (1 - 1e-9), c) == pytest.approx(1.0 - c, abs=1e-6)
    assert erasure_threshold_power(crossover * (1 - 1e-9), c) == pytest.approx(1.0 - c, abs=1e-6)


def test_alpha_one_removable_singularity(c128):
    # the textbook surd is 0/0 at alpha = 1; the quadratic route gives 1/(4c)
    assert erasure_threshold_linear(1.0, c128) == pytest.approx(1.0 / (4.0 * c128), abs=1e-12)
    left = erasure_threshold_linear(1.0 - 1e-7, c128)
    right = erasure_threshold_linear(1.0 + 1e-7, c128)
    assert left == pytest.approx(right, rel=1e-5)
    assert erasure_threshold_linear(1.0, c128) == pytest.approx(left, rel=1e-5)


@pytest.mark.parametrize("c", [0.4, 0.7])
def test_monotone_in_growth_parameter(c):
    grid = np.linspace(0.05, 3.0 * c / (1.0 - c), 60)
    lin = [erasure_threshold_linear(float(a), c) for a in grid]
    pwr = [erasure_threshold_power(float(g), c) for g in grid]
    for seq in (lin, pwr):
        assert all(b <= a + 1e-12 for a, b in zip(seq, seq[1:]))
        assert all(0.0 < v <= 1.0 for v in seq)


@pytest.mark.parametrize("alpha", [0.05, 0.6, 1.0, 3.0, 12.0])
def test_linear_threshold_consistent_with_definition(alpha, c128):
    p_th = erasure_threshold_linear(alpha, c128)
    assert _linear_law_objective_min(p_th, alpha, c128) >= -1e-6
    assert _linear_law_objective_min(p_th - 1e-3, alpha, c128) < 0.0


@pytest.mark.parametrize("gamma", [0.3, 1.0, 2.5, 10.0])
def test_power_threshold_consistent_with_definition(gamma, c128):
    p_th = erasure_threshold_power(gamma, c128)
    assert _power_law_objective_min(p_th, gamma, c128) >= -1e-6
    assert _power_law_objective_min(p_th - 1e-3, gamma, c128) < 0.0


def test_power_law_oracle_uses_same_objective(c128):
    # the grid helper above must agree with the packaged objective pieces
    gamma, p0 = 1.4, 0.21
    law = ScalingLaw.polynomial(p0, 1.0, gamma)
    ks = np.linspace(1.0, law.k_max(), 501)
    via_price = c128 / ks - holevo(ChannelKind.ERASURE, law.noise_at(ks))
    direct = c128 / ks + p0 * ks**gamma - 1.0
    assert np.allclose(via_price, direct, atol=1e-12)
