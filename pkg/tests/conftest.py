"""Shared fixtures: seeded RNGs and admissible-parameter samplers."""

import math

import numpy as np
import pytest

from chemolab.exponents import chi_star, p_max


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def sample_admissible_chik(rng, n, k_lo=0.05, k_hi=20.0, frac_lo=0.05, frac_hi=0.9):
    """One (chi, k) with chi a safe fraction of chi_star(k, n)."""
    k = float(np.exp(rng.uniform(math.log(k_lo), math.log(k_hi))))
    chi = float(rng.uniform(frac_lo, frac_hi)) * chi_star(k, n)
    return chi, k


def sample_window_triple(rng, p_cap=40.0):
    """One (p, chi, k) with p strictly inside (1, p_max(chi, k)).

    chi < 1 is exactly the condition p_max > 1, so chi is drawn below 1 and
    p is placed at a random fraction of the (capped) admissible range.
    """
    k = float(np.exp(rng.uniform(math.log(0.05), math.log(20.0))))
    chi = float(rng.uniform(0.02, 0.98))
    pm = p_max(chi, k)
    hi = min(pm, p_cap) * 0.98
    p = 1.0 + float(rng.uniform(0.02, 1.0)) * (hi - 1.0)
    return p, chi, k
