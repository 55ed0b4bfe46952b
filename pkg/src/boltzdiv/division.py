"""Exponential-weight allocation kernels.

A cake unit goes to player j with probability proportional to
``exp(beta * E_j)`` (times the player's weight on the unit's flavor for a
flavored cake). The kernels return expected shares; :func:`sample_allocation`
draws discrete units and is meant as a cross-check.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    HeterogeneousProblemGiven,
    HomogeneousProblemGiven,
    NegativeBeta,
    NonFiniteInput,
)
from .model import Allocation, DivisionProblem


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta):
        raise NonFiniteInput(f"beta must be finite, got {beta!r}")
    if beta < 0:
        raise NegativeBeta(f"beta must be >= 0, got {beta!r}")
    return beta


def homogeneous_probabilities(contributions, beta: float) -> np.ndarray:
    """Softmax of ``beta * contributions`` with max-shift stabilization."""
    beta = _check_beta(beta)
    e = np.asarray(contributions, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise ValueError("contributions must be a non-empty vector")
    if not np.all(np.isfinite(e)):
        raise NonFiniteInput("contributions must be finite")
    z = beta * e
    w = np.exp(z - z.max())
    return w / w.sum()


def homogeneous_allocation(problem: DivisionProblem, beta: float) -> Allocation:
    if problem.is_heterogeneous:
        raise HeterogeneousProblemGiven("use heterogeneous_allocation for a flavored cake")
    p = homogeneous_probabilities(problem.contributions, beta)
    return Allocation(problem.cake_size * p)


def flavor_probabilities(problem: DivisionProblem, beta: float) -> np.ndarray:
    """n x m matrix whose column i is the allocation law of a flavor-i unit."""
    if not problem.is_heterogeneous:
        raise HomogeneousProblemGiven("flavor probabilities need a flavored cake")
    beta = _check_beta(beta)
    e = problem.contributions
    if not np.all(np.isfinite(e)):
        raise NonFiniteInput("contributions must be finite")
    w = problem.preferences.as_array()
    z = np.broadcast_to((beta * e)[:, None], w.shape)
    claimed = w > 0
    # shift each column by its max over claimants only
    shift = np.where(claimed, z, -np.inf).max(axis=0)
    a = np.where(claimed, w * np.exp(np.where(claimed, z - shift, 0.0)), 0.0)
    return a / a.sum(axis=0)


def heterogeneous_allocation(problem: DivisionProblem, beta: float) -> Allocation:
    p = flavor_probabilities(problem, beta)
    sizes = np.asarray(problem.layout.sizes, dtype=float)
    per_flavor = p * sizes[None, :]
    return Allocation(per_flavor.sum(axis=1), per_flavor)


def allocate(problem: DivisionProblem, beta: float) -> Allocation:
    """Dispatch to the homogeneous or flavored kernel."""
    if problem.is_heterogeneous:
        return heterogeneous_allocation(problem, beta)
    return homogeneous_allocation(problem, beta)


def _split_units(units: int, sizes: np.ndarray) -> np.ndarray:
    # largest-remainder apportionment so the flavor counts add up to `units`
    quota = units * sizes / sizes.sum()
    base = np.floor(quota).astype(np.int64)
    short = units - int(base.sum())
    order = np.argsort(-(quota - base), kind="stable")
    base[order[:short]] += 1
    return base


def sample_allocation(
    problem: DivisionProblem, beta: float, units: int, seed=None
) -> Allocation:
    """Monte Carlo realization: hand out ``units`` discrete cake units.

    Each unit is a categorical draw from the relevant probability vector.
    Counts are rescaled so the result is in cake units (sums to cake_size).
    For flavored cakes the units are first apportioned across flavors in
    proportion to the flavor sizes.
    """
    units = int(units)
    if units < 1:
        raise ValueError(f"units must be >= 1, got {units}")
    rng = np.random.default_rng(seed)
    scale = problem.cake_size / units
    if not problem.is_heterogeneous:
        p = homogeneous_probabilities(problem.contributions, beta)
        counts = rng.multinomial(units, p)
        return Allocation(counts * scale)

    p = flavor_probabilities(problem, beta)
    per_flavor_units = _split_units(units, np.asarray(problem.layout.sizes))
    counts = np.zeros_like(p)
    for i, k in enumerate(per_flavor_units):
        if k:
            counts[:, i] = rng.multinomial(int(k), p[:, i])
    per_flavor = counts * scale
    return Allocation(per_flavor.sum(axis=1), per_flavor)
