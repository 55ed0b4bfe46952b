import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boltzdiv.division import (
    allocate,
    flavor_probabilities,
    heterogeneous_allocation,
    homogeneous_allocation,
    homogeneous_probabilities,
    sample_allocation,
)
from boltzdiv.errors import HeterogeneousProblemGiven, HomogeneousProblemGiven, NegativeBeta, NonFiniteInput
from boltzdiv.model import make_problem

from conftest import REF_D, REF_E


def softmax_oracle(e, beta):
    """High-precision direct evaluation, no max shift."""
    with mp.workdps(40):
        w = [mp.e ** (mp.mpf(beta) * mp.mpf(x)) for x in e]
        s = mp.fsum(w)
        return np.array([float(x / s) for x in w])


contributions = st.lists(st.floats(0, 50), min_size=1, max_size=7)
betas = st.floats(0, 2)


def test_reference_probabilities():
    p = homogeneous_probabilities(REF_E, 0.0288)
    np.testing.assert_allclose(p, [0.12, 0.14, 0.19, 0.22, 0.33], atol=0.005)
    np.testing.assert_allclose(p, softmax_oracle(REF_E, 0.0288), rtol=1e-13)


def test_beta_zero_is_uniform():
    np.testing.assert_array_equal(homogeneous_probabilities([3, 1, 4, 1, 5], 0.0), [0.2] * 5)


def test_closed_form_two_players():
    np.testing.assert_allclose(homogeneous_probabilities([0, 1], math.log(2)), [1 / 3, 2 / 3], rtol=1e-15)


def test_rejects_negative_and_nonfinite():
    with pytest.raises(NegativeBeta):
        homogeneous_probabilities([1, 2], -0.1)
    with pytest.raises(NonFiniteInput):
        homogeneous_probabilities([1, float("inf")], 0.1)
    with pytest.raises(NonFiniteInput):
        homogeneous_probabilities([1, 2], float("nan"))


def test_reference_homogeneous_allocation(reference_homog):
    a = homogeneous_allocation(reference_homog, 0.0288)
    np.testing.assert_allclose(a.per_player, [12.17, 14.06, 18.75, 21.66, 33.36], atol=0.01)
    assert a.per_flavor is None


def test_egalitarian_at_beta_zero(reference_homog):
    np.testing.assert_allclose(homogeneous_allocation(reference_homog, 0).per_player, [20] * 5, rtol=1e-15)


@pytest.mark.parametrize("beta", [0.0, 0.1, 5.0, 1e6])
def test_single_player_gets_everything(beta):
    p = make_problem([7], [3], cake_size=42)
    assert homogeneous_allocation(p, beta).per_player[0] == pytest.approx(42, rel=1e-15)


def test_kernel_kind_guards(reference_homog, reference_hetero):
    with pytest.raises(HeterogeneousProblemGiven):
        homogeneous_allocation(reference_hetero, 0.1)
    with pytest.raises(HomogeneousProblemGiven):
        flavor_probabilities(reference_homog, 0.1)


def test_reference_flavor_probabilities(reference_hetero):
    p = flavor_probabilities(reference_hetero, 0.0286)
    assert p[2, 1] == pytest.approx(0.56, abs=0.005)
    np.testing.assert_allclose(p.sum(axis=0), 1.0, atol=1e-12)


def test_reference_heterogeneous_allocation(reference_hetero):
    a = heterogeneous_allocation(reference_hetero, 0.0286)
    np.testing.assert_allclose(a.per_player, [13.67, 12.44, 13.94, 28.75, 31.19], atol=0.01)
    np.testing.assert_allclose(a.per_flavor[:, 3], [5.50, 0, 0, 19.50, 0], atol=0.01)
    np.testing.assert_allclose(a.per_flavor.sum(axis=1), a.per_player, rtol=1e-15)
    np.testing.assert_allclose(a.per_flavor.sum(axis=0), [25] * 4, rtol=1e-12)


def test_single_claimant_takes_whole_flavor():
    p = make_problem([1, 50, 3], [1, 1, 1], weights=[[0.5, 0.5], [1, 0], [1, 0]])
    probs = flavor_probabilities(p, 0.7)
    np.testing.assert_array_equal(probs[:, 1], [1, 0, 0])


def test_uniform_weights_reduce_to_homogeneous():
    rng = np.random.default_rng(3)
    e = rng.uniform(0, 30, 6)
    het = make_problem(e, [5] * 6, weights=np.full((6, 3), 1 / 3))
    hom = make_problem(e, [5] * 6)
    for beta in (0.0, 0.05, 0.3):
        p = flavor_probabilities(het, beta)
        for col in p.T:
            np.testing.assert_allclose(col, homogeneous_probabilities(e, beta), atol=1e-15)
        np.testing.assert_allclose(allocate(het, beta).per_player, allocate(hom, beta).per_player, rtol=1e-13)


def test_no_overflow_for_huge_exponents():
    p = homogeneous_probabilities([0, 1000, 2000], 10.0)
    np.testing.assert_array_equal(p, [0, 0, 1])
    q = flavor_probabilities(make_problem([0, 1000], [1, 1], weights=[[1, 0], [0.5, 0.5]]), 10.0)
    assert np.all(np.isfinite(q))


@given(contributions, betas)
def test_normalization_and_positivity(e, beta):
    p = homogeneous_probabilities(e, beta)
    assert abs(p.sum() - 1) <= 1e-12
    assert np.all(p <= 1)
    if beta * (max(e) - min(e)) < 700:
        assert np.all(p > 0)


@given(contributions, betas, st.floats(-20, 20))
def test_shift_invariance(e, beta, c):
    a = homogeneous_probabilities(e, beta)
    b = homogeneous_probabilities(np.asarray(e) + c, beta)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@given(contributions, st.floats(0, 1), st.floats(0.01, 10))
def test_scale_duality(e, beta, s):
    a = homogeneous_probabilities(np.asarray(e) * s, beta)
    b = homogeneous_probabilities(e, s * beta)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@given(st.lists(st.floats(0, 50), min_size=2, max_size=7, unique=True), st.floats(1e-3, 2))
def test_monotone_in_contribution(e, beta):
    p = homogeneous_probabilities(e, beta)
    order = np.argsort(e)
    gaps = np.diff(np.asarray(e)[order])
    # strict ordering, once the gap is resolvable in double precision
    resolvable = beta * gaps > 1e-12
    assert np.all(np.diff(p[order])[resolvable] > 0)


def test_top_share_grows_with_beta(reference_homog):
    shares = [homogeneous_allocation(reference_homog, b).per_player[-1] for b in np.linspace(0, 3, 200)]
    assert np.all(np.diff(shares) >= 0)


def test_large_beta_limit(reference_homog):
    beta = 40 / (40 - 25)
    top = homogeneous_allocation(reference_homog, beta).per_player[-1]
    assert top >= 100 * (1 - 1e-12)


def test_zero_contributor_gets_positive_share():
    p = make_problem([0, 10, 20], [1, 1, 1])
    assert allocate(p, 0.5).per_player[0] > 0


def test_permuting_players_permutes_allocation(reference_hetero):
    rng = np.random.default_rng(11)
    base = allocate(reference_hetero, 0.05)
    for _ in range(10):
        order = rng.permutation(5)
        moved = allocate(reference_hetero.permuted(order), 0.05)
        np.testing.assert_allclose(moved.per_player, base.per_player[order], rtol=1e-14)
        np.testing.assert_allclose(moved.per_flavor, base.per_flavor[order], rtol=1e-14, atol=1e-15)


# --- Monte Carlo sampler ---------------------------------------------------


def test_sampler_uniform_two_players():
    p = make_problem([1, 2], [1, 1])
    units = 10**6
    a = sample_allocation(p, 0.0, units, seed=123)
    sigma = 100 * math.sqrt(0.25 / units)  # binomial sd of a share, in cake units
    assert abs(a.per_player[0] - 50) <= 3 * sigma
    assert a.total == pytest.approx(100)


def test_sampler_matches_kernel(reference_homog, reference_hetero):
    a = sample_allocation(reference_homog, 0.0288, 10**6, seed=2024)
    np.testing.assert_allclose(a.per_player, allocate(reference_homog, 0.0288).per_player, atol=0.2)
    h = sample_allocation(reference_hetero, 0.0286, 10**6, seed=2024)
    np.testing.assert_allclose(h.per_flavor, allocate(reference_hetero, 0.0286).per_flavor, atol=0.2)
    assert h.per_flavor[2, 0] == 0  # zero-weight cells never receive units


def test_sampler_single_unit_single_player():
    a = sample_allocation(make_problem([3], [1]), 0.2, 1, seed=0)
    assert a.per_player.tolist() == [100.0]


def test_sampler_is_deterministic_given_seed(reference_hetero):
    a = sample_allocation(reference_hetero, 0.03, 5000, seed=9)
    b = sample_allocation(reference_hetero, 0.03, 5000, seed=9)
    np.testing.assert_array_equal(a.per_flavor, b.per_flavor)


def test_sampler_rejects_zero_units(reference_homog):
    with pytest.raises(ValueError):
        sample_allocation(reference_homog, 0.1, 0)


@settings(max_examples=25)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_sampler_hands_out_every_unit(units, seed):
    p = make_problem([1, 5, 9], [1, 1, 1], weights=[[1, 0, 0], [0.2, 0.3, 0.5], [0, 0.5, 0.5]],
                     flavor_sizes=[10, 30, 60])
    a = sample_allocation(p, 0.1, units, seed=seed)
    assert a.total == pytest.approx(100)
    counts = a.per_flavor * units / 100
    np.testing.assert_allclose(counts, np.round(counts), atol=1e-9)
