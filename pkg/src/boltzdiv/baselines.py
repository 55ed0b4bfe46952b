"""Conventional division criteria and the side-by-side comparison report."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ZeroBasisSum
from .model import Allocation, DivisionProblem
from .optimize import Optimum
from .utility import utilities

BOLTZMANN = "Boltzmann"
EGALITARIAN = "Egalitarian"
PROP_CONTRIBUTION = "PropContribution"
PROP_NEED = "PropNeed"
# order doubles as the tie-break for per-player rankings
CRITERIA = (BOLTZMANN, EGALITARIAN, PROP_CONTRIBUTION, PROP_NEED)


def egalitarian_allocation(problem: DivisionProblem) -> Allocation:
    return Allocation(np.full(problem.n, problem.cake_size / problem.n))


def proportional_allocation(problem: DivisionProblem, basis: str = "contribution") -> Allocation:
    """Shares linear in contributions (``basis="contribution"``) or needs (``"need"``)."""
    if basis == "contribution":
        v = problem.contributions
    elif basis == "need":
        v = problem.needs
    else:
        raise ValueError(f"basis must be 'contribution' or 'need', got {basis!r}")
    total = v.sum()
    if not total > 0:
        raise ZeroBasisSum(f"{basis} values sum to {total!r}; proportional split undefined")
    return Allocation(problem.cake_size * v / total)


def deficiency(allocation, players) -> np.ndarray:
    """Allocated share minus need, per player (negative = under-served)."""
    shares = allocation.per_player if isinstance(allocation, Allocation) else np.asarray(allocation, float)
    needs = np.array([p.need for p in players], dtype=float)
    if shares.shape != needs.shape:
        raise LengthMismatch(f"allocation has {shares.size} entries for {needs.size} players")
    return shares - needs


@dataclass(frozen=True, eq=False)
class CriterionResult:
    name: str
    allocation: Allocation
    deficiency: np.ndarray
    utilities: np.ndarray
    total_utility: float

    @property
    def share_range(self) -> float:
        s = self.allocation.per_player
        return float(s.max() - s.min())


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    player_ids: tuple[str, ...]
    contributions: np.ndarray
    needs: np.ndarray
    cake_size: float
    beta_star: float
    criteria: tuple[CriterionResult, ...]
    rankings: tuple[tuple[str, ...], ...]
    # flavored problems: baselines compare player totals only
    totals_only: bool = False

    def __getitem__(self, name: str) -> CriterionResult:
        for c in self.criteria:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def best_criterion(self) -> str:
        return max(self.criteria, key=lambda c: c.total_utility).name


def _result(name: str, allocation: Allocation, problem: DivisionProblem) -> CriterionResult:
    u = utilities(allocation.per_player, problem.needs, problem.amplitudes)
    return CriterionResult(
        name=name,
        allocation=allocation,
        deficiency=deficiency(allocation, problem.players),
        utilities=u,
        total_utility=float(u.sum()),
    )


def comparison_report(problem: DivisionProblem, optimum: Optimum) -> ComparisonReport:
    results = (
        _result(BOLTZMANN, optimum.allocation, problem),
        _result(EGALITARIAN, egalitarian_allocation(problem), problem),
        _result(PROP_CONTRIBUTION, proportional_allocation(problem, "contribution"), problem),
        _result(PROP_NEED, proportional_allocation(problem, "need"), problem),
    )
    shares = np.array([r.allocation.per_player for r in results])  # criteria x players
    rankings = []
    for j in range(problem.n):
        order = sorted(range(len(results)), key=lambda c: -shares[c, j])  # stable
        rankings.append(tuple(results[c].name for c in order))
    return ComparisonReport(
        player_ids=tuple(problem.ids),
        contributions=problem.contributions,
        needs=problem.needs,
        cake_size=problem.cake_size,
        beta_star=optimum.beta_star,
        criteria=results,
        rankings=tuple(rankings),
        totals_only=problem.is_heterogeneous,
    )
