"""Search for the division constant that maximizes total utility.

The search is a coarse grid over ``[0, beta_max]`` followed by golden-section
refinement around the best grid point. Interior optima are then polished by
bracketed root-finding on the analytic derivative of total utility, and the
result is certified with an independent central-difference slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .division import allocate, flavor_probabilities, homogeneous_probabilities
from .errors import HeterogeneousProblemGiven, InvalidSearchConfig
from .model import Allocation, DivisionProblem
from .utility import marginal_utilities, utilities

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# beta * (spread of contributions) beyond which the top share is >= 1 - 1e-12 of the cake
SATURATION_EXPONENT = 40.0
TIE_TOL = 1e-12


def default_beta_max(problem: DivisionProblem) -> float:
    e = problem.contributions
    spread = float(e.max() - e.min())
    return SATURATION_EXPONENT / spread if spread > 0 else 1.0


@dataclass(frozen=True)
class SearchConfig:
    """``beta_max=None`` means "use :func:`default_beta_max`"."""

    beta_max: Optional[float] = None
    grid_points: int = 256
    refine_tol: float = 1e-6

    def resolve(self, problem: DivisionProblem) -> "SearchConfig":
        beta_max = default_beta_max(problem) if self.beta_max is None else float(self.beta_max)
        if not (math.isfinite(beta_max) and beta_max > 0):
            raise InvalidSearchConfig(f"beta_max must be > 0, got {beta_max!r}")
        if int(self.grid_points) != self.grid_points or self.grid_points < 16:
            raise InvalidSearchConfig(f"grid_points must be an integer >= 16, got {self.grid_points!r}")
        if not (self.refine_tol > 0 and self.refine_tol < beta_max):
            raise InvalidSearchConfig(
                f"refine_tol must lie in (0, beta_max={beta_max}), got {self.refine_tol!r}"
            )
        return SearchConfig(beta_max, int(self.grid_points), float(self.refine_tol))


@dataclass(frozen=True)
class Optimum:
    beta_star: float
    allocation: Allocation
    total_utility: float
    boundary: bool
    extremum_residual: float
    degenerate: bool = False
    beta_max: float = math.nan
    grid_points: int = 0
    golden_iterations: int = 0
    polished: bool = False


@dataclass(frozen=True)
class UtilityCurve:
    samples: tuple[tuple[float, float], ...]

    @property
    def betas(self) -> np.ndarray:
        return np.array([b for b, _ in self.samples])

    @property
    def utilities(self) -> np.ndarray:
        return np.array([u for _, u in self.samples])

    def argmax(self) -> tuple[float, float]:
        """Sample with the largest utility (first one on ties)."""
        k = int(np.argmax(self.utilities))
        return self.samples[k]


@dataclass(frozen=True)
class SmallBetaReport:
    slopes: np.ndarray
    contributions: np.ndarray
    mean_slope: float
    mean_contribution: float
    lhs: float
    rhs: float
    predicts_interior_maximum: bool

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs


def total_utility_at(problem: DivisionProblem, beta: float) -> float:
    """U(beta): total utility of the allocation produced at ``beta``."""
    shares = allocate(problem, beta).per_player
    return float(np.sum(utilities(shares, problem.needs, problem.amplitudes)))


def utility_gradient(problem: DivisionProblem, beta: float) -> float:
    """Analytic dU/dbeta via the chain rule through the allocation kernel."""
    e = problem.contributions
    if problem.is_heterogeneous:
        p = flavor_probabilities(problem, beta)
        per_flavor = p * np.asarray(problem.layout.sizes)[None, :]
        mean_e = e @ p  # per-flavor expected contribution
        d_shares = (per_flavor * (e[:, None] - mean_e[None, :])).sum(axis=1)
        shares = per_flavor.sum(axis=1)
    else:
        p = homogeneous_probabilities(e, beta)
        shares = problem.cake_size * p
        d_shares = shares * (e - p @ e)
    slopes = marginal_utilities(shares, problem.needs, problem.amplitudes)
    return float(slopes @ d_shares)


def _numeric_slope(f: Callable[[float], float], beta: float, h: float) -> float:
    if beta >= h:
        return (f(beta + h) - f(beta - h)) / (2 * h)
    return (f(beta + h) - f(beta)) / h


def verify_extremum(problem: DivisionProblem, beta: float, h: float = 1e-5) -> float:
    """Central-difference estimate of dU/dbeta at ``beta`` (zero at an interior optimum)."""
    if not (h > 0 and beta >= h):
        raise ValueError(f"need beta >= h > 0, got beta={beta!r}, h={h!r}")
    return _numeric_slope(lambda b: total_utility_at(problem, b), beta, h)


def golden_section_max(f, a: float, b: float, tol: float):
    """Maximize a unimodal ``f`` on [a, b] until the bracket is narrower than ``tol``.

    Returns ``(x, f(x), lo, hi, iterations)`` where [lo, hi] is the final bracket.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol:
        it += 1
        if fc >= fd:  # ties keep the left half
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    return x, fx, a, b, it


def optimize_beta(
    problem: DivisionProblem,
    config: SearchConfig = SearchConfig(),
    executor=None,
) -> Optimum:
    """Find beta* = argmax_beta U(beta) on [0, beta_max].

    ``executor`` (anything with an order-preserving ``map``) may be supplied
    to evaluate the coarse grid in parallel; results are combined by index.
    """
    cfg = config.resolve(problem)
    f = lambda b: total_utility_at(problem, b)  # noqa: E731
    grid = np.linspace(0.0, cfg.beta_max, cfg.grid_points)
    mapper = map if executor is None else executor.map
    values = np.array(list(mapper(f, grid.tolist())))
    h = 1e-6 * cfg.beta_max

    u_max, u_min = float(values.max()), float(values.min())
    if u_max - u_min <= TIE_TOL * max(1.0, abs(u_max)):
        return Optimum(
            beta_star=0.0,
            allocation=allocate(problem, 0.0),
            total_utility=float(values[0]),
            boundary=True,
            extremum_residual=abs(_numeric_slope(f, 0.0, h)),
            degenerate=True,
            beta_max=cfg.beta_max,
            grid_points=cfg.grid_points,
        )

    k = int(np.flatnonzero(values >= u_max - TIE_TOL)[0])
    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, cfg.grid_points - 1)])
    x, fx, a, b, iterations = golden_section_max(f, lo, hi, cfg.refine_tol)

    best_beta, best_u = float(grid[k]), float(values[k])
    if fx > best_u or (fx == best_u and x < best_beta):
        best_beta, best_u = x, fx

    polished = False
    g = lambda t: utility_gradient(problem, t)  # noqa: E731
    for left, right in ((a, b), (lo, hi)):
        if g(left) > 0 > g(right):
            root = brentq(g, left, right, xtol=1e-15 * cfg.beta_max, rtol=4 * np.finfo(float).eps)
            u_root = f(root)
            if u_root >= best_u - TIE_TOL * max(1.0, abs(best_u)):
                best_beta, best_u, polished = float(root), u_root, True
            break

    boundary = best_beta <= cfg.refine_tol or best_beta >= cfg.beta_max - cfg.refine_tol
    return Optimum(
        beta_star=best_beta,
        allocation=allocate(problem, best_beta),
        total_utility=best_u,
        boundary=boundary,
        extremum_residual=abs(_numeric_slope(f, best_beta, h)),
        beta_max=cfg.beta_max,
        grid_points=cfg.grid_points,
        golden_iterations=iterations,
        polished=polished,
    )


def utility_curve(problem: DivisionProblem, betas) -> UtilityCurve:
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size == 0:
        raise ValueError("betas must be a non-empty 1-d grid")
    if betas[0] < 0 or np.any(np.diff(betas) <= 0):
        raise ValueError("betas must be nonnegative and strictly increasing")
    return UtilityCurve(tuple((float(b), total_utility_at(problem, b)) for b in betas))


def small_beta_diagnostic(problem: DivisionProblem) -> SmallBetaReport:
    """First-order behaviour of U near beta = 0.

    U(beta) ~ U(0) + cake_size * beta * (mean(C*E) - mean(C) * mean(E)), with
    C_j the marginal utility at the equal share cake_size / n, so U rises
    away from beta = 0 exactly when that covariance is positive.
    """
    if problem.is_heterogeneous:
        raise HeterogeneousProblemGiven(
            "the small-beta expansion needs equal shares at beta = 0, which a "
            "flavored cake does not give; no linearized test is available"
        )
    e = problem.contributions
    even = np.full(problem.n, problem.cake_size / problem.n)
    c = marginal_utilities(even, problem.needs, problem.amplitudes)
    c_bar, e_bar = float(c.mean()), float(e.mean())
    # covariance form is exactly 0 for identical players
    cov = float(np.mean((c - c_bar) * (e - e_bar)))
    rhs = c_bar * e_bar
    return SmallBetaReport(
        slopes=c,
        contributions=e,
        mean_slope=c_bar,
        mean_contribution=e_bar,
        lhs=rhs + cov,
        rhs=rhs,
        predicts_interior_maximum=cov > 0,
    )
