"""Problem description types and validation.

Everything here is an immutable value. Construct the types freely (nothing
is checked at construction time), then pass the problem through
:func:`validate_problem` before handing it to the kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError, Violation

DEFAULT_CAKE_SIZE = 100.0
ROW_SUM_TOL = 1e-9
SIZE_SUM_RTOL = 1e-9


def _as_float_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Player:
    id: str
    contribution: float
    need: float
    amplitude: float = 1.0


@dataclass(frozen=True)
class FlavorLayout:
    flavors: tuple[str, ...]
    sizes: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "flavors", tuple(str(f) for f in self.flavors))
        object.__setattr__(self, "sizes", _as_float_tuple(self.sizes))

    @property
    def m(self) -> int:
        return len(self.flavors)


@dataclass(frozen=True)
class PreferenceMatrix:
    """Row-stochastic weights; ``weights[j][i]`` is player j's weight on flavor i."""

    weights: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(_as_float_tuple(row) for row in self.weights)
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)


@dataclass(frozen=True)
class DivisionProblem:
    players: tuple[Player, ...]
    cake_size: float = DEFAULT_CAKE_SIZE
    heterogeneity: Optional[tuple[FlavorLayout, PreferenceMatrix]] = None

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "cake_size", float(self.cake_size))
        if self.heterogeneity is not None:
            object.__setattr__(self, "heterogeneity", tuple(self.heterogeneity))

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def is_heterogeneous(self) -> bool:
        return self.heterogeneity is not None

    @property
    def layout(self) -> Optional[FlavorLayout]:
        return None if self.heterogeneity is None else self.heterogeneity[0]

    @property
    def preferences(self) -> Optional[PreferenceMatrix]:
        return None if self.heterogeneity is None else self.heterogeneity[1]

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.players]

    @property
    def contributions(self) -> np.ndarray:
        return np.array([p.contribution for p in self.players], dtype=float)

    @property
    def needs(self) -> np.ndarray:
        return np.array([p.need for p in self.players], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p.amplitude for p in self.players], dtype=float)

    def permuted(self, order: Sequence[int]) -> "DivisionProblem":
        """Same problem with players (and preference rows) reordered."""
        order = list(order)
        players = tuple(self.players[k] for k in order)
        het = None
        if self.heterogeneity is not None:
            layout, prefs = self.heterogeneity
            het = (layout, PreferenceMatrix(tuple(prefs.weights[k] for k in order)))
        return DivisionProblem(players, self.cake_size, het)


@dataclass(frozen=True, eq=False)
class Allocation:
    """Shares in cake units. ``per_flavor`` is n x m and only set for flavored cakes."""

    per_player: np.ndarray
    per_flavor: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "per_player", _readonly(self.per_player))
        if self.per_flavor is not None:
            object.__setattr__(self, "per_flavor", _readonly(self.per_flavor))

    def __len__(self) -> int:
        return len(self.per_player)

    @property
    def total(self) -> float:
        return float(self.per_player.sum())


def make_problem(
    contributions: Sequence[float],
    needs: Sequence[float],
    *,
    cake_size: float = DEFAULT_CAKE_SIZE,
    amplitudes: Optional[Sequence[float]] = None,
    ids: Optional[Sequence[str]] = None,
    flavors: Optional[Sequence[str]] = None,
    flavor_sizes: Optional[Sequence[float]] = None,
    weights: Optional[Sequence[Sequence[float]]] = None,
    validate: bool = True,
) -> DivisionProblem:
    """Build a problem from plain vectors.

    Passing ``weights`` makes the problem heterogeneous. If ``flavor_sizes``
    is omitted the cake is split evenly between the flavors; if ``flavors``
    is omitted they are named ``f1..fm``.
    """
    n = len(contributions)
    if amplitudes is None:
        amplitudes = [1.0] * n
    if ids is None:
        ids = [str(j + 1) for j in range(n)]
    players = tuple(
        Player(str(i), float(e), float(d), float(s))
        for i, e, d, s in zip(ids, contributions, needs, amplitudes)
    )
    het = None
    if weights is not None:
        m = len(weights[0]) if len(weights) else 0
        if flavors is None:
            flavors = [f"f{i + 1}" for i in range(m)]
        if flavor_sizes is None:
            flavor_sizes = [cake_size / m] * m if m else []
        het = (FlavorLayout(tuple(flavors), tuple(flavor_sizes)), PreferenceMatrix(weights))
    problem = DivisionProblem(players, cake_size, het)
    return validate_problem(problem) if validate else problem


def _finite(x) -> bool:
    try:
        return math.isfinite(float(x))
    except (TypeError, ValueError):
        return False


def problem_violations(problem: DivisionProblem) -> list[Violation]:
    """Every broken invariant of ``problem``; empty when it is valid."""
    out: list[Violation] = []
    add = lambda code, path, msg: out.append(Violation(code, path, msg))  # noqa: E731

    if problem.n == 0:
        add("EmptyPlayers", "players", "at least one player is required")
    if not _finite(problem.cake_size) or problem.cake_size <= 0:
        add("NonPositiveCakeSize", "cake_size", f"must be a positive number, got {problem.cake_size!r}")

    seen: dict[str, int] = {}
    for j, p in enumerate(problem.players):
        base = f"players[{j}]"
        if p.id in seen:
            add("DuplicatePlayerId", f"{base}.id", f"id {p.id!r} already used by players[{seen[p.id]}]")
        seen.setdefault(p.id, j)
        if not _finite(p.contribution):
            add("NonFiniteInput", f"{base}.contribution", f"must be finite, got {p.contribution!r}")
        elif p.contribution < 0:
            add("NegativeContribution", f"{base}.contribution", f"must be >= 0, got {p.contribution!r}")
        if not _finite(p.need):
            add("NonFiniteInput", f"{base}.need", f"must be finite, got {p.need!r}")
        elif p.need <= 0:
            add("NonPositiveNeed", f"{base}.need", f"must be > 0, got {p.need!r}")
        if not _finite(p.amplitude):
            add("NonFiniteInput", f"{base}.amplitude", f"must be finite, got {p.amplitude!r}")
        elif p.amplitude <= 0:
            add("NonPositiveAmplitude", f"{base}.amplitude", f"must be > 0, got {p.amplitude!r}")

    if problem.heterogeneity is not None:
        out.extend(_heterogeneity_violations(problem))
    return out


def _heterogeneity_violations(problem: DivisionProblem) -> list[Violation]:
    out: list[Violation] = []
    add = lambda code, path, msg: out.append(Violation(code, path, msg))  # noqa: E731
    layout, prefs = problem.heterogeneity
    m = layout.m

    if m == 0:
        add("EmptyFlavors", "flavors", "a flavored cake needs at least one flavor")
    if len(layout.sizes) != m:
        add("ShapeMismatch", "flavors", f"{m} flavor names but {len(layout.sizes)} sizes")
    if len(set(layout.flavors)) != m:
        add("DuplicateFlavor", "flavors", "flavor names must be unique")
    sizes_ok = True
    for i, size in enumerate(layout.sizes):
        if not _finite(size) or size <= 0:
            sizes_ok = False
            add("NonPositiveFlavorSize", f"flavors[{i}].size", f"must be > 0, got {size!r}")
    if sizes_ok and layout.sizes and _finite(problem.cake_size):
        total = math.fsum(layout.sizes)
        if abs(total - problem.cake_size) > SIZE_SUM_RTOL * abs(problem.cake_size):
            add(
                "FlavorSizeMismatch",
                "flavors",
                f"flavor sizes sum to {total!r}, expected cake_size {problem.cake_size!r}",
            )

    rows = prefs.weights
    if len(rows) != problem.n:
        add("ShapeMismatch", "preferences", f"expected {problem.n} rows (one per player), got {len(rows)}")
    bad_shape = False
    for j, row in enumerate(rows):
        path = f"players[{j}].preferences"
        if len(row) != m:
            bad_shape = True
            add("ShapeMismatch", path, f"expected {m} weights (one per flavor), got {len(row)}")
            continue
        row_ok = True
        for i, w in enumerate(row):
            if not _finite(w) or w < 0 or w > 1:
                row_ok = False
                add("WeightOutOfRange", f"{path}[{i}]", f"weight must lie in [0, 1], got {w!r}")
        if row_ok:
            s = math.fsum(row)
            if abs(s - 1.0) > ROW_SUM_TOL:
                add("RowSumViolation", path, f"weights sum to {s!r}, expected 1")

    if not bad_shape and len(rows) == problem.n and m > 0:
        for i, name in enumerate(layout.flavors):
            col = [row[i] for row in rows]
            if not any(_finite(w) and w > 0 for w in col):
                add("UnclaimedFlavor", f"flavors[{i}]", f"no player has positive weight on flavor {name!r}")
    return out


def validate_problem(problem: DivisionProblem) -> DivisionProblem:
    """Return ``problem`` unchanged if valid, else raise :class:`ValidationError`
    carrying the complete list of violations."""
    violations = problem_violations(problem)
    if violations:
        raise ValidationError(violations)
    return problem
