"""Saturating player utility and the total-utility objective."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NegativeShare
from .model import Allocation, Player


@dataclass(frozen=True)
class UtilityParams:
    need: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.need > 0:
            raise ValueError(f"need must be > 0, got {self.need!r}")
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be > 0, got {self.amplitude!r}")

    @classmethod
    def of(cls, player: Player) -> "UtilityParams":
        return cls(player.need, player.amplitude)


def _shares(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise NegativeShare(f"shares must be >= 0, got {x[x < 0].tolist()}")
    return x


def _sech2(t: np.ndarray) -> np.ndarray:
    # 4 e^{-2t} / (1 + e^{-2t})^2, no overflow for t >= 0
    q = np.exp(-2.0 * np.abs(t))
    return 4.0 * q / (1.0 + q) ** 2


def utility(x, params: UtilityParams):
    """``amplitude * tanh(x / need)``. Accepts scalars or arrays."""
    x = _shares(x)
    out = params.amplitude * np.tanh(x / params.need)
    return float(out) if out.ndim == 0 else out


def marginal_utility(x, params: UtilityParams):
    """Derivative of :func:`utility` in the share: ``(s / D) sech^2(x / D)``."""
    x = _shares(x)
    out = params.amplitude / params.need * _sech2(x / params.need)
    return float(out) if out.ndim == 0 else out


def utilities(shares, needs, amplitudes=None) -> np.ndarray:
    """Per-player utilities, vectorized over players."""
    x = _shares(shares)
    d = np.asarray(needs, dtype=float)
    s = np.ones_like(d) if amplitudes is None else np.asarray(amplitudes, dtype=float)
    if not (x.shape == d.shape == s.shape):
        raise LengthMismatch(f"{x.shape[0] if x.ndim else 1} shares for {d.shape[0]} players")
    return s * np.tanh(x / d)


def marginal_utilities(shares, needs, amplitudes=None) -> np.ndarray:
    x = _shares(shares)
    d = np.asarray(needs, dtype=float)
    s = np.ones_like(d) if amplitudes is None else np.asarray(amplitudes, dtype=float)
    if not (x.shape == d.shape == s.shape):
        raise LengthMismatch(f"{x.shape[0] if x.ndim else 1} shares for {d.shape[0]} players")
    return s / d * _sech2(x / d)


def total_utility(allocation, players) -> float:
    """Sum of player utilities for an :class:`Allocation` (or plain share vector)."""
    shares = allocation.per_player if isinstance(allocation, Allocation) else allocation
    shares = np.asarray(shares, dtype=float)
    players = list(players)
    if shares.shape != (len(players),):
        raise LengthMismatch(f"allocation has {shares.size} entries for {len(players)} players")
    needs = [p.need for p in players]
    amps = [p.amplitude for p in players]
    return float(np.sum(utilities(shares, needs, amps)))
