"""Discretized strategy spaces with redundancy removal and Pauli labeling.

A grid is defined by step sizes (d_theta, d_phi, d_alpha) that divide
their ranges exactly: theta runs over [0, pi] inclusive, phi and alpha
over [0, 2*pi) periodically.  Grid points are canonicalized (the
undefined phase parameter is zeroed at theta = 0 and theta = pi) and
exact duplicate matrices are removed, NOT duplicates up to global
phase: strategies differing only by a global phase are payoff
equivalent but count as distinct grid points, which is what makes the
coarse grid have 8 members and the pi/8 grid 1824.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import TAU, StrategyParams, strategy_unitary
from .linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z

_PAULIS = (("I", PAULI_I), ("X", PAULI_X), ("Y", PAULI_Y), ("Z", PAULI_Z))

_DIVIDES_TOL = 1e-12
_ANGLE_SNAP = 1e-9


def _step_count(step: float, full_range: float, name: str) -> int:
    if not step > 0:
        raise ValueError(f"{name} must be positive, got {step}")
    n = round(full_range / step)
    if n < 1 or abs(n * step - full_range) > _DIVIDES_TOL:
        raise ValueError(f"{name} = {step} does not divide {full_range:.6g} exactly")
    return n


@dataclass(frozen=True)
class GridSteps:
    """Step sizes for the (theta, phi, alpha) grid; each must divide its range."""

    d_theta: float
    d_phi: float
    d_alpha: float

    def __post_init__(self):
        _step_count(self.d_theta, math.pi, "d_theta")
        _step_count(self.d_phi, TAU, "d_phi")
        _step_count(self.d_alpha, TAU, "d_alpha")

    @property
    def n_theta(self) -> int:
        return _step_count(self.d_theta, math.pi, "d_theta")

    @property
    def n_phi(self) -> int:
        return _step_count(self.d_phi, TAU, "d_phi")

    @property
    def n_alpha(self) -> int:
        return _step_count(self.d_alpha, TAU, "d_alpha")


DEFAULT_GRID = GridSteps(math.pi, math.pi / 2.0, math.pi / 2.0)


@dataclass(frozen=True, eq=False)
class StrategySet:
    """Deduplicated, canonically ordered strategies with precomputed unitaries."""

    params: tuple[StrategyParams, ...]
    unitaries: np.ndarray
    steps: GridSteps | None = None

    def __post_init__(self):
        self.unitaries.setflags(write=False)

    def __len__(self) -> int:
        return len(self.params)

    def unitary(self, i: int) -> np.ndarray:
        return self.unitaries[i]


def _wrap_angle(value: float) -> float:
    w = math.fmod(value, TAU)
    if w < 0.0:
        w += TAU
    if TAU - w < _ANGLE_SNAP:
        w = 0.0
    return w


def canonicalize(s: StrategyParams) -> StrategyParams:
    """Reduce phases mod 2*pi and zero the parameter that theta makes undefined."""
    phi = _wrap_angle(s.phi)
    alpha = _wrap_angle(s.alpha)
    if s.theta < _ANGLE_SNAP:
        alpha = 0.0
    if math.pi - s.theta < _ANGLE_SNAP:
        phi = 0.0
    return StrategyParams(s.theta, phi, alpha)


def enumerate_strategies(steps: GridSteps) -> StrategySet:
    """All canonical grid strategies with exact-duplicate matrices removed.

    Order is deterministic: lexicographic by (theta, phi, alpha).
    """
    seen: dict[tuple[float, float, float], StrategyParams] = {}
    for i in range(steps.n_theta + 1):
        theta = math.pi if i == steps.n_theta else i * steps.d_theta
        for j in range(steps.n_phi):
            for k in range(steps.n_alpha):
                s = canonicalize(StrategyParams(theta, j * steps.d_phi, k * steps.d_alpha))
                key = (round(s.theta, 12), round(s.phi, 12), round(s.alpha, 12))
                seen.setdefault(key, s)
    params = tuple(seen[key] for key in sorted(seen))
    unitaries = np.stack([strategy_unitary(s) for s in params])
    return StrategySet(params, unitaries, steps)


def pauli_label(u: np.ndarray, tol: float = 1e-10) -> tuple[str, complex] | None:
    """Express ``u`` as c * P for a Pauli matrix P and unimodular c, if possible."""
    u = np.asarray(u, dtype=complex)
    for name, pauli in _PAULIS:
        idx = np.unravel_index(np.argmax(np.abs(pauli)), pauli.shape)
        c = u[idx] / pauli[idx]
        if abs(abs(c) - 1.0) > tol:
            continue
        if np.max(np.abs(u - c * pauli)) <= tol:
            return name, complex(c)
    return None
