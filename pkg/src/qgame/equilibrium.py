"""Best-response search, Nash equilibrium enumeration, and classification.

NE search is brute force over a finite strategy set: payoff tables are
precomputed per gamma (they do not depend on p, so p-sweeps reuse
them), best-response sets are read off with an absolute tie tolerance,
and a profile is an equilibrium when every player's strategy is in its
best-response set against the others.

``verify_ne`` is the independent oracle: a naive deviation loop that
re-evaluates payoffs through the scalar circuit path, never consulting
the vectorized tables or best-response structure.

Equilibria group into classes sharing a theta-profile and payoffs whose
members differ only by correlated phase shifts.  For each class the
observed sets of pairwise phase sums and differences (against player A)
are both reported, along with a Pauli operator label when every member
strategy is proportional to a Pauli matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .circuits import (
    TAU,
    ControlSpec,
    StrategyParams,
    bayesian_payoffs_full_circuit,
    bayesian_payoffs_mixture,
    control_for_probability,
    entangler,
    evolve_two_player,
    payoff_expectation,
)
from .games import BayesianGame, TwoPlayerGame
from .strategies import StrategySet, pauli_label

DEFAULT_EPS_TIE = 1e-9

_TABLE_CHUNK = 128


@dataclass(frozen=True)
class EquilibriumRecord:
    """One NE profile (strategy indices, one per player) with its payoffs."""

    profile: tuple[int, ...]
    payoffs: tuple[float, ...]


@dataclass
class EquilibriumClass:
    """A family of NE sharing a theta-profile and payoffs.

    ``phase_sums[pair]`` and ``phase_diffs[pair]`` hold the observed
    sets of (g_A + g_k) and (g_k - g_A) mod 2*pi over members, where g
    is each player's free phase (phi at theta = 0, alpha at theta = pi).
    Both are reported because sum and difference constraints coincide on
    negation-symmetric offset sets.  The operator label is one
    representative member's Pauli product and is not unique.
    """

    theta_profile: tuple[float, ...]
    payoffs: tuple[float, ...]
    members: tuple[EquilibriumRecord, ...]
    phase_sums: dict[str, tuple[float, ...]]
    phase_diffs: dict[str, tuple[float, ...]]
    operator_label: str | None

    @property
    def n_profiles(self) -> int:
        return len(self.members)

    def signature(self) -> tuple:
        return (tuple(round(t, 9) for t in self.theta_profile), self.operator_label)


def _probability_rows(j: np.ndarray, jd: np.ndarray, left: np.ndarray, unitaries: np.ndarray):
    """Outcome probabilities for row-chunks of (U_a, U_b) pairs.

    Uses (U_a (x) U_b) vec(M) = vec(U_a M U_b^T) on the row-major
    2x2 reshape of J|00>.
    """
    n = unitaries.shape[0]
    for start in range(0, n, _TABLE_CHUNK):
        block = left[start : start + _TABLE_CHUNK]
        amps = np.einsum("iab,jcb->ijac", block, unitaries).reshape(len(block), n, 4)
        amps = amps @ jd.T
        yield start, np.abs(amps) ** 2


def two_player_tables(
    game: TwoPlayerGame, gamma: float, sset: StrategySet
) -> tuple[np.ndarray, np.ndarray]:
    """Payoff tables T_A[i, j], T_B[i, j] for A playing i against B playing j."""
    j = entangler(gamma)
    jd = j.conj().T
    psi0 = j[:, 0].reshape(2, 2)
    left = sset.unitaries @ psi0
    n = len(sset)
    pay_a = np.asarray(game.payoff_a)
    pay_b = np.asarray(game.payoff_b)
    ta = np.empty((n, n))
    tb = np.empty((n, n))
    for start, probs in _probability_rows(j, jd, left, sset.unitaries):
        ta[start : start + probs.shape[0]] = probs @ pay_a
        tb[start : start + probs.shape[0]] = probs @ pay_b
    return ta, tb


def bayesian_tables(
    game: BayesianGame, gamma: float, sset: StrategySet
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-subgame payoff tables (T_A1, T_B1, T_A2, T_B2) at one gamma.

    Independent of p: A's Bayesian payoff against (b1, b2) is
    p * T_A1[:, b1] + (1 - p) * T_A2[:, b2], so sweeps over p share
    these tables.
    """
    ta1, tb1 = two_player_tables(game.subgame_b1, gamma, sset)
    ta2, tb2 = two_player_tables(game.subgame_b2, gamma, sset)
    return ta1, tb1, ta2, tb2


def best_responses(
    payoff_fn: Callable[[int, tuple[int, ...]], float],
    sset: StrategySet,
    opponents: tuple[int, ...],
    eps_tie: float = DEFAULT_EPS_TIE,
) -> tuple[tuple[int, ...], float]:
    """All strategies within eps_tie of the best payoff against fixed opponents."""
    if eps_tie < 0:
        raise ValueError("eps_tie must be non-negative")
    if len(sset) == 0:
        raise ValueError("strategy set is empty")
    values = np.array([payoff_fn(k, opponents) for k in range(len(sset))])
    top = float(values.max())
    indices = tuple(int(i) for i in np.nonzero(values >= top - eps_tie)[0])
    return indices, top


def find_ne_two_player(
    game: TwoPlayerGame,
    gamma: float,
    sset: StrategySet,
    eps_tie: float = DEFAULT_EPS_TIE,
    tables: tuple[np.ndarray, np.ndarray] | None = None,
) -> list[EquilibriumRecord]:
    """All profiles (a, b) where each strategy best-responds to the other."""
    ta, tb = tables if tables is not None else two_player_tables(game, gamma, sset)
    br_a = ta >= ta.max(axis=0, keepdims=True) - eps_tie
    br_b = tb >= tb.max(axis=1, keepdims=True) - eps_tie
    pairs = np.argwhere(br_a & br_b)
    return [
        EquilibriumRecord((int(i), int(j)), (float(ta[i, j]), float(tb[i, j])))
        for i, j in pairs
    ]


def find_ne_bayesian(
    game: BayesianGame,
    gamma: float,
    sset: StrategySet,
    eps_tie: float = DEFAULT_EPS_TIE,
    tables: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None,
) -> list[EquilibriumRecord]:
    """All profiles (a, b1, b2) stable under unilateral deviation.

    B1 best-responds in the (A, B1) subgame and B2 in the (A, B2)
    subgame (their payoffs do not depend on the other B player), so
    their best-response sets are computed once per a; A's check runs
    over the p-weighted combination for each surviving (b1, b2) pair.
    """
    ta1, tb1, ta2, tb2 = (
        tables if tables is not None else bayesian_tables(game, gamma, sset)
    )
    p = game.p
    n = len(sset)
    records = []
    for a in range(n):
        br1 = np.nonzero(tb1[a] >= tb1[a].max() - eps_tie)[0]
        br2 = np.nonzero(tb2[a] >= tb2[a].max() - eps_tie)[0]
        for b1 in br1:
            col1 = p * ta1[:, b1]
            for b2 in br2:
                pay_a = col1 + (1.0 - p) * ta2[:, b2]
                if pay_a[a] >= pay_a.max() - eps_tie:
                    records.append(
                        EquilibriumRecord(
                            (a, int(b1), int(b2)),
                            (
                                float(pay_a[a]),
                                float(tb1[a, b1]),
                                float(tb2[a, b2]),
                            ),
                        )
                    )
    records.sort(key=lambda r: r.profile)
    return records


def bayesian_circuit_tables(
    game: BayesianGame,
    gamma: float,
    sset: StrategySet,
    control: ControlSpec | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Payoff tables evaluated through the four-qubit circuit.

    Returns (T_A[a, b1, b2], T_B1[a, b1], T_B2[a, b2]).  Cubic in the
    strategy count; intended for the coarse grid.
    """
    if control is None:
        control = control_for_probability(game.p)
    n = len(sset)
    ta = np.empty((n, n, n))
    tb1 = np.empty((n, n))
    tb2 = np.empty((n, n))
    for a in range(n):
        for b1 in range(n):
            for b2 in range(n):
                pa, p1, p2 = bayesian_payoffs_full_circuit(
                    control,
                    gamma,
                    sset.unitaries[a],
                    sset.unitaries[b1],
                    sset.unitaries[b2],
                    game,
                )
                ta[a, b1, b2] = pa
                if b2 == 0:
                    tb1[a, b1] = p1
                if b1 == 0:
                    tb2[a, b2] = p2
    return ta, tb1, tb2


def find_ne_bayesian_circuit(
    game: BayesianGame,
    gamma: float,
    sset: StrategySet,
    eps_tie: float = DEFAULT_EPS_TIE,
    control: ControlSpec | None = None,
) -> list[EquilibriumRecord]:
    """NE search with payoffs evaluated through the four-qubit circuit."""
    ta, tb1, tb2 = bayesian_circuit_tables(game, gamma, sset, control)
    n = len(sset)
    records = []
    for a in range(n):
        br1 = np.nonzero(tb1[a] >= tb1[a].max() - eps_tie)[0]
        br2 = np.nonzero(tb2[a] >= tb2[a].max() - eps_tie)[0]
        for b1 in br1:
            for b2 in br2:
                pay_a = ta[:, b1, b2]
                if pay_a[a] >= pay_a.max() - eps_tie:
                    records.append(
                        EquilibriumRecord(
                            (a, int(b1), int(b2)),
                            (
                                float(pay_a[a]),
                                float(tb1[a, b1]),
                                float(tb2[a, b2]),
                            ),
                        )
                    )
    records.sort(key=lambda r: r.profile)
    return records


def _two_player_payoff(game, gamma, u_a, u_b):
    psi = evolve_two_player(gamma, u_a, u_b)
    return (
        payoff_expectation(psi, game.payoff_a),
        payoff_expectation(psi, game.payoff_b),
    )


def verify_ne(
    record: EquilibriumRecord,
    game: TwoPlayerGame | BayesianGame,
    gamma: float,
    sset: StrategySet,
    eps_tie: float = DEFAULT_EPS_TIE,
) -> bool:
    """Independent NE check: a naive loop over every unilateral deviation.

    Payoffs are recomputed through the scalar circuit path so the check
    shares nothing with the vectorized tables or best-response masks.
    """
    us = sset.unitaries
    if isinstance(game, TwoPlayerGame):
        a, b = record.profile
        base_a, base_b = _two_player_payoff(game, gamma, us[a], us[b])
        for alt in range(len(sset)):
            if _two_player_payoff(game, gamma, us[alt], us[b])[0] > base_a + eps_tie:
                return False
            if _two_player_payoff(game, gamma, us[a], us[alt])[1] > base_b + eps_tie:
                return False
        return True

    a, b1, b2 = record.profile
    base = bayesian_payoffs_mixture(game.p, gamma, us[a], us[b1], us[b2], game)
    for alt in range(len(sset)):
        if (
            bayesian_payoffs_mixture(game.p, gamma, us[alt], us[b1], us[b2], game)[0]
            > base[0] + eps_tie
        ):
            return False
        if (
            payoff_expectation(
                evolve_two_player(gamma, us[a], us[alt]), game.subgame_b1.payoff_b
            )
            > base[1] + eps_tie
        ):
            return False
        if (
            payoff_expectation(
                evolve_two_player(gamma, us[a], us[alt]), game.subgame_b2.payoff_b
            )
            > base[2] + eps_tie
        ):
            return False
    return True


def _free_phase(s: StrategyParams) -> float | None:
    """The phase parameter left free by theta: phi at 0, alpha at pi."""
    if s.theta < 1e-9:
        return s.phi
    if math.pi - s.theta < 1e-9:
        return s.alpha
    return None


def _wrap_offset(value: float) -> float:
    w = math.fmod(value, TAU)
    if w < 0.0:
        w += TAU
    if TAU - w < 1e-9:
        w = 0.0
    return round(w, 9)


def _player_names(n_players: int) -> tuple[str, ...]:
    return ("A", "B") if n_players == 2 else ("A", "B1", "B2")


def classify(
    records: list[EquilibriumRecord], sset: StrategySet
) -> list[EquilibriumClass]:
    """Group NE records into classes by theta-profile and payoffs.

    Within a class, phase sum/difference offsets against player A are
    collected per pair; a pair is reported only when both players'
    theta values pin a single free phase.  The operator label comes
    from the first member in profile order.
    """
    groups: dict[tuple, list[EquilibriumRecord]] = {}
    for rec in sorted(records, key=lambda r: r.profile):
        thetas = tuple(sset.params[i].theta for i in rec.profile)
        key = (
            tuple(round(t, 9) for t in thetas),
            tuple(round(x, 9) for x in rec.payoffs),
        )
        groups.setdefault(key, []).append(rec)

    names_cache: dict[int, tuple[str, ...]] = {}
    classes = []
    for key in sorted(groups):
        members = tuple(groups[key])
        rep = members[0]
        n_players = len(rep.profile)
        names = names_cache.setdefault(n_players, _player_names(n_players))

        phase_sums: dict[str, tuple[float, ...]] = {}
        phase_diffs: dict[str, tuple[float, ...]] = {}
        for k in range(1, n_players):
            pair = f"{names[0]}-{names[k]}"
            sums = set()
            diffs = set()
            defined = True
            for rec in members:
                g_a = _free_phase(sset.params[rec.profile[0]])
                g_k = _free_phase(sset.params[rec.profile[k]])
                if g_a is None or g_k is None:
                    defined = False
                    break
                sums.add(_wrap_offset(g_a + g_k))
                diffs.add(_wrap_offset(g_k - g_a))
            if defined:
                phase_sums[pair] = tuple(sorted(sums))
                phase_diffs[pair] = tuple(sorted(diffs))

        labels = [pauli_label(sset.unitaries[i]) for i in rep.profile]
        label = None
        if all(lab is not None for lab in labels) and all(
            all(pauli_label(sset.unitaries[i]) is not None for i in rec.profile)
            for rec in members
        ):
            label = "⊗".join(lab[0] for lab in labels)

        theta_profile = tuple(sset.params[i].theta for i in rep.profile)
        classes.append(
            EquilibriumClass(
                theta_profile=theta_profile,
                payoffs=rep.payoffs,
                members=members,
                phase_sums=phase_sums,
                phase_diffs=phase_diffs,
                operator_label=label,
            )
        )
    return classes
