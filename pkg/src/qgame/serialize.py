"""Game-definition ingestion and result/plot-data serialization.

Game files use a minimal JSON schema::

    {"game": "two-player" | "bayesian",
     "payoffs": {"A_vs_B1": {"A": [4 reals], "B": [4 reals]},
                 "A_vs_B2": {"A": [4 reals], "B": [4 reals]}}}

Two-player games use only ``A_vs_B1``.  Payoff vectors are in basis
order |00>, |01>, |10>, |11> with player A's bit most significant.

Results serialize to JSON (full precision, loadable, byte-stable under
emit -> load -> emit) or CSV (plot data, floats at 9 significant
digits).  All files are UTF-8 with LF line endings.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .equilibrium import EquilibriumClass, EquilibriumRecord
from .games import BayesianGame, TwoPlayerGame, payoff_vector
from .strategies import GridSteps
from .sweep import CellResult, RegionSummary, SweepResult, SweepSpec


class ConfigError(Exception):
    """Invalid game or result file; the message names the offending field."""


def _f9(x: float) -> str:
    return format(float(x), ".9g")


def _require(mapping, key, path):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"missing required field '{path}{key}'")
    return mapping[key]


def _payoff_pair(block, path) -> tuple[tuple, tuple]:
    vec_a = _require(block, "A", path)
    vec_b = _require(block, "B", path)
    try:
        return payoff_vector(vec_a, f"{path}A"), payoff_vector(vec_b, f"{path}B")
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def game_from_dict(data: dict) -> TwoPlayerGame | BayesianGame:
    kind = _require(data, "game", "")
    payoffs = _require(data, "payoffs", "")
    block1 = _require(payoffs, "A_vs_B1", "payoffs.")
    pa1, pb1 = _payoff_pair(block1, "payoffs.A_vs_B1.")
    if kind == "two-player":
        return TwoPlayerGame("custom", pa1, pb1)
    if kind == "bayesian":
        block2 = _require(payoffs, "A_vs_B2", "payoffs.")
        pa2, pb2 = _payoff_pair(block2, "payoffs.A_vs_B2.")
        return BayesianGame(
            TwoPlayerGame("custom-b1", pa1, pb1),
            TwoPlayerGame("custom-b2", pa2, pb2),
            p=0.5,
        )
    raise ConfigError(f"field 'game' must be 'two-player' or 'bayesian', got {kind!r}")


def load_game(path: str) -> TwoPlayerGame | BayesianGame:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return game_from_dict(data)


def game_to_dict(game: TwoPlayerGame | BayesianGame) -> dict:
    if isinstance(game, TwoPlayerGame):
        return {
            "game": "two-player",
            "payoffs": {"A_vs_B1": {"A": list(game.payoff_a), "B": list(game.payoff_b)}},
        }
    return {
        "game": "bayesian",
        "payoffs": {
            "A_vs_B1": {
                "A": list(game.subgame_b1.payoff_a),
                "B": list(game.subgame_b1.payoff_b),
            },
            "A_vs_B2": {
                "A": list(game.subgame_b2.payoff_a),
                "B": list(game.subgame_b2.payoff_b),
            },
        },
    }


def class_id(cls: EquilibriumClass) -> str:
    thetas = ";".join(_f9(t) for t in cls.theta_profile)
    return f"{thetas}|{cls.operator_label or '-'}"


def _class_to_dict(cls: EquilibriumClass) -> dict:
    return {
        "theta": [float(t) for t in cls.theta_profile],
        "payoffs": [float(x) for x in cls.payoffs],
        "operator_label": cls.operator_label,
        "phase_sums": {k: list(v) for k, v in sorted(cls.phase_sums.items())},
        "phase_diffs": {k: list(v) for k, v in sorted(cls.phase_diffs.items())},
        "members": [list(rec.profile) for rec in cls.members],
    }


def _class_from_dict(data: dict) -> EquilibriumClass:
    payoffs = tuple(float(x) for x in data["payoffs"])
    members = tuple(
        EquilibriumRecord(tuple(int(i) for i in prof), payoffs)
        for prof in data["members"]
    )
    return EquilibriumClass(
        theta_profile=tuple(float(t) for t in data["theta"]),
        payoffs=payoffs,
        members=members,
        phase_sums={k: tuple(v) for k, v in data["phase_sums"].items()},
        phase_diffs={k: tuple(v) for k, v in data["phase_diffs"].items()},
        operator_label=data["operator_label"],
    )


def result_to_dict(result: SweepResult, kind: str = "sweep", circuit: str = "mixture") -> dict:
    spec = result.spec
    bayesian = isinstance(spec.game, BayesianGame)
    out = {
        "kind": kind,
        "mode": "bayesian" if bayesian else "two-player",
        "circuit": circuit,
        "game": game_to_dict(spec.game),
        "grid_steps": {
            "d_theta": spec.steps.d_theta,
            "d_phi": spec.steps.d_phi,
            "d_alpha": spec.steps.d_alpha,
        },
        "eps_tie": spec.eps_tie,
        "gamma_values": list(spec.gamma_values),
    }
    if bayesian:
        out["p_values"] = list(spec.p_values)
    cells = []
    for cell in result.cells:
        entry = {}
        if cell.p is not None:
            entry["p"] = cell.p
        entry["gamma"] = cell.gamma
        entry["classes"] = [_class_to_dict(c) for c in cell.classes]
        cells.append(entry)
    out["cells"] = cells
    return out


@dataclass(frozen=True)
class LoadedResult:
    result: SweepResult
    kind: str
    circuit: str


def load_result(path: str) -> LoadedResult:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    try:
        game = game_from_dict(_require(data, "game", ""))
        steps_raw = _require(data, "grid_steps", "")
        steps = GridSteps(
            float(_require(steps_raw, "d_theta", "grid_steps.")),
            float(_require(steps_raw, "d_phi", "grid_steps.")),
            float(_require(steps_raw, "d_alpha", "grid_steps.")),
        )
        spec = SweepSpec(
            game=game,
            gamma_values=tuple(float(g) for g in _require(data, "gamma_values", "")),
            p_values=tuple(float(p) for p in data.get("p_values", ())),
            steps=steps,
            eps_tie=float(_require(data, "eps_tie", "")),
        )
        cells = tuple(
            CellResult(
                p=float(c["p"]) if "p" in c else None,
                gamma=float(c["gamma"]),
                classes=tuple(_class_from_dict(cd) for cd in c["classes"]),
            )
            for c in _require(data, "cells", "")
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed result file {path}: {exc}") from exc
    return LoadedResult(
        result=SweepResult(spec, cells),
        kind=str(data.get("kind", "sweep")),
        circuit=str(data.get("circuit", "mixture")),
    )


BAYESIAN_CSV_HEADER = (
    "p,gamma,class_id,theta_A,theta_B1,theta_B2,"
    "payoff_A,payoff_B1,payoff_B2,n_profiles"
)
TWO_PLAYER_CSV_HEADER = "gamma,payoff_A,payoff_B,class_id"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _bayesian_csv(result: SweepResult) -> str:
    rows = [BAYESIAN_CSV_HEADER.split(",")]
    for cell in result.cells:
        if not cell.classes:
            rows.append([_f9(cell.p), _f9(cell.gamma), "NONE", "", "", "", "", "", "", "0"])
            continue
        for cls in cell.classes:
            rows.append(
                [_f9(cell.p), _f9(cell.gamma), class_id(cls)]
                + [_f9(t) for t in cls.theta_profile]
                + [_f9(x) for x in cls.payoffs]
                + [str(cls.n_profiles)]
            )
    return _csv_text(rows)


def _two_player_csv(result: SweepResult) -> str:
    rows = [TWO_PLAYER_CSV_HEADER.split(",")]
    for cell in result.cells:
        if not cell.classes:
            rows.append([_f9(cell.gamma), "", "", "NONE"])
            continue
        for cls in cell.classes:
            rows.append(
                [_f9(cell.gamma), _f9(cls.payoffs[0]), _f9(cls.payoffs[1]), class_id(cls)]
            )
    return _csv_text(rows)


def _csv_text(rows: list[list[str]]) -> str:
    from io import StringIO

    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def result_to_json_text(
    result: SweepResult, kind: str = "sweep", circuit: str = "mixture"
) -> str:
    data = result_to_dict(result, kind=kind, circuit=circuit)
    return json.dumps(data, ensure_ascii=False, indent=1) + "\n"


def emit(
    result: SweepResult,
    fmt: str,
    path: str,
    kind: str = "sweep",
    circuit: str = "mixture",
) -> None:
    """Write a result to ``path`` as 'csv' or 'json'."""
    if fmt == "json":
        _write_text(path, result_to_json_text(result, kind=kind, circuit=circuit))
    elif fmt == "csv":
        if isinstance(result.spec.game, BayesianGame):
            _write_text(path, _bayesian_csv(result))
        else:
            _write_text(path, _two_player_csv(result))
    else:
        raise ValueError(f"unknown output format {fmt!r}")


REGIONS_CSV_HEADER = (
    "class_id,theta_A,theta_B1,theta_B2,operator_label,"
    "p_min,p_max,gamma_min,gamma_max,n_cells"
)


def regions_to_dicts(summaries: list[RegionSummary]) -> list[dict]:
    out = []
    for s in summaries:
        out.append(
            {
                "theta": [float(t) for t in s.theta_profile],
                "operator_label": s.operator_label,
                "p_range": list(s.p_range) if s.p_range else None,
                "gamma_range": list(s.gamma_range),
                "n_cells": s.n_cells,
            }
        )
    return out


def emit_regions(summaries: list[RegionSummary], fmt: str, path: str) -> None:
    if fmt == "json":
        _write_text(
            path, json.dumps(regions_to_dicts(summaries), ensure_ascii=False, indent=1) + "\n"
        )
        return
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    rows = [REGIONS_CSV_HEADER.split(",")]
    for s in summaries:
        thetas = [_f9(t) for t in s.theta_profile]
        thetas += [""] * (3 - len(thetas))
        sig = ";".join(_f9(t) for t in s.theta_profile) + "|" + (s.operator_label or "-")
        rows.append(
            [sig]
            + thetas
            + [
                s.operator_label or "",
                _f9(s.p_range[0]) if s.p_range else "",
                _f9(s.p_range[1]) if s.p_range else "",
                _f9(s.gamma_range[0]),
                _f9(s.gamma_range[1]),
                str(s.n_cells),
            ]
        )
    _write_text(path, _csv_text(rows))
