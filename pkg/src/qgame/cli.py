"""Command-line interface.

Commands: solve, sweep, classify, emit-figure, verify.  Angles are in
radians everywhere; flags also accept expressions like ``pi/8`` or
``3pi/2``.  Exit codes: 0 success, 1 argument error, 2 game/result
config error, 3 I/O or numerical failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

from .circuits import ControlSpec, control_for_probability
from .equilibrium import (
    DEFAULT_EPS_TIE,
    classify,
    find_ne_bayesian,
    find_ne_bayesian_circuit,
    find_ne_two_player,
    verify_ne,
)
from .games import BayesianGame, TwoPlayerGame, builtin_bayesian, builtin_da, builtin_pd
from .serialize import (
    ConfigError,
    class_id,
    emit,
    emit_regions,
    load_game,
    load_result,
)
from .strategies import DEFAULT_GRID, GridSteps, enumerate_strategies
from .sweep import (
    CellResult,
    SweepResult,
    SweepSpec,
    gamma_grid,
    p_grid,
    run_sweep,
    summarize_regions,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_ANGLE_RE = re.compile(r"(?:(\d+(?:\.\d+)?)\*?)?pi(?:/(\d+(?:\.\d+)?))?")


def parse_angle(text: str) -> float:
    """Parse a radian value, accepting forms like '0.5', 'pi', 'pi/8', '3pi/2'."""
    t = text.strip().lower()
    m = _ANGLE_RE.fullmatch(t)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(t)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def _add_grid_flags(sub):
    sub.add_argument("--grid-theta", default="pi", help="theta step (default pi)")
    sub.add_argument("--grid-phi", default="pi/2", help="phi step (default pi/2)")
    sub.add_argument("--grid-alpha", default="pi/2", help="alpha step (default pi/2)")
    sub.add_argument(
        "--eps-tie", type=float, default=DEFAULT_EPS_TIE, help="payoff tie tolerance"
    )


def _add_out_flags(sub, default_format=None):
    sub.add_argument("--out", help="output file path (default: print summary)")
    sub.add_argument(
        "--format",
        choices=("csv", "json"),
        default=default_format,
        help="output format (default: inferred from --out extension)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgame", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    solve = subs.add_parser("solve", help="find NE classes at one (p, gamma) point")
    solve.add_argument(
        "--game",
        default="pd",
        help="pd | da | bayesian | path to a game JSON file",
    )
    solve.add_argument("--gamma", required=True, help="entanglement angle in [0, pi/2]")
    solve.add_argument("--p", type=float, default=0.5, help="probability of facing B1")
    solve.add_argument(
        "--circuit",
        choices=("mixture", "full"),
        default="mixture",
        help="Bayesian evaluation: statistical mixture or the 4-qubit circuit",
    )
    solve.add_argument("--theta-q", help="control rotation theta (full circuit only)")
    solve.add_argument("--phi-q", default="0", help="control rotation phi")
    solve.add_argument("--alpha-q", default="0", help="control rotation alpha")
    _add_grid_flags(solve)
    _add_out_flags(solve)
    solve.set_defaults(func=_cmd_solve)

    sweep = subs.add_parser("sweep", help="sweep gamma (and p for Bayesian games)")
    sweep.add_argument("--game", default="bayesian", help="pd | da | bayesian | path")
    sweep.add_argument("--p-step", type=float, default=0.05)
    sweep.add_argument("--gamma-step", type=float, default=0.05)
    sweep.add_argument("--jobs", type=int, default=1, help="parallel workers")
    _add_grid_flags(sweep)
    _add_out_flags(sweep)
    sweep.set_defaults(func=_cmd_sweep)

    cls = subs.add_parser("classify", help="summarize class regions of a result file")
    cls.add_argument("--in", dest="infile", required=True, help="result JSON file")
    _add_out_flags(cls)
    cls.set_defaults(func=_cmd_classify)

    fig = subs.add_parser("emit-figure", help="write the data behind a payoff figure")
    fig.add_argument("--fig", choices=("pd", "da", "bayesian"), required=True)
    fig.add_argument("--out", required=True)
    fig.add_argument(
        "--format", choices=("csv", "json"), default=None, help="default csv"
    )
    fig.add_argument("--jobs", type=int, default=1)
    fig.set_defaults(func=_cmd_emit_figure)

    ver = subs.add_parser("verify", help="re-check every NE in a result file")
    ver.add_argument("--in", dest="infile", required=True, help="result JSON file")
    ver.add_argument("--eps-tie", type=float, default=None, help="override tie tolerance")
    ver.set_defaults(func=_cmd_verify)

    return parser


def _resolve_game(selector: str, p: float | None = None):
    if selector == "pd":
        return builtin_pd()
    if selector == "da":
        return builtin_da()
    if selector == "bayesian":
        return builtin_bayesian(p if p is not None else 0.5)
    game = load_game(selector)
    if isinstance(game, BayesianGame) and p is not None:
        game = BayesianGame(game.subgame_b1, game.subgame_b2, p)
    return game


def _grid_steps(args) -> GridSteps:
    try:
        return GridSteps(
            parse_angle(args.grid_theta),
            parse_angle(args.grid_phi),
            parse_angle(args.grid_alpha),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_unit(value: float, name: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_gamma(value: float) -> float:
    if not 0.0 <= value <= math.pi / 2.0 + 1e-12:
        raise UsageError(f"--gamma must lie in [0, pi/2], got {value}")
    return min(value, math.pi / 2.0)


def _format_for(args, fallback: str) -> str:
    if args.format:
        return args.format
    if args.out and args.out.endswith(".csv"):
        return "csv"
    if args.out and args.out.endswith(".json"):
        return "json"
    return fallback


def _print_classes(cell: CellResult) -> None:
    where = f"gamma={cell.gamma:.6g}" + (f", p={cell.p:.6g}" if cell.p is not None else "")
    if not cell.classes:
        print(f"{where}: no pure-strategy NE")
        return
    print(f"{where}: {len(cell.classes)} NE class(es)")
    for cls in cell.classes:
        payoffs = ", ".join(f"{x:.6g}" for x in cls.payoffs)
        sums = "; ".join(
            f"{pair}: {{{', '.join(f'{v:.6g}' for v in vals)}}}"
            for pair, vals in sorted(cls.phase_sums.items())
        )
        print(
            f"  {class_id(cls)}  payoffs=({payoffs})  profiles={cls.n_profiles}"
            + (f"  phase sums {sums}" if sums else "")
        )


def _cmd_solve(args) -> int:
    gamma = _check_gamma(parse_angle(args.gamma))
    p = _check_unit(args.p, "--p")
    game = _resolve_game(args.game, p)
    steps = _grid_steps(args)
    sset = enumerate_strategies(steps)

    if isinstance(game, BayesianGame):
        if args.circuit == "full":
            control = (
                ControlSpec(
                    parse_angle(args.theta_q),
                    parse_angle(args.phi_q),
                    parse_angle(args.alpha_q),
                )
                if args.theta_q is not None
                else control_for_probability(game.p)
            )
            records = find_ne_bayesian_circuit(game, gamma, sset, args.eps_tie, control)
        else:
            records = find_ne_bayesian(game, gamma, sset, args.eps_tie)
        cell = CellResult(game.p, gamma, tuple(classify(records, sset)))
        p_values: tuple[float, ...] = (game.p,)
    else:
        records = find_ne_two_player(game, gamma, sset, args.eps_tie)
        cell = CellResult(None, gamma, tuple(classify(records, sset)))
        p_values = ()

    result = SweepResult(
        SweepSpec(game, (gamma,), p_values, steps, args.eps_tie), (cell,)
    )
    _print_classes(cell)
    if args.out:
        emit(result, _format_for(args, "json"), args.out, kind="solve", circuit=args.circuit)
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    game = _resolve_game(args.game)
    steps = _grid_steps(args)
    if isinstance(game, BayesianGame):
        spec = SweepSpec(
            game=game,
            gamma_values=gamma_grid(args.gamma_step),
            p_values=p_grid(args.p_step),
            steps=steps,
            eps_tie=args.eps_tie,
        )
    else:
        spec = SweepSpec(
            game=game,
            gamma_values=gamma_grid(args.gamma_step),
            steps=steps,
            eps_tie=args.eps_tie,
        )
    result = run_sweep(spec, workers=args.jobs)
    occupied = sum(1 for c in result.cells if c.classes)
    print(
        f"swept {len(result.cells)} cells in {result.elapsed:.2f}s; "
        f"{occupied} have at least one NE"
    )
    if args.out:
        emit(result, _format_for(args, "csv"), args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_classify(args) -> int:
    loaded = load_result(args.infile)
    summaries = summarize_regions(loaded.result)
    for s in summaries:
        thetas = ",".join(f"{t:.6g}" for t in s.theta_profile)
        p_part = (
            f"p in [{s.p_range[0]:.6g}, {s.p_range[1]:.6g}], " if s.p_range else ""
        )
        print(
            f"theta=({thetas}) label={s.operator_label or '-'}: "
            f"{p_part}gamma in [{s.gamma_range[0]:.6g}, {s.gamma_range[1]:.6g}] "
            f"({s.n_cells} cells)"
        )
    if args.out:
        emit_regions(summaries, _format_for(args, "csv"), args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_emit_figure(args) -> int:
    fmt = args.format or ("json" if args.out.endswith(".json") else "csv")
    if args.fig == "bayesian":
        spec = SweepSpec(
            game=builtin_bayesian(),
            gamma_values=gamma_grid(),
            p_values=p_grid(),
        )
    else:
        game = builtin_pd() if args.fig == "pd" else builtin_da()
        spec = SweepSpec(game=game, gamma_values=gamma_grid())
    result = run_sweep(spec, workers=args.jobs)
    emit(result, fmt, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    loaded = load_result(args.infile)
    spec = loaded.result.spec
    eps = args.eps_tie if args.eps_tie is not None else spec.eps_tie
    sset = enumerate_strategies(spec.steps)
    checked = 0
    failures = []
    for cell in loaded.result.cells:
        if isinstance(spec.game, BayesianGame):
            game: TwoPlayerGame | BayesianGame = BayesianGame(
                spec.game.subgame_b1, spec.game.subgame_b2, cell.p
            )
        else:
            game = spec.game
        for cls in cell.classes:
            for rec in cls.members:
                checked += 1
                if not verify_ne(rec, game, cell.gamma, sset, eps):
                    failures.append((cell.p, cell.gamma, rec.profile))
    if failures:
        for p, gamma, profile in failures[:20]:
            print(
                f"FAIL p={p} gamma={gamma:.6g} profile={profile}", file=sys.stderr
            )
        print(
            f"{len(failures)} of {checked} recorded profiles are not equilibria",
            file=sys.stderr,
        )
        return 3
    print(f"verified {checked} recorded NE profiles: all pass")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("run 'qgame --help' for usage", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
