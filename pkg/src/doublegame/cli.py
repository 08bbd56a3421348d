"""Command-line entry point.

Exit codes: 0 on success, 1 when a game, grid or parameter set violates a
required invariant, 2 on I/O, JSON or argument parse errors.  Every JSON
input reader also accepts a ``social-dg`` bundle and picks the part it needs.
"""

from __future__ import annotations

import argparse
import contextlib
import datetime
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import ContractViolation, GameError, InvalidInput
from .games import (
    NormalFormGame,
    dumps,
    format_rational,
    game_from_dict,
    loads,
    mixed_nash_2x2,
    parse_rational,
    pure_nash,
)
from .multigame import DoubleGame, TypeGrid, instantiate, interpolate_dg, region_diagram
from .regularity import (
    BayesianPureProfile,
    EvalCounter,
    TypePrior,
    coherent_pairs,
    completely_pure_regular,
    threshold,
    verify_bayes_ne,
)
from .render import ne_table_csv, region_svg
from .social import SocialParams, build_dg, classify_case, crossing_points, example_grid
from .tournament import BUILTINS, COMPLETE, INCOMPLETE, run_tournament

_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+|\.\d+)?$"}
_NUMBER = {"anyOf": [_RATIONAL, {"type": "number"}]}

SCHEMAS = {
    "game": {
        "type": "object",
        "required": ["actions", "payoffs"],
        "properties": {
            "players": {"type": "integer", "minimum": 1},
            "actions": {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 1}},
            "payoffs": {
                "type": "object",
                "description": "keys are comma-joined action labels, one per player",
                "additionalProperties": {"type": "array", "items": _NUMBER},
            },
        },
    },
    "double_game": {
        "type": "object",
        "required": ["g1", "g2"],
        "properties": {
            "type": {"const": "double_game"},
            "g1": {"$ref": "#/game"},
            "g2": {"$ref": "#/game"},
        },
    },
    "grid": {
        "type": "object",
        "required": ["lambda", "gamma"],
        "properties": {
            "lambda": {"type": "array", "items": _NUMBER, "minItems": 2},
            "gamma": {"type": "array", "items": _NUMBER, "minItems": 2},
        },
    },
    "prior": {
        "type": "object",
        "required": ["joint"],
        "properties": {"joint": {"type": "array", "items": {"type": "array", "items": _NUMBER}}},
    },
    "social_params": {
        "type": "object",
        "required": ["T", "R", "P", "S", "M1", "M2"],
        "properties": {k: _NUMBER for k in ("T", "R", "P", "S", "M1", "M2", "M1p", "M2p")},
    },
    "bundle": {
        "type": "object",
        "required": ["dg"],
        "properties": {
            "dg": {"$ref": "#/double_game"},
            "params": {"$ref": "#/social_params"},
            "crossing_points": {"type": "object"},
            "case": {"enum": ["A_LT_B", "B_LT_A", "A_EQ_B"]},
            "grid": {"$ref": "#/grid"},
        },
    },
}


class InputError(Exception):
    """Unreadable file, bad JSON or a malformed command-line value (exit code 2)."""


@dataclass
class RunConfig:
    subcommand: str
    output: Path | None
    timestamps: bool


# -- readers -----------------------------------------------------------------

def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def read_dg(path) -> DoubleGame:
    data = _load(path)
    return DoubleGame.from_dict(data.get("dg", data))


def read_grid(path) -> TypeGrid:
    data = _load(path)
    if "grid" in data:
        data = data["grid"]
    return TypeGrid.from_dict(data)


def read_params(path) -> SocialParams:
    data = _load(path)
    return SocialParams.from_dict(data.get("params", data))


def _game_or_instance(args) -> NormalFormGame:
    """A plain game from ``--game``, or a double game instantiated at ``--lam``/``--gam``."""
    path = args.game or args.dg
    if path is None:
        raise InputError("give --game FILE or --dg FILE")
    data = _load(path)
    if "g1" in data or "dg" in data:
        if args.lam is None or args.gam is None:
            raise InputError("a double game needs --lam and --gam")
        return instantiate(DoubleGame.from_dict(data.get("dg", data)), args.lam, args.gam)
    return game_from_dict(data)


def _profile_labels(game: NormalFormGame, profiles) -> list[str]:
    return [",".join(game.label(p)) for p in profiles]


# -- subcommands -------------------------------------------------------------

def cmd_ne(args):
    game = _game_or_instance(args)
    return {"equilibria": _profile_labels(game, pure_nash(game))}


def cmd_mixed(args):
    game = _game_or_instance(args)
    res = mixed_nash_2x2(game)
    return {
        "actions": [list(a) for a in game.actions],
        "degenerate": res.degenerate,
        "components": [
            {"p": [format_rational(x) for x in (pr.lo, pr.hi)], "q": [format_rational(x) for x in (qr.lo, qr.hi)]}
            for pr, qr in res.components
        ],
        "equilibria": [
            {"p": [format_rational(x) for x in p], "q": [format_rational(x) for x in q]} for p, q in res.equilibria
        ],
    }


def cmd_regions(args):
    diagram = region_diagram(read_dg(args.dg))
    if args.svg:
        _write(Path(args.svg), region_svg(diagram))
    return diagram.to_dict()


def _thresholds(dg: DoubleGame, grid: TypeGrid) -> list[dict]:
    out = []
    for player in (0, 1):
        for idx, w in enumerate(grid.values(player)):
            for pair in coherent_pairs(dg, grid, player, idx):
                u, v = pair.opp_actions
                entry = {
                    "player": player + 1,
                    "type_index": idx + 1,
                    "type": format_rational(w),
                    "action": dg.actions[player][pair.own_action],
                    "opponent_actions": [dg.actions[1 - player][u], dg.actions[1 - player][v]],
                }
                try:
                    entry["threshold"] = threshold(dg, grid, pair)
                except ContractViolation as exc:
                    entry["threshold"] = None
                    entry["note"] = str(exc)
                out.append(entry)
    return out


def cmd_regularity(args):
    dg, grid = read_dg(args.dg), read_grid(args.grid or args.dg)
    if args.table:
        return ne_table_csv(dg, grid)
    counter = EvalCounter()
    res = completely_pure_regular(dg, grid, counter)
    certs = []
    for cert in res.all_certificates():
        if len(certs) >= args.max_certificates:
            break
        certs.append(cert.label(dg))
    return {
        "verdict": "completely pure regular" if res.completely_pure_regular else "not completely pure regular",
        "completely_pure_regular": res.completely_pure_regular,
        "grid": grid.to_dict(),
        "pure_regular_quadruples": [
            [dg.actions[0][q.s], dg.actions[0][q.t], dg.actions[1][q.u], dg.actions[1][q.v]] for q in res.quadruples
        ],
        "certificate": res.certificate.label(dg) if res.certificate else None,
        "certificates": sorted(certs),
        "thresholds": _thresholds(dg, grid),
        "evaluations": counter.count,
    }


def cmd_bayes_verify(args):
    dg, grid = read_dg(args.dg), read_grid(args.grid or args.dg)
    profile = BayesianPureProfile.parse(dg, args.profile)
    if args.random_priors:
        rng = random.Random(args.seed)
        failures = []
        for i in range(args.random_priors):
            prior = TypePrior.random(grid.k, grid.ell, rng)
            rep = verify_bayes_ne(dg, grid, profile, prior)
            if not rep.ok:
                failures.append({"prior_index": i, "prior": prior.to_dict(), **rep.to_dict(dg)})
        return {
            "profile": profile.label(dg),
            "priors": args.random_priors,
            "seed": args.seed,
            "passed": args.random_priors - len(failures),
            "bayes_nash_for_all": not failures,
            "failures": failures[:5],
        }
    prior = TypePrior.from_dict(_load(args.prior)) if args.prior else TypePrior.uniform(grid.k, grid.ell)
    return {"profile": profile.label(dg), "prior": prior.to_dict(), **verify_bayes_ne(dg, grid, profile, prior).to_dict(dg)}


def cmd_social_dg(args):
    params = SocialParams(args.T, args.R, args.P, args.S, args.M1, args.M2,
                          args.S if args.M1p is None else args.M1p,
                          args.S if args.M2p is None else args.M2p)
    dg = build_dg(params, strict_punishment=not args.relax)
    return {
        "dg": dg.to_dict(),
        "params": params.to_dict(),
        "crossing_points": crossing_points(params).to_dict(),
        "case": classify_case(params).value,
        "variant": args.variant,
        "grid": example_grid(params, args.variant).to_dict(),
    }


def cmd_interpolate(args):
    dg = read_dg(args.dg)
    return {
        "p": format_rational(args.p),
        "p0": format_rational(args.p0),
        "p1": format_rational(args.p1),
        "points": [
            {"gamma": format_rational(g), "q": format_rational(interpolate_dg(dg, args.p, args.p0, args.p1, g))}
            for g in args.gamma
        ],
    }


def cmd_tournament(args):
    params = read_params(args.params) if args.params else SocialParams.tournament()
    dg = build_dg(params)
    grid = example_grid(params, args.grid) if args.grid in ("I", "II") else read_grid(args.grid)
    result = run_tournament(args.strategies, dg, grid, args.rounds, args.mode, args.seed)
    if args.trace:
        _write(Path(args.trace), result.trace_csv())
    if args.out == "csv":
        return result.ranking_csv()
    return {"params": params.to_dict(), "grid": grid.to_dict(), **result.to_dict()}


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", type=Path, help="write output here instead of stdout")
    common.add_argument("--timestamps", action="store_true", help="add a generation time to JSON output")

    parser = argparse.ArgumentParser(prog="doublegame", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true", help="print version information as JSON")
    parser.add_argument("--schema", action="store_true", help="print the JSON input schemas")
    sub = parser.add_subparsers(dest="subcommand")
    R = _rational_arg

    def game_inputs(p):
        p.add_argument("--game", help="normal-form game JSON")
        p.add_argument("--dg", help="double game JSON (needs --lam and --gam)")
        p.add_argument("--lam", type=R)
        p.add_argument("--gam", type=R)

    p = sub.add_parser("ne", parents=[common], help="pure Nash equilibria")
    game_inputs(p)
    p.set_defaults(func=cmd_ne)

    p = sub.add_parser("mixed", parents=[common], help="all equilibria of a 2x2 game")
    game_inputs(p)
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("regions", parents=[common], help="equilibrium region diagram")
    p.add_argument("--dg", required=True)
    p.add_argument("--svg", help="also write an SVG plot here")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("regularity", parents=[common], help="completely pure regular test")
    p.add_argument("--dg", required=True)
    p.add_argument("--grid", help="grid JSON (defaults to the grid inside a bundle)")
    p.add_argument("--table", action="store_true", help="print the local NE table as CSV instead")
    p.add_argument("--max-certificates", type=int, default=64)
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("bayes-verify", parents=[common], help="check a pure Bayesian profile")
    p.add_argument("--dg", required=True)
    p.add_argument("--grid")
    p.add_argument("--profile", required=True, help="e.g. DDCC,DDCC")
    p.add_argument("--prior", help="joint prior JSON (default uniform)")
    p.add_argument("--random-priors", type=int, default=0, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bayes_verify)

    p = sub.add_parser("social-dg", parents=[common], help="build the PD plus social game")
    for name in ("T", "R", "P", "S", "M1", "M2"):
        p.add_argument(f"--{name}", type=R, required=True)
    p.add_argument("--M1p", type=R, help="defaults to S")
    p.add_argument("--M2p", type=R, help="defaults to S")
    p.add_argument("--variant", choices=("I", "II"), default="I")
    p.add_argument("--relax", action="store_true", help="allow M' different from S")
    p.set_defaults(func=cmd_social_dg)

    p = sub.add_parser("interpolate", parents=[common], help="column mixing probability across gamma")
    p.add_argument("--dg", required=True)
    for name in ("p", "p0", "p1"):
        p.add_argument(f"--{name}", type=R, required=True)
    p.add_argument("--gamma", type=R, nargs="+", required=True)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("tournament", parents=[common], help="repeated round robin")
    p.add_argument("--rounds", type=int, default=200)
    p.add_argument("--mode", choices=(COMPLETE, INCOMPLETE), default=COMPLETE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategies", nargs="+", default=list(BUILTINS),
                   help="NAME[@INDEX] or module:Class[@INDEX]")
    p.add_argument("--params", help="social parameters JSON (default: tournament constants)")
    p.add_argument("--grid", default="II", help="I, II or a grid JSON file")
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--trace", help="write the per-round CSV trace here")
    p.set_defaults(func=cmd_tournament)
    return parser


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _emit(result, cfg: RunConfig, stdout) -> None:
    if isinstance(result, str):
        text = result
    else:
        if cfg.timestamps:
            result = {**result, "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat()}
        text = dumps(result)
    if cfg.output is None:
        stdout.write(text)
    else:
        _write(cfg.output, text)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        if args.version:
            stdout.write(dumps({"name": "doublegame", "version": __version__}))
            return 0
        if args.schema:
            stdout.write(dumps(SCHEMAS))
            return 0
        if args.subcommand is None:
            parser.print_usage(stderr)
            stderr.write("error: a subcommand is required\n")
            return 2
        cfg = RunConfig(args.subcommand, args.output, args.timestamps)
        _emit(args.func(args), cfg, stdout)
        return 0
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except GameError as exc:
        stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
