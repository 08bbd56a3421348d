"""Repeated double-game round robin with stepwise social coefficients.

Each player's social coefficient is an index into its own axis of a
:class:`TypeGrid` and may move at most one step per round.  A round has two
phases: both strategies first choose a coefficient change based on the
previous round, the changes are applied simultaneously, and only then do
both strategies choose an action.  Payoffs use the coefficient values of
that round.
"""

from __future__ import annotations

import csv
import importlib
import io
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ContractViolation, InvalidInput
from .games import format_rational
from .multigame import DoubleGame, TypeGrid, instantiate, local_ne

log = logging.getLogger(__name__)

COMPLETE, INCOMPLETE = "complete", "incomplete"


@dataclass(frozen=True)
class Observation:
    """What a strategy sees, always from its own seat (it is player 1 of ``dg``)."""

    round: int
    own_last: int | None
    opp_last: int | None
    own_coeff: Fraction
    own_index: int
    opp_coeff: Fraction | None
    dg: DoubleGame
    grid: TypeGrid


class Strategy:
    """Base class for tournament strategies.

    Subclasses override :meth:`act` and optionally :meth:`adjust`.  An
    instance plays a single match; the engine creates fresh instances and
    assigns ``rng`` before the first round.
    """

    name = "strategy"

    def __init__(self, initial_index: int = 0, name: str | None = None):
        self.initial_index = initial_index
        if name is not None:
            self.name = name
        self.rng = random.Random(0)

    def adjust(self, obs: Observation) -> int:
        return 0

    def act(self, obs: Observation) -> int:
        raise NotImplementedError


def _action(dg: DoubleGame, label: str) -> int:
    try:
        return dg.actions[0].index(label)
    except ValueError:
        raise InvalidInput(f"game has no action {label!r} for the strategy's seat") from None


def ne_lookup(dg: DoubleGame, lam, gam, tiebreak: str = "D") -> int:
    """Player 1's action prescribed by the local equilibria at ``(lam, gam)``.

    A unique own-action across all equilibria is played; if the equilibria
    disagree, the ``tiebreak`` action is played.  With no pure equilibrium,
    falls back to player 1's own action in its highest-payoff profile.
    """
    eqs = local_ne(dg, lam, gam)
    if not eqs:
        game = instantiate(dg, lam, gam)
        best = max(game.profiles(), key=lambda p: (game.payoffs[p][0], [-x for x in p]))
        log.warning("no pure equilibrium at (%s, %s); falling back to %s", lam, gam, game.label(best))
        return best[0]
    own = {p[0] for p in eqs}
    if len(own) == 1:
        return own.pop()
    return _action(dg, tiebreak)


def seg_update(prev_own: str, prev_opp: str) -> int:
    """Coefficient step after a round with the given (own, opponent) actions."""
    table = {("C", "C"): 0, ("C", "D"): 1, ("D", "C"): -1, ("D", "D"): 1}
    try:
        return table[(prev_own, prev_opp)]
    except KeyError:
        raise InvalidInput(f"SEG only understands C/D, got ({prev_own}, {prev_opp})") from None


class SEG(Strategy):
    """Equilibrium lookup with a defect tiebreak and a four-rule coefficient update."""

    name = "SEG"

    def adjust(self, obs):
        if obs.own_last is None:
            return 0
        labels = obs.dg.actions
        return seg_update(labels[0][obs.own_last], labels[1][obs.opp_last])

    def act(self, obs):
        # without the opponent's coefficient, assume it mirrors our own
        gam = obs.opp_coeff if obs.opp_coeff is not None else obs.own_coeff
        return ne_lookup(obs.dg, obs.own_coeff, gam)


class AllC(Strategy):
    name = "ALLC"

    def __init__(self, initial_index: int = -1, name: str | None = None):
        super().__init__(initial_index, name)

    def act(self, obs):
        return _action(obs.dg, "C")


class AllD(Strategy):
    name = "ALLD"

    def act(self, obs):
        return _action(obs.dg, "D")


class TitForTat(Strategy):
    name = "TFT"

    def act(self, obs):
        if obs.opp_last is None:
            return _action(obs.dg, "C")
        return _action(obs.dg, obs.dg.actions[1][obs.opp_last])


BUILTINS: dict[str, type[Strategy]] = {"SEG": SEG, "ALLC": AllC, "ALLD": AllD, "TFT": TitForTat}


def register_strategy(name: str, cls: type[Strategy]) -> None:
    BUILTINS[name] = cls


def strategy_factory(spec: str) -> Callable[[], Strategy]:
    """Resolve ``NAME``, ``NAME@INDEX`` or ``module:Class[@INDEX]`` into a factory.

    ``INDEX`` is the initial coefficient index (negative counts from the top).
    A non-default index is kept in the strategy's name.
    """
    base, _, idx = spec.partition("@")
    if ":" in base:
        mod_name, _, attr = base.partition(":")
        try:
            cls = getattr(importlib.import_module(mod_name), attr)
        except (ImportError, AttributeError) as exc:
            raise InvalidInput(f"cannot load strategy {base!r}: {exc}") from None
    elif base in BUILTINS:
        cls = BUILTINS[base]
    else:
        raise InvalidInput(f"unknown strategy {base!r}; built-ins are {sorted(BUILTINS)}")
    if not idx:
        return cls
    try:
        index = int(idx)
    except ValueError:
        raise InvalidInput(f"bad initial index in {spec!r}") from None
    label = spec if ":" not in base else f"{attr}@{index}"
    return lambda: cls(initial_index=index, name=label)


def step(strategy: Strategy, obs: Observation) -> tuple[int, int]:
    """One round for a lone strategy: coefficient change, then action at the new coefficient."""
    delta = strategy.adjust(obs)
    if delta not in (-1, 0, 1):
        raise ContractViolation(f"{strategy.name} returned coefficient change {delta!r}")
    vals = obs.grid.lambda_values
    idx = min(max(obs.own_index + delta, 0), len(vals) - 1)
    moved = Observation(obs.round, obs.own_last, obs.opp_last, vals[idx], idx, obs.opp_coeff, obs.dg, obs.grid)
    return delta, strategy.act(moved)


@dataclass(frozen=True)
class RoundRecord:
    round: int
    action_1: int
    action_2: int
    coeff_1: Fraction
    coeff_2: Fraction
    payoff_1: Fraction
    payoff_2: Fraction
    index_1: int
    index_2: int


@dataclass(frozen=True)
class MatchRecord:
    names: tuple[str, str]
    rounds: tuple[RoundRecord, ...]
    totals: tuple[Fraction, Fraction]
    forfeited_by: int | None = None
    error: str | None = None

    def actions(self, seat: int, labels=("C", "D")) -> str:
        return "".join(labels[r.action_1 if seat == 0 else r.action_2] for r in self.rounds)


def _resolve_index(idx: int, size: int, who: str) -> int:
    if not -size <= idx < size:
        raise InvalidInput(f"{who}: initial coefficient index {idx} outside grid of {size}")
    return idx % size


def play_match(
    strat_a: Strategy,
    strat_b: Strategy,
    dg: DoubleGame,
    grid: TypeGrid,
    rounds: int = 200,
    mode: str = COMPLETE,
    seed: int | str = 0,
) -> MatchRecord:
    """Play ``rounds`` rounds; ``strat_a`` sits as player 1, ``strat_b`` as player 2.

    A strategy that returns an invalid coefficient change or action forfeits:
    play stops, its total becomes 0 and the opponent keeps what it earned.
    """
    if rounds < 1:
        raise InvalidInput("a match needs at least one round")
    if mode not in (COMPLETE, INCOMPLETE):
        raise InvalidInput(f"mode must be {COMPLETE!r} or {INCOMPLETE!r}")
    seats = (strat_a, strat_b)
    views = ((dg, grid), (dg.swapped(), grid.swapped()))
    values = (grid.lambda_values, grid.gamma_values)
    for seat, s in enumerate(seats):
        s.rng = random.Random(f"{seed}:{seat}")
    idx = [_resolve_index(s.initial_index, len(values[i]), s.name) for i, s in enumerate(seats)]
    last: list[int | None] = [None, None]
    records = []
    totals = [Fraction(0), Fraction(0)]

    def observe(seat, r):
        opp = 1 - seat
        return Observation(
            r,
            last[seat],
            last[opp],
            values[seat][idx[seat]],
            idx[seat],
            values[opp][idx[opp]] if mode == COMPLETE else None,
            *views[seat],
        )

    for r in range(1, rounds + 1):
        try:
            deltas = []
            for seat, s in enumerate(seats):
                d = s.adjust(observe(seat, r))
                if d not in (-1, 0, 1):
                    raise _Forfeit(seat, f"{s.name} returned coefficient change {d!r} in round {r}")
                deltas.append(d)
            for seat in (0, 1):
                idx[seat] = min(max(idx[seat] + deltas[seat], 0), len(values[seat]) - 1)
            acts = []
            for seat, s in enumerate(seats):
                a = s.act(observe(seat, r))
                if not isinstance(a, int) or not 0 <= a < dg.shape[seat]:
                    raise _Forfeit(seat, f"{s.name} returned invalid action {a!r} in round {r}")
                acts.append(a)
        except _Forfeit as f:
            totals[f.seat] = Fraction(0)
            log.warning("match %s vs %s forfeited: %s", strat_a.name, strat_b.name, f.reason)
            return MatchRecord((strat_a.name, strat_b.name), tuple(records), tuple(totals), f.seat, f.reason)
        lam, gam = values[0][idx[0]], values[1][idx[1]]
        prof = tuple(acts)
        pay = tuple(
            (1 - w) * dg.g1.payoffs[prof][j] + w * dg.g2.payoffs[prof][j] for j, w in enumerate((lam, gam))
        )
        totals[0] += pay[0]
        totals[1] += pay[1]
        records.append(RoundRecord(r, acts[0], acts[1], lam, gam, pay[0], pay[1], idx[0], idx[1]))
        last = [acts[0], acts[1]]
    return MatchRecord((strat_a.name, strat_b.name), tuple(records), tuple(totals))


class _Forfeit(Exception):
    def __init__(self, seat: int, reason: str):
        super().__init__(reason)
        self.seat, self.reason = seat, reason


@dataclass(frozen=True)
class Standing:
    rank: int
    name: str
    total: Fraction
    average: Fraction
    matches: int
    initial_coeff: Fraction
    round1_action: str


@dataclass(frozen=True)
class TournamentResult:
    standings: tuple[Standing, ...]
    matches: tuple[MatchRecord, ...] = field(repr=False)
    rounds: int = 200
    mode: str = COMPLETE
    seed: int | str = 0

    def standing(self, name: str) -> Standing:
        for s in self.standings:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self, labels=("C", "D")) -> dict:
        return {
            "rounds": self.rounds,
            "mode": self.mode,
            "seed": self.seed,
            "ranking": [
                {
                    "rank": s.rank,
                    "strategy": s.name,
                    "total": format_rational(s.total),
                    "average": format_rational(s.average),
                    "total_decimal": f"{float(s.total):.2f}",
                    "average_decimal": f"{float(s.average):.2f}",
                    "matches": s.matches,
                    "initial_coeff": format_rational(s.initial_coeff),
                    "round1_action": s.round1_action,
                }
                for s in self.standings
            ],
            "matches": [
                {
                    "players": list(m.names),
                    "totals": [format_rational(t) for t in m.totals],
                    "forfeited_by": m.forfeited_by,
                    "error": m.error,
                    "actions": [m.actions(0, labels), m.actions(1, labels)],
                }
                for m in self.matches
            ],
        }

    def ranking_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "strategy", "total", "average", "initial_coeff", "round1_action"])
        for s in self.standings:
            w.writerow([
                s.rank, s.name, f"{float(s.total):.2f}", f"{float(s.average):.2f}",
                f"{float(s.initial_coeff):.2f}", s.round1_action,
            ])
        return buf.getvalue()

    def trace_csv(self, labels=("C", "D")) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["match", "player_1", "player_2", "round", "action_1", "action_2",
                    "coeff_1", "coeff_2", "payoff_1", "payoff_2"])
        for i, m in enumerate(self.matches):
            for r in m.rounds:
                w.writerow([
                    i, m.names[0], m.names[1], r.round, labels[r.action_1], labels[r.action_2],
                    format_rational(r.coeff_1), format_rational(r.coeff_2),
                    format_rational(r.payoff_1), format_rational(r.payoff_2),
                ])
        return buf.getvalue()


def run_tournament(
    strategies: Sequence[Callable[[], Strategy] | str],
    dg: DoubleGame,
    grid: TypeGrid,
    rounds: int = 200,
    mode: str = COMPLETE,
    seed: int | str = 0,
) -> TournamentResult:
    """Round robin: every unordered pair of entrants, self-pairs included, meets once.

    A strategy's score in a self-match is the mean of its two seats.
    Standings are sorted by total score (descending), ties by name.
    """
    if not strategies:
        raise InvalidInput("a tournament needs at least one strategy")
    factories = [strategy_factory(s) if isinstance(s, str) else s for s in strategies]
    names = [f().name for f in factories]
    if len(set(names)) != len(names):
        raise InvalidInput(f"strategy names must be distinct, got {names}")
    totals = {n: Fraction(0) for n in names}
    counts = {n: 0 for n in names}
    first_moves: dict[str, set[str]] = {n: set() for n in names}
    initial = {}
    matches = []
    for i in range(len(factories)):
        for j in range(i, len(factories)):
            a, b = factories[i](), factories[j]()
            rec = play_match(a, b, dg, grid, rounds, mode, seed=f"{seed}:{i}:{j}")
            matches.append(rec)
            initial.setdefault(a.name, grid.lambda_values[a.initial_index % grid.k])
            if i == j:
                totals[a.name] += (rec.totals[0] + rec.totals[1]) / 2
                counts[a.name] += 1
            else:
                totals[a.name] += rec.totals[0]
                totals[b.name] += rec.totals[1]
                counts[a.name] += 1
                counts[b.name] += 1
            if rec.rounds:
                first_moves[a.name].add(dg.actions[0][rec.rounds[0].action_1])
                first_moves[b.name].add(dg.actions[1][rec.rounds[0].action_2])
    order = sorted(names, key=lambda n: (-totals[n], n))
    standings = tuple(
        Standing(
            rank, n, totals[n], totals[n] / counts[n], counts[n], initial[n],
            "/".join(sorted(first_moves[n])) or "-",
        )
        for rank, n in enumerate(order, start=1)
    )
    return TournamentResult(standings, tuple(matches), rounds, mode, seed)
