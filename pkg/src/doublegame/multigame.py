"""Multi-Games, Double Games and their weight-parameterised equilibria.

A Double Game (DG) pairs two 2-player basic games with identical strategy
sets.  Player 1 puts weight ``lam`` on the second game, player 2 puts
weight ``gam`` on it.  Since each player's payoff depends only on its own
weight, and affinely, the set of weights at which a profile is a Nash
equilibrium is an axis-aligned rectangle.  Most of this module exploits
that structure and is tested against direct enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import ContractViolation, DegenerateInterpolation, InvalidInput
from .games import (
    NormalFormGame,
    PureProfile,
    format_rational,
    game_from_dict,
    game_to_dict,
    parse_rational,
    pure_nash,
)
from .intervals import ONE, ZERO, Interval, solve_affine


@dataclass(frozen=True)
class MultiGame:
    """``M`` basic games over the same number of players."""

    games: tuple[NormalFormGame, ...]

    def __post_init__(self):
        games = tuple(self.games)
        if not games:
            raise InvalidInput("a multi-game needs at least one basic game")
        n = games[0].num_players
        if any(g.num_players != n for g in games):
            raise InvalidInput("all basic games must have the same number of players")
        object.__setattr__(self, "games", games)

    @property
    def num_players(self) -> int:
        return self.games[0].num_players

    @property
    def is_uniform(self) -> bool:
        return all(g.actions == self.games[0].actions for g in self.games)


def _check_weights(mg: MultiGame, weights) -> tuple[tuple[Fraction, ...], ...]:
    rows = tuple(tuple(parse_rational(w) for w in row) for row in weights)
    if len(rows) != mg.num_players:
        raise InvalidInput(f"need one weight row per player ({mg.num_players}), got {len(rows)}")
    for j, row in enumerate(rows):
        if len(row) != len(mg.games):
            raise InvalidInput(f"player {j} has {len(row)} weights for {len(mg.games)} games")
        if any(not 0 <= w <= 1 for w in row):
            raise InvalidInput(f"player {j} weights {row} leave [0, 1]")
        if sum(row) != 1:
            raise ContractViolation(f"player {j} weights sum to {format_rational(sum(row))}, not 1")
    return rows


def compose(mg: MultiGame, weights, uniform: bool | None = None) -> NormalFormGame:
    """Concrete game where player ``j`` earns ``sum_i weights[j][i] * pi_ij``.

    A uniform multi-game keeps the common strategy sets (one action is
    played in every basic game).  Otherwise each player's strategy is a
    tuple of component actions, labelled ``"a|b|..."``.  ``uniform=None``
    picks the uniform form whenever the strategy sets allow it.
    """
    w = _check_weights(mg, weights)
    if uniform is None:
        uniform = mg.is_uniform
    if uniform:
        if not mg.is_uniform:
            raise InvalidInput("basic games do not share strategy sets; cannot compose uniformly")
        base = mg.games[0]
        payoffs = {
            prof: tuple(
                sum(w[j][i] * g.payoffs[prof][j] for i, g in enumerate(mg.games))
                for j in range(mg.num_players)
            )
            for prof in base.profiles()
        }
        return NormalFormGame(base.actions, payoffs)

    n = mg.num_players
    # player j's compound strategies: one action index per basic game
    compound = [list(itertools.product(*(range(g.shape[j]) for g in mg.games))) for j in range(n)]
    actions = tuple(
        tuple("|".join(g.actions[j][a] for g, a in zip(mg.games, combo)) for combo in compound[j])
        for j in range(n)
    )
    payoffs = {}
    for prof in itertools.product(*(range(len(c)) for c in compound)):
        vec = []
        for j in range(n):
            total = Fraction(0)
            for i, g in enumerate(mg.games):
                component = tuple(compound[k][prof[k]][i] for k in range(n))
                total += w[j][i] * g.payoffs[component][j]
            vec.append(total)
        payoffs[prof] = tuple(vec)
    return NormalFormGame(actions, payoffs)


@dataclass(frozen=True)
class TypeGrid:
    """Finite, strictly increasing type values per player, both containing 0 and 1."""

    lambda_values: tuple[Fraction, ...]
    gamma_values: tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("lambda_values", "gamma_values"):
            vals = tuple(parse_rational(v) for v in getattr(self, name))
            if len(vals) < 2:
                raise InvalidInput(f"{name} needs at least the two extreme types")
            if vals[0] != 0 or vals[-1] != 1:
                raise InvalidInput(f"{name} must start at 0 and end at 1")
            if any(a >= b for a, b in zip(vals, vals[1:])):
                raise InvalidInput(f"{name} must be strictly increasing")
            object.__setattr__(self, name, vals)

    @classmethod
    def extremes(cls) -> TypeGrid:
        return cls((ZERO, ONE), (ZERO, ONE))

    @classmethod
    def uniform(cls, k: int, ell: int | None = None) -> TypeGrid:
        ell = k if ell is None else ell
        return cls(
            tuple(Fraction(i, k - 1) for i in range(k)),
            tuple(Fraction(i, ell - 1) for i in range(ell)),
        )

    @property
    def k(self) -> int:
        return len(self.lambda_values)

    @property
    def ell(self) -> int:
        return len(self.gamma_values)

    def values(self, player: int) -> tuple[Fraction, ...]:
        return self.lambda_values if player == 0 else self.gamma_values

    def swapped(self) -> TypeGrid:
        return TypeGrid(self.gamma_values, self.lambda_values)

    def to_dict(self) -> dict:
        return {
            "lambda": [format_rational(v) for v in self.lambda_values],
            "gamma": [format_rational(v) for v in self.gamma_values],
        }

    @classmethod
    def from_dict(cls, data) -> TypeGrid:
        try:
            return cls(tuple(data["lambda"]), tuple(data["gamma"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"grid JSON missing field: {exc}") from None


@dataclass(frozen=True)
class DoubleGame:
    """Two 2-player basic games with identical strategy sets per player."""

    g1: NormalFormGame
    g2: NormalFormGame

    def __post_init__(self):
        for g in (self.g1, self.g2):
            if g.num_players != 2:
                raise InvalidInput("double game components must be 2-player games")
        if self.g1.actions != self.g2.actions:
            raise InvalidInput(
                f"basic games disagree on strategy sets: {self.g1.actions} vs {self.g2.actions}"
            )

    @property
    def actions(self) -> tuple[tuple[str, ...], ...]:
        return self.g1.actions

    @property
    def shape(self) -> tuple[int, ...]:
        return self.g1.shape

    def profiles(self):
        return self.g1.profiles()

    def as_multigame(self) -> MultiGame:
        return MultiGame((self.g1, self.g2))

    def swapped(self) -> DoubleGame:
        """The same game with the players' seats exchanged."""
        def swap(g):
            payoffs = {(b, a): (v[1], v[0]) for (a, b), v in g.payoffs.items()}
            return NormalFormGame((g.actions[1], g.actions[0]), payoffs)
        return DoubleGame(swap(self.g1), swap(self.g2))

    @cached_property
    def rectangles(self) -> dict[PureProfile, tuple[Interval, Interval]]:
        return {prof: ne_region(self, prof) for prof in self.profiles()}

    def to_dict(self) -> dict:
        return {"type": "double_game", "g1": game_to_dict(self.g1), "g2": game_to_dict(self.g2)}

    @classmethod
    def from_dict(cls, data) -> DoubleGame:
        try:
            return cls(game_from_dict(data["g1"]), game_from_dict(data["g2"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"double-game JSON missing field: {exc}") from None


def _check_weight(name: str, value) -> Fraction:
    value = parse_rational(value)
    if not 0 <= value <= 1:
        raise InvalidInput(f"{name} = {format_rational(value)} is outside [0, 1]")
    return value


def instantiate(dg: DoubleGame, lam, gam) -> NormalFormGame:
    lam, gam = _check_weight("lambda", lam), _check_weight("gamma", gam)
    return compose(dg.as_multigame(), ((1 - lam, lam), (1 - gam, gam)), uniform=True)


def _own_payoff(g: NormalFormGame, player: int, own: int, opp: int) -> Fraction:
    prof = (own, opp) if player == 0 else (opp, own)
    return g.payoffs[prof][player]


def br_interval(dg: DoubleGame, player: int, own: int, opp: int) -> Interval:
    """Weights of ``player`` at which ``own`` is a weak best response to ``opp``."""
    if player not in (0, 1):
        raise InvalidInput(f"player must be 0 or 1, got {player!r}")
    if not 0 <= own < dg.shape[player] or not 0 <= opp < dg.shape[1 - player]:
        raise InvalidInput(f"action pair ({own}, {opp}) out of range for player {player}")
    result = Interval.unit()
    for alt in range(dg.shape[player]):
        if alt == own:
            continue
        # advantage of own over alt at weight w: d1 + w * (d2 - d1)
        d1 = _own_payoff(dg.g1, player, own, opp) - _own_payoff(dg.g1, player, alt, opp)
        d2 = _own_payoff(dg.g2, player, own, opp) - _own_payoff(dg.g2, player, alt, opp)
        result = result & solve_affine(d1, d2 - d1, ">=")
        if result.is_empty:
            break
    return result


def ne_region(dg: DoubleGame, profile: Sequence[int]) -> tuple[Interval, Interval]:
    """Rectangle of ``(lam, gam)`` where ``profile`` is a pure NE."""
    s, u = profile
    return br_interval(dg, 0, s, u), br_interval(dg, 1, u, s)


def local_ne(dg: DoubleGame, lam, gam) -> list[PureProfile]:
    """Pure NE of the game instantiated at ``(lam, gam)``, in lexicographic order."""
    lam, gam = _check_weight("lambda", lam), _check_weight("gamma", gam)
    return [p for p, (i1, i2) in dg.rectangles.items() if lam in i1 and gam in i2]


# -- region diagrams -------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A cell of one weight axis: a single breakpoint or an open gap between two.

    The gaps touching 0 or 1 include that extreme unless it is itself a
    breakpoint.
    """

    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def sample(self) -> Fraction:
        return self.lo if self.is_point else (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if self.is_point:
            return x == self.lo
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def describe(self, var: str) -> str:
        if self.is_point:
            return f"{var}={format_rational(self.lo)}"
        left = "<=" if self.lo_closed else "<"
        right = "<=" if self.hi_closed else "<"
        return f"{format_rational(self.lo)}{left}{var}{right}{format_rational(self.hi)}"


def _segments(breaks: Sequence[Fraction]) -> list[Segment]:
    interior = [b for b in breaks if 0 < b < 1]
    cuts = [ZERO, *interior, ONE]
    segs = []
    if ZERO in breaks:
        segs.append(Segment(ZERO, ZERO, True, True))
    for i, (lo, hi) in enumerate(zip(cuts, cuts[1:])):
        lo_closed = i == 0 and ZERO not in breaks
        hi_closed = i == len(cuts) - 2 and ONE not in breaks
        segs.append(Segment(lo, hi, lo_closed, hi_closed))
        if i < len(cuts) - 2:
            segs.append(Segment(hi, hi, True, True))
    if ONE in breaks:
        segs.append(Segment(ONE, ONE, True, True))
    return segs


@dataclass(frozen=True)
class RegionCell:
    lam: Segment
    gam: Segment
    equilibria: tuple[PureProfile, ...]

    @property
    def is_generic(self) -> bool:
        return not self.lam.is_point and not self.gam.is_point


@dataclass(frozen=True)
class RegionDiagram:
    """Partition of the unit square into cells with constant pure-NE sets.

    Cells are ordered row-major: by ``gam`` cell from low to high, then by
    ``lam`` cell.
    """

    dg: DoubleGame
    lambda_breaks: tuple[Fraction, ...]
    gamma_breaks: tuple[Fraction, ...]
    lambda_segments: tuple[Segment, ...]
    gamma_segments: tuple[Segment, ...]
    cells: tuple[RegionCell, ...]

    def cell(self, row: int, col: int) -> RegionCell:
        return self.cells[row * len(self.lambda_segments) + col]

    def locate(self, lam, gam) -> RegionCell:
        for c in self.cells:
            if lam in c.lam and gam in c.gam:
                return c
        raise InvalidInput(f"({lam}, {gam}) lies outside the unit square")

    def to_dict(self) -> dict:
        dg = self.dg
        return {
            "lambda_breaks": [format_rational(b) for b in self.lambda_breaks],
            "gamma_breaks": [format_rational(b) for b in self.gamma_breaks],
            "cells": [
                {
                    "lambda": c.lam.describe("lambda"),
                    "gamma": c.gam.describe("gamma"),
                    "generic": c.is_generic,
                    "equilibria": [",".join(dg.g1.label(p)) for p in c.equilibria],
                }
                for c in self.cells
            ],
        }


def _breaks(intervals) -> tuple[Fraction, ...]:
    points = set()
    for iv in intervals:
        if iv.is_empty:
            continue
        if iv.lo > 0:
            points.add(iv.lo)
        if iv.hi < 1:
            points.add(iv.hi)
    return tuple(sorted(points))


def region_diagram(dg: DoubleGame) -> RegionDiagram:
    rects = dg.rectangles
    lam_breaks = _breaks(r[0] for r in rects.values())
    gam_breaks = _breaks(r[1] for r in rects.values())
    lam_segs, gam_segs = _segments(lam_breaks), _segments(gam_breaks)
    cells = []
    for gs in gam_segs:
        for ls in lam_segs:
            lam, gam = ls.sample(), gs.sample()
            eq = tuple(p for p, (i1, i2) in rects.items() if lam in i1 and gam in i2)
            cells.append(RegionCell(ls, gs, eq))
    return RegionDiagram(dg, lam_breaks, gam_breaks, tuple(lam_segs), tuple(gam_segs), tuple(cells))


# -- mixed interpolation ---------------------------------------------------

def mixed_interpolate(p, p0, p1, gamma, g1_entries, g2_entries) -> Fraction:
    """Column player's mixing probability at weight ``gamma``.

    ``p`` is the row player's probability on its first action; ``p0`` and
    ``p1`` are the column player's first-action probabilities in the
    equilibria at ``gamma = 0`` and ``gamma = 1``.  ``g1_entries`` and
    ``g2_entries`` are the column player's payoffs ``(a, b, c, d)`` at the
    profiles (first, first), (first, second), (second, first),
    (second, second) of each basic game.

    The result is the average of ``p0`` and ``p1`` weighted by
    ``(1 - gamma) * A`` and ``gamma * B``, where ``A`` and ``B`` are the
    column player's expected advantage of its first action in each game.
    """
    p, p0, p1, gamma = (parse_rational(x) for x in (p, p0, p1, gamma))
    a, b, c, d = (parse_rational(x) for x in g1_entries)
    e, f, g, h = (parse_rational(x) for x in g2_entries)
    adv1 = p * (a - b) + (1 - p) * (c - d)
    adv2 = p * (e - f) + (1 - p) * (g - h)
    den = (1 - gamma) * adv1 + gamma * adv2
    if den == 0:
        raise DegenerateInterpolation(
            f"interpolation denominator vanishes at gamma={format_rational(gamma)} "
            f"(advantages {format_rational(adv1)} and {format_rational(adv2)})"
        )
    return ((1 - gamma) * p0 * adv1 + gamma * p1 * adv2) / den


def column_entries(g: NormalFormGame) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Column player's payoffs ``(a, b, c, d)`` of a 2x2 game in row-major order."""
    if g.shape != (2, 2):
        raise InvalidInput(f"need a 2x2 game, got shape {g.shape}")
    return tuple(g.payoffs[prof][1] for prof in ((0, 0), (0, 1), (1, 0), (1, 1)))


def interpolate_dg(dg: DoubleGame, p, p0, p1, gamma) -> Fraction:
    return mixed_interpolate(p, p0, p1, gamma, column_entries(dg.g1), column_entries(dg.g2))


def brute_local_ne(dg: DoubleGame, lam, gam) -> list[PureProfile]:
    """Reference implementation: enumerate the instantiated game directly."""
    return pure_nash(instantiate(dg, lam, gam))
