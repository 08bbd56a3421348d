"""The Prisoner's Dilemma plus Social Game double game.

The first basic game is a PD with payoffs ``T > R > P > S``; the second
rewards each player for cooperating (``M``) and punishes defection
(``M'``) independently of the opponent.  A player's social coefficient is
its weight on the social game.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from fractions import Fraction

from .errors import InvalidInput, SocialParamsError
from .games import NormalFormGame, format_rational, parse_rational
from .multigame import DoubleGame, TypeGrid

ACTIONS = ("C", "D")
C, D = 0, 1


def prisoners_dilemma(T, R, P, S) -> NormalFormGame:
    T, R, P, S = (parse_rational(x) for x in (T, R, P, S))
    return NormalFormGame.bimatrix([[(R, R), (S, T)], [(T, S), (P, P)]], ACTIONS)


def social_game(M1, M2, M1p, M2p) -> NormalFormGame:
    M1, M2, M1p, M2p = (parse_rational(x) for x in (M1, M2, M1p, M2p))
    return NormalFormGame.bimatrix([[(M1, M2), (M1, M2p)], [(M1p, M2), (M1p, M2p)]], ACTIONS)


@dataclass(frozen=True)
class SocialParams:
    T: Fraction
    R: Fraction
    P: Fraction
    S: Fraction
    M1: Fraction
    M2: Fraction
    M1p: Fraction
    M2p: Fraction

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, parse_rational(getattr(self, f.name)))

    @classmethod
    def tournament(cls) -> SocialParams:
        """Payoff constants of the repeated-game tournament."""
        return cls(5, 3, 1, 0, Fraction(5, 2), Fraction(5, 2), 0, 0)

    @classmethod
    def symmetric(cls, T, R, P, S, M) -> SocialParams:
        """Both players share ``M`` and defection in the social game pays ``S``."""
        return cls(T, R, P, S, M, M, S, S)

    def validate(self, strict_punishment: bool = True) -> SocialParams:
        """Check every required inequality; raise naming the first one violated."""
        T, R, P, S = self.T, self.R, self.P, self.S
        checks = [
            ("T > R", T > R),
            ("R > P", R > P),
            ("P > S", P > S),
            ("R > (T+S)/2", 2 * R > T + S),
            ("M_1 > M'_1", self.M1 > self.M1p),
            ("M_2 > M'_2", self.M2 > self.M2p),
            ("M_1 > (R+P)/2", 2 * self.M1 > R + P),
            ("M_2 > (R+P)/2", 2 * self.M2 > R + P),
            ("R > M_1", R > self.M1),
            ("R > M_2", R > self.M2),
            ("M_1 > P", self.M1 > P),
            ("M_2 > P", self.M2 > P),
        ]
        if strict_punishment:
            checks += [("M'_1 = S", self.M1p == S), ("M'_2 = S", self.M2p == S)]
        for name, ok in checks:
            if not ok:
                raise SocialParamsError(name, self.describe())
        return self

    def describe(self) -> str:
        return ", ".join(f"{f.name}={format_rational(getattr(self, f.name))}" for f in fields(self))

    def to_dict(self) -> dict:
        return {f.name: format_rational(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_dict(cls, data) -> SocialParams:
        data = dict(data)
        data.setdefault("M1p", data.get("S"))
        data.setdefault("M2p", data.get("S"))
        try:
            return cls(**{f.name: data[f.name] for f in fields(cls)})
        except KeyError as exc:
            raise InvalidInput(f"social parameters missing {exc}") from None


def build_dg(params: SocialParams, strict_punishment: bool = True) -> DoubleGame:
    params.validate(strict_punishment)
    return DoubleGame(
        prisoners_dilemma(params.T, params.R, params.P, params.S),
        social_game(params.M1, params.M2, params.M1p, params.M2p),
    )


@dataclass(frozen=True)
class CrossingPoints:
    """Weights where player ``i``'s payoff lines cross.

    ``a``: (D,D) meets (C,D); ``b``: (D,C) meets (C,C); ``c``: (D,C) meets (C,D).
    """

    a1: Fraction
    b1: Fraction
    c1: Fraction
    a2: Fraction
    b2: Fraction
    c2: Fraction

    def for_player(self, player: int) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a1, self.b1, self.c1) if player == 0 else (self.a2, self.b2, self.c2)

    def to_dict(self) -> dict:
        return {f.name: format_rational(getattr(self, f.name)) for f in fields(self)}


def crossing_points(params: SocialParams) -> CrossingPoints:
    T, R, P, S = params.T, params.R, params.P, params.S

    def three(M, Mp):
        # with Mp = S these reduce to (P-S)/(M+P-2S), (T-R)/(T-S+M-R), (T-S)/(M+T-2S)
        return (
            (P - S) / (M - Mp + P - S),
            (T - R) / (T - R + M - Mp),
            (T - S) / (T - S + M - Mp),
        )

    a1, b1, c1 = three(params.M1, params.M1p)
    a2, b2, c2 = three(params.M2, params.M2p)
    return CrossingPoints(a1, b1, c1, a2, b2, c2)


class CaseTag(str, enum.Enum):
    A_LT_B = "A_LT_B"
    B_LT_A = "B_LT_A"
    A_EQ_B = "A_EQ_B"


def classify_case(params: SocialParams) -> CaseTag:
    lhs, rhs = params.P - params.S, params.T - params.R
    if lhs < rhs:
        return CaseTag.A_LT_B
    if lhs > rhs:
        return CaseTag.B_LT_A
    return CaseTag.A_EQ_B


def example_grid(params: SocialParams, variant: str) -> TypeGrid:
    """Type grids built from the crossing points.

    Variant ``"I"``: ``(0, a, b, 1)``, sorted and deduplicated when
    ``b <= a``.  Variant ``"II"``: ``(0, a, (a+b)/2, b, 1)``, defined only
    when ``a < b`` for both players.
    """
    cp = crossing_points(params)
    if variant == "I":
        return TypeGrid(
            tuple(sorted({Fraction(0), cp.a1, cp.b1, Fraction(1)})),
            tuple(sorted({Fraction(0), cp.a2, cp.b2, Fraction(1)})),
        )
    if variant == "II":
        if not (cp.a1 < cp.b1 and cp.a2 < cp.b2):
            raise InvalidInput(f"grid variant II needs a < b for both players (case {classify_case(params).value})")
        return TypeGrid(
            (0, cp.a1, (cp.a1 + cp.b1) / 2, cp.b1, 1),
            (0, cp.a2, (cp.a2 + cp.b2) / 2, cp.b2, 1),
        )
    raise InvalidInput(f"unknown grid variant {variant!r}; use 'I' or 'II'")
