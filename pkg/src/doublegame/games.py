"""Finite normal-form games over exact rationals.

Profiles are tuples of action indices, one per player.  Mixed profiles are
tuples of probability vectors.  Every comparison in equilibrium logic is
done on :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput
from .intervals import Interval, solve_affine

PureProfile = tuple[int, ...]
MixedProfile = tuple[tuple[Fraction, ...], ...]


def parse_rational(value) -> Fraction:
    """Convert an int, ``"p/q"`` string, decimal string or Decimal exactly.

    Binary floats are rejected because they cannot be converted without
    inventing digits.
    """
    if isinstance(value, bool):
        raise InvalidInput(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise InvalidInput(f"not a finite number: {value}")
        return Fraction(value)
    if isinstance(value, float):
        raise InvalidInput(f"binary float {value!r} is inexact; pass a string like '2.5' or '5/2'")
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                num_i, den_i = int(num), int(den)
            except ValueError:
                raise InvalidInput(f"malformed rational {value!r}") from None
            if den_i == 0:
                raise InvalidInput(f"zero denominator in {value!r}")
            return Fraction(num_i, den_i)
        try:
            dec = Decimal(text)
        except InvalidOperation:
            raise InvalidInput(f"malformed number {value!r}") from None
        return parse_rational(dec)
    raise InvalidInput(f"cannot interpret {value!r} as a rational")


def format_rational(x: Fraction) -> str:
    """Canonical text form: ``"3"``, ``"-1/2"``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class NormalFormGame:
    """An N-player finite game with a payoff vector for every pure profile.

    ``actions[j]`` is player ``j``'s ordered tuple of action labels;
    ``payoffs[profile][j]`` is player ``j``'s payoff at ``profile``.
    """

    actions: tuple[tuple[str, ...], ...]
    payoffs: Mapping[PureProfile, tuple[Fraction, ...]] = field(repr=False)

    def __post_init__(self):
        actions = tuple(tuple(str(a) for a in acts) for acts in self.actions)
        if not actions:
            raise InvalidInput("a game needs at least one player")
        for j, acts in enumerate(actions):
            if not acts:
                raise InvalidInput(f"player {j} has no actions")
            if len(set(acts)) != len(acts):
                raise InvalidInput(f"duplicate action labels for player {j}: {acts}")
        n = len(actions)
        table = {}
        for profile in itertools.product(*(range(len(a)) for a in actions)):
            if profile not in self.payoffs:
                raise InvalidInput(f"missing payoff for profile {profile}")
            vec = tuple(parse_rational(v) for v in self.payoffs[profile])
            if len(vec) != n:
                raise InvalidInput(f"payoff vector at {profile} has {len(vec)} entries, expected {n}")
            table[profile] = vec
        if len(table) != len(self.payoffs):
            raise InvalidInput("payoff table contains profiles outside the strategy space")
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "payoffs", MappingProxyType(table))

    @classmethod
    def bimatrix(cls, entries, row_actions=("C", "D"), col_actions=None) -> NormalFormGame:
        """Build a 2-player game from ``entries[i][j] = (u1, u2)``."""
        col_actions = row_actions if col_actions is None else col_actions
        payoffs = {
            (i, j): tuple(entries[i][j])
            for i in range(len(row_actions))
            for j in range(len(col_actions))
        }
        return cls((tuple(row_actions), tuple(col_actions)), payoffs)

    @property
    def num_players(self) -> int:
        return len(self.actions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    def profiles(self) -> Iterable[PureProfile]:
        return itertools.product(*(range(k) for k in self.shape))

    def action_index(self, player: int, label: str) -> int:
        try:
            return self.actions[player].index(label)
        except ValueError:
            raise InvalidInput(f"player {player} has no action {label!r}") from None

    def profile(self, *labels: str) -> PureProfile:
        """Translate action labels into an index profile."""
        if len(labels) != self.num_players:
            raise InvalidInput(f"expected {self.num_players} labels, got {len(labels)}")
        return tuple(self.action_index(j, lab) for j, lab in enumerate(labels))

    def label(self, profile: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.actions[j][a] for j, a in enumerate(profile))

    def __eq__(self, other):
        if not isinstance(other, NormalFormGame):
            return NotImplemented
        return self.actions == other.actions and dict(self.payoffs) == dict(other.payoffs)

    def __hash__(self):
        return hash((self.actions, tuple(sorted(self.payoffs.items()))))


def _check_profile(game: NormalFormGame, profile: Sequence[int]) -> PureProfile:
    profile = tuple(profile)
    if len(profile) != game.num_players:
        raise InvalidInput(f"profile {profile} has wrong length for a {game.num_players}-player game")
    for j, a in enumerate(profile):
        if not isinstance(a, int) or not 0 <= a < game.shape[j]:
            raise InvalidInput(f"action {a!r} is not valid for player {j}")
    return profile


def _check_player(game: NormalFormGame, player: int) -> None:
    if not isinstance(player, int) or not 0 <= player < game.num_players:
        raise InvalidInput(f"player {player!r} out of range for a {game.num_players}-player game")


def payoff(game: NormalFormGame, profile: Sequence[int], player: int) -> Fraction:
    _check_player(game, player)
    return game.payoffs[_check_profile(game, profile)][player]


def as_distribution(game: NormalFormGame, player: int, strategy) -> tuple[Fraction, ...]:
    """Normalise a pure action index or a probability vector for ``player``."""
    size = game.shape[player]
    if isinstance(strategy, int) and not isinstance(strategy, bool):
        if not 0 <= strategy < size:
            raise InvalidInput(f"action {strategy} is not valid for player {player}")
        return tuple(Fraction(int(i == strategy)) for i in range(size))
    vec = tuple(parse_rational(p) for p in strategy)
    if len(vec) != size:
        raise InvalidInput(f"player {player} needs {size} probabilities, got {len(vec)}")
    if any(p < 0 for p in vec):
        raise InvalidInput(f"negative probability in {vec}")
    if sum(vec) != 1:
        raise InvalidInput(f"probabilities for player {player} sum to {sum(vec)}, not 1")
    return vec


def as_mixed(game: NormalFormGame, profile) -> MixedProfile:
    if len(profile) != game.num_players:
        raise InvalidInput(f"mixed profile needs {game.num_players} entries, got {len(profile)}")
    return tuple(as_distribution(game, j, s) for j, s in enumerate(profile))


def _expected(game: NormalFormGame, dists: Sequence[Sequence[Fraction]], player: int) -> Fraction:
    supports = [[(a, p) for a, p in enumerate(d) if p] for d in dists]
    total = Fraction(0)
    for combo in itertools.product(*supports):
        prob = Fraction(1)
        for _, p in combo:
            prob *= p
        total += prob * game.payoffs[tuple(a for a, _ in combo)][player]
    return total


def expected_payoff(game: NormalFormGame, profile, player: int) -> Fraction:
    """Multilinear extension of ``player``'s payoff to a mixed profile."""
    _check_player(game, player)
    return _expected(game, as_mixed(game, profile), player)


def best_responses(game: NormalFormGame, player: int, others) -> tuple[int, ...]:
    """All actions of ``player`` maximising expected payoff against ``others``.

    ``others`` has one entry per player; the entry for ``player`` itself is
    ignored (use ``None``).  Entries may be action indices or probability
    vectors.  Ties are all returned, in index order.
    """
    _check_player(game, player)
    if len(others) != game.num_players:
        raise InvalidInput(f"expected {game.num_players} entries in others, got {len(others)}")
    dists = [None if j == player else as_distribution(game, j, s) for j, s in enumerate(others)]
    values = []
    for a in range(game.shape[player]):
        dists[player] = tuple(Fraction(int(i == a)) for i in range(game.shape[player]))
        values.append(_expected(game, dists, player))
    best = max(values)
    return tuple(a for a, v in enumerate(values) if v == best)


def is_pure_nash(game: NormalFormGame, profile: Sequence[int]) -> bool:
    profile = _check_profile(game, profile)
    for j in range(game.num_players):
        own = game.payoffs[profile][j]
        for alt in range(game.shape[j]):
            dev = profile[:j] + (alt,) + profile[j + 1:]
            if game.payoffs[dev][j] > own:
                return False
    return True


def pure_nash(game: NormalFormGame) -> list[PureProfile]:
    """Pure Nash equilibria (weak best responses), in lexicographic order."""
    return [p for p in game.profiles() if is_pure_nash(game, p)]


@dataclass(frozen=True)
class MixedEquilibria:
    """Equilibrium set of a 2x2 game.

    ``components`` are rectangles ``(p_range, q_range)`` where ``p`` and ``q``
    are the probabilities of each player's first action; the equilibrium set
    is their union.  ``equilibria`` lists the distinct corners, which are the
    equilibria themselves whenever the game is non-degenerate.
    """

    components: tuple[tuple[Interval, Interval], ...]
    equilibria: tuple[MixedProfile, ...]
    degenerate: bool

    def contains(self, profile: MixedProfile) -> bool:
        p, q = Fraction(profile[0][0]), Fraction(profile[1][0])
        return any(p in pr and q in qr for pr, qr in self.components)


_SUPPORTS = ((0,), (1,), (0, 1))


def _support_domain(support: tuple[int, ...]) -> Interval:
    # probability of the first action allowed by the support
    if support == (0,):
        return Interval.point(1)
    if support == (1,):
        return Interval.point(0)
    return Interval.unit()


def _relation(support: tuple[int, ...]) -> str:
    # sign condition on (value of action 0) - (value of action 1)
    return {(0,): ">=", (1,): "<=", (0, 1): "=="}[support]


def mixed_nash_2x2(game: NormalFormGame) -> MixedEquilibria:
    """All Nash equilibria of a 2x2 game by exact support enumeration."""
    if game.shape != (2, 2):
        raise InvalidInput(f"mixed_nash_2x2 needs a 2x2 game, got shape {game.shape}")
    u = game.payoffs
    # player 2's advantage of column 0 over column 1 as an affine function of p
    d2_at1 = u[(0, 0)][1] - u[(0, 1)][1]
    d2_at0 = u[(1, 0)][1] - u[(1, 1)][1]
    # player 1's advantage of row 0 over row 1 as an affine function of q
    d1_at1 = u[(0, 0)][0] - u[(1, 0)][0]
    d1_at0 = u[(0, 1)][0] - u[(1, 1)][0]
    components = []
    for rows in _SUPPORTS:
        for cols in _SUPPORTS:
            p_range = solve_affine(d2_at0, d2_at1 - d2_at0, _relation(cols), _support_domain(rows))
            q_range = solve_affine(d1_at0, d1_at1 - d1_at0, _relation(rows), _support_domain(cols))
            if not p_range.is_empty and not q_range.is_empty:
                components.append((p_range, q_range))
    components = sorted(set(components))
    corners = set()
    for pr, qr in components:
        for p in pr.endpoints():
            for q in qr.endpoints():
                corners.add(((p, 1 - p), (q, 1 - q)))
    degenerate = any(not (pr.is_point and qr.is_point) for pr, qr in components)
    return MixedEquilibria(tuple(components), tuple(sorted(corners)), degenerate)


# -- JSON ------------------------------------------------------------------

def _profile_key(game: NormalFormGame, profile: PureProfile) -> str:
    return ",".join(game.label(profile))


def game_to_dict(game: NormalFormGame) -> dict:
    return {
        "players": game.num_players,
        "actions": [list(a) for a in game.actions],
        "payoffs": {
            _profile_key(game, p): [format_rational(v) for v in game.payoffs[p]]
            for p in game.profiles()
        },
    }


def game_from_dict(data: Mapping) -> NormalFormGame:
    try:
        actions = tuple(tuple(a) for a in data["actions"])
        raw = data["payoffs"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"game JSON missing field: {exc}") from None
    if "players" in data and data["players"] != len(actions):
        raise InvalidInput(f"'players' is {data['players']} but {len(actions)} action lists given")
    payoffs = {}
    for key, vec in raw.items():
        labels = key.split(",")
        if len(labels) != len(actions):
            raise InvalidInput(f"profile key {key!r} does not name one action per player")
        profile = []
        for j, lab in enumerate(labels):
            if lab not in actions[j]:
                raise InvalidInput(f"profile key {key!r}: unknown action {lab!r} for player {j}")
            profile.append(actions[j].index(lab))
        payoffs[tuple(profile)] = tuple(parse_rational(v) for v in vec)
    return NormalFormGame(actions, payoffs)


def loads(text: str):
    """``json.loads`` that keeps JSON numbers exact (floats become Decimal)."""
    return json.loads(text, parse_float=Decimal)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dumps_game(game: NormalFormGame) -> str:
    return dumps(game_to_dict(game))


def loads_game(text: str) -> NormalFormGame:
    return game_from_dict(loads(text))
