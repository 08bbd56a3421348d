"""Coherent pairs, pure regularity and Bayesian pure equilibria of a double game.

Types are finite weight grids: player 1 has types ``lam_1 < ... < lam_k``
and player 2 has ``gam_1 < ... < gam_l``, each grid containing 0 and 1.
A *certificate* assigns one action per type such that every cross pair
``(s_m, u_n)`` is a local Nash equilibrium at ``(lam_m, gam_n)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import ContractViolation, InvalidInput
from .games import PureProfile, format_rational, parse_rational
from .intervals import Interval
from .multigame import DoubleGame, TypeGrid, br_interval, brute_local_ne, local_ne


def _profile(player: int, own: int, opp: int) -> PureProfile:
    return (own, opp) if player == 0 else (opp, own)


def _weights(player: int, own_weight, opp_weight):
    return (own_weight, opp_weight) if player == 0 else (opp_weight, own_weight)


@dataclass(frozen=True)
class CoherentPair:
    """``(own, u)`` is a local NE against the opponent's type 0, ``(own, v)`` against type 1."""

    player: int
    type_index: int
    own_type: Fraction
    own_action: int
    opp_actions: tuple[int, int]

    def profiles(self) -> tuple[PureProfile, PureProfile]:
        u, v = self.opp_actions
        return _profile(self.player, self.own_action, u), _profile(self.player, self.own_action, v)


def coherent_pairs(dg: DoubleGame, grid: TypeGrid, player: int, type_index: int) -> list[CoherentPair]:
    vals = grid.values(player)
    if not 0 <= type_index < len(vals):
        raise InvalidInput(f"type index {type_index} out of range for player {player}")
    w = vals[type_index]
    at_zero = local_ne(dg, *_weights(player, w, 0))
    at_one = local_ne(dg, *_weights(player, w, 1))
    pairs = []
    for s in range(dg.shape[player]):
        us = [p[1 - player] for p in at_zero if p[player] == s]
        vs = [p[1 - player] for p in at_one if p[player] == s]
        for u in us:
            for v in vs:
                pairs.append(CoherentPair(player, type_index, w, s, (u, v)))
    return pairs


def threshold(dg: DoubleGame, grid: TypeGrid, pair: CoherentPair) -> int:
    """Largest ``p`` (1-based) with ``(s, u)`` a local NE for opponent types ``1..p``.

    Raises :class:`ContractViolation` if ``pair`` is not coherent or if
    ``(s, v)`` fails to hold on the remaining opponent types.
    """
    player, s = pair.player, pair.own_action
    u, v = pair.opp_actions
    w = grid.values(player)[pair.type_index]
    if w != pair.own_type:
        raise ContractViolation(f"pair type {pair.own_type} does not match grid value {w}")
    own_u, own_v = br_interval(dg, player, s, u), br_interval(dg, player, s, v)
    opp_u, opp_v = br_interval(dg, 1 - player, u, s), br_interval(dg, 1 - player, v, s)
    if not (w in own_u and 0 in opp_u and w in own_v and 1 in opp_v):
        raise ContractViolation(f"{pair} is not a coherent pair")
    opp_vals = grid.values(1 - player)
    p = 0
    while p < len(opp_vals) and opp_vals[p] in opp_u:
        p += 1
    missing = [n + 1 for n in range(p, len(opp_vals)) if opp_vals[n] not in opp_v]
    if missing:
        raise ContractViolation(
            f"no single threshold: (s, v) fails at opponent types {missing} after prefix {p}"
        )
    return p


@dataclass(frozen=True)
class RegularityQuadruple:
    """Actions ``s, t`` of player 1 and ``u, v`` of player 2 inducing pure regularity."""

    s: int
    t: int
    u: int
    v: int

    def profiles(self) -> tuple[PureProfile, ...]:
        return (self.s, self.u), (self.s, self.v), (self.t, self.u), (self.t, self.v)


def corner_equilibria(dg: DoubleGame) -> dict[tuple[int, int], list[PureProfile]]:
    return {(lam, gam): local_ne(dg, lam, gam) for lam in (0, 1) for gam in (0, 1)}


def is_pure_regular(dg: DoubleGame) -> list[RegularityQuadruple]:
    """All quadruples ``(s, t, u, v)`` with (s,u), (s,v), (t,u), (t,v) NE at the four corners."""
    corners = {key: set(ne) for key, ne in corner_equilibria(dg).items()}
    found = []
    for s, t in itertools.product(range(dg.shape[0]), repeat=2):
        for u, v in itertools.product(range(dg.shape[1]), repeat=2):
            if (
                (s, u) in corners[(0, 0)]
                and (s, v) in corners[(0, 1)]
                and (t, u) in corners[(1, 0)]
                and (t, v) in corners[(1, 1)]
            ):
                found.append(RegularityQuadruple(s, t, u, v))
    return found


@dataclass(frozen=True)
class BayesianPureProfile:
    """One action per type: ``p1_actions[m]`` for ``lam_m``, ``p2_actions[n]`` for ``gam_n``."""

    p1_actions: tuple[int, ...]
    p2_actions: tuple[int, ...]

    def label(self, dg: DoubleGame) -> str:
        row = "".join(dg.actions[0][a] for a in self.p1_actions)
        col = "".join(dg.actions[1][a] for a in self.p2_actions)
        return f"{row},{col}"

    @classmethod
    def parse(cls, dg: DoubleGame, text: str) -> BayesianPureProfile:
        """Parse ``"DDCC,DDCC"`` (single-character labels only)."""
        try:
            row, col = text.split(",")
        except ValueError:
            raise InvalidInput(f"expected 'ROW,COL' action strings, got {text!r}") from None
        return cls(
            tuple(_index(dg, 0, ch) for ch in row.strip()),
            tuple(_index(dg, 1, ch) for ch in col.strip()),
        )


def _index(dg: DoubleGame, player: int, label: str) -> int:
    try:
        return dg.actions[player].index(label)
    except ValueError:
        raise InvalidInput(f"player {player} has no action {label!r}") from None


@dataclass
class EvalCounter:
    """Counts evaluations of single best-response conditions."""

    count: int = 0


def _member(x: Fraction, iv: Interval, counter: EvalCounter | None) -> bool:
    if counter is not None:
        counter.count += 1
    return x in iv


def _subsets(n: int) -> list[tuple[int, ...]]:
    return [c for r in range(1, n + 1) for c in itertools.combinations(range(n), r)]


@dataclass(frozen=True)
class _Option:
    # per-type admissible actions when player 1 is confined to `rows`, player 2 to `cols`
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    row_choices: tuple[tuple[int, ...], ...]
    col_choices: tuple[tuple[int, ...], ...]

    def greedy(self) -> BayesianPureProfile:
        return BayesianPureProfile(
            tuple(c[0] for c in self.row_choices), tuple(c[0] for c in self.col_choices)
        )


@dataclass(frozen=True)
class RegularityResult:
    quadruples: tuple[RegularityQuadruple, ...]
    certificate: BayesianPureProfile | None
    options: tuple[_Option, ...] = field(repr=False, default=())

    @property
    def completely_pure_regular(self) -> bool:
        return self.certificate is not None

    def all_certificates(self) -> Iterator[BayesianPureProfile]:
        """Every certificate exactly once (grouped by the action sets they use)."""
        for opt in self.options:
            for rows in itertools.product(*opt.row_choices):
                if set(rows) != set(opt.rows):
                    continue
                for cols in itertools.product(*opt.col_choices):
                    if set(cols) == set(opt.cols):
                        yield BayesianPureProfile(rows, cols)


def completely_pure_regular(
    dg: DoubleGame, grid: TypeGrid, counter: EvalCounter | None = None
) -> RegularityResult:
    """Decide complete pure regularity in time linear in the number of types.

    A certificate exists iff, for some action sets ``A`` (player 1) and
    ``B`` (player 2), every ``lam_m`` admits an action in ``A`` that is a
    best response to all of ``B``, and every ``gam_n`` admits an action in
    ``B`` that is a best response to all of ``A``.  The number of set pairs
    depends only on the action counts, and each is checked with a single
    pass over the types using precomputed best-response intervals.
    """
    quads = tuple(is_pure_regular(dg))
    if not quads:
        return RegularityResult(quads, None)
    n1, n2 = dg.shape
    iv1 = {(a, b): br_interval(dg, 0, a, b) for a in range(n1) for b in range(n2)}
    iv2 = {(b, a): br_interval(dg, 1, b, a) for a in range(n1) for b in range(n2)}

    options = []
    for rows in _subsets(n1):
        for cols in _subsets(n2):
            row_choices = []
            for lam in grid.lambda_values:
                ok = tuple(a for a in rows if all(_member(lam, iv1[a, b], counter) for b in cols))
                if not ok:
                    break
                row_choices.append(ok)
            else:
                col_choices = []
                for gam in grid.gamma_values:
                    ok = tuple(b for b in cols if all(_member(gam, iv2[b, a], counter) for a in rows))
                    if not ok:
                        break
                    col_choices.append(ok)
                else:
                    options.append(_Option(rows, cols, tuple(row_choices), tuple(col_choices)))
    if not options:
        return RegularityResult(quads, None)
    best = min((o.greedy() for o in options), key=lambda c: (c.p1_actions, c.p2_actions))
    return RegularityResult(quads, best, tuple(options))


def ne_table(dg: DoubleGame, grid: TypeGrid) -> list[list[list[PureProfile]]]:
    """``table[m][n]`` = local NE at ``(lam_m, gam_n)``."""
    return [[local_ne(dg, lam, gam) for gam in grid.gamma_values] for lam in grid.lambda_values]


def certificate_is_sound(dg: DoubleGame, grid: TypeGrid, cert: BayesianPureProfile) -> bool:
    """Exhaustive O(k*l) check against direct enumeration of each instantiated game."""
    if len(cert.p1_actions) != grid.k or len(cert.p2_actions) != grid.ell:
        return False
    return all(
        (s, u) in brute_local_ne(dg, lam, gam)
        for s, lam in zip(cert.p1_actions, grid.lambda_values)
        for u, gam in zip(cert.p2_actions, grid.gamma_values)
    )


# -- Bayesian verification -------------------------------------------------

@dataclass(frozen=True)
class TypePrior:
    """Joint distribution over type pairs: ``table[m][n]`` = Pr(lam_m, gam_n).

    Rows are normalised on construction; the total mass must be positive.
    """

    table: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(x) for x in row) for row in self.table)
        if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
            raise InvalidInput("prior table must be a non-empty rectangular k x l table")
        if any(x < 0 for r in rows for x in r):
            raise InvalidInput("prior table has a negative entry")
        total = sum(sum(r) for r in rows)
        if total == 0:
            raise InvalidInput("prior table has zero total mass")
        object.__setattr__(self, "table", tuple(tuple(x / total for x in r) for r in rows))

    @classmethod
    def uniform(cls, k: int, ell: int) -> TypePrior:
        return cls(tuple(tuple(Fraction(1) for _ in range(ell)) for _ in range(k)))

    @classmethod
    def independent(cls, lam_probs: Sequence, gam_probs: Sequence) -> TypePrior:
        lp = [parse_rational(x) for x in lam_probs]
        gp = [parse_rational(x) for x in gam_probs]
        return cls(tuple(tuple(a * b for b in gp) for a in lp))

    @classmethod
    def point_mass(cls, k: int, ell: int, m: int, n: int) -> TypePrior:
        return cls(tuple(tuple(Fraction(int(i == m and j == n)) for j in range(ell)) for i in range(k)))

    @classmethod
    def random(cls, k: int, ell: int, rng: random.Random, max_weight: int = 20) -> TypePrior:
        """Random rational joint prior; zeros are allowed but not total mass zero."""
        while True:
            table = tuple(tuple(Fraction(rng.randint(0, max_weight)) for _ in range(ell)) for _ in range(k))
            if any(any(r) for r in table):
                return cls(table)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.table), len(self.table[0])

    def marginal(self, player: int, index: int) -> Fraction:
        if player == 0:
            return sum(self.table[index])
        return sum(row[index] for row in self.table)

    def conditional(self, player: int, index: int) -> tuple[Fraction, ...]:
        """Beliefs over the opponent's types given own type ``index``."""
        mass = self.marginal(player, index)
        if mass == 0:
            raise InvalidInput(f"type {index} of player {player} has zero probability")
        if player == 0:
            return tuple(x / mass for x in self.table[index])
        return tuple(row[index] / mass for row in self.table)

    def to_dict(self) -> dict:
        return {"joint": [[format_rational(x) for x in row] for row in self.table]}

    @classmethod
    def from_dict(cls, data) -> TypePrior:
        try:
            return cls(tuple(tuple(r) for r in data["joint"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"prior JSON missing field: {exc}") from None


@dataclass(frozen=True)
class TypeCheck:
    player: int
    type_index: int
    type_value: Fraction
    marginal: Fraction
    values: tuple[Fraction, ...]
    assigned: int
    ok: bool


@dataclass(frozen=True)
class BayesReport:
    ok: bool
    checks: tuple[TypeCheck, ...]

    def to_dict(self, dg: DoubleGame) -> dict:
        return {
            "bayes_nash": self.ok,
            "types": [
                {
                    "player": c.player + 1,
                    "type_index": c.type_index + 1,
                    "type": format_rational(c.type_value),
                    "marginal": format_rational(c.marginal),
                    "expected": {
                        dg.actions[c.player][a]: format_rational(v) for a, v in enumerate(c.values)
                    },
                    "assigned": dg.actions[c.player][c.assigned],
                    "best_response": c.ok,
                }
                for c in self.checks
            ],
        }


def _weighted_payoff(dg: DoubleGame, player: int, w: Fraction, own: int, opp: int) -> Fraction:
    prof = _profile(player, own, opp)
    return (1 - w) * dg.g1.payoffs[prof][player] + w * dg.g2.payoffs[prof][player]


def verify_bayes_ne(
    dg: DoubleGame, grid: TypeGrid, profile: BayesianPureProfile, prior: TypePrior
) -> BayesReport:
    """Check each positive-probability type plays a best reply to its conditional beliefs."""
    if len(profile.p1_actions) != grid.k or len(profile.p2_actions) != grid.ell:
        raise InvalidInput(
            f"profile covers {len(profile.p1_actions)}x{len(profile.p2_actions)} types, grid is {grid.k}x{grid.ell}"
        )
    if prior.shape != (grid.k, grid.ell):
        raise InvalidInput(f"prior shape {prior.shape} does not match grid {grid.k}x{grid.ell}")
    plans = (profile.p1_actions, profile.p2_actions)
    checks = []
    for player in (0, 1):
        own_plan, opp_plan = plans[player], plans[1 - player]
        for idx, w in enumerate(grid.values(player)):
            mass = prior.marginal(player, idx)
            if mass == 0:
                continue
            beliefs = prior.conditional(player, idx)
            values = tuple(
                sum(
                    (q * _weighted_payoff(dg, player, w, a, opp_plan[n]) for n, q in enumerate(beliefs) if q),
                    Fraction(0),
                )
                for a in range(dg.shape[player])
            )
            assigned = own_plan[idx]
            checks.append(TypeCheck(player, idx, w, mass, values, assigned, values[assigned] == max(values)))
    return BayesReport(all(c.ok for c in checks), tuple(checks))


def counter_prior(dg: DoubleGame, grid: TypeGrid, profile: BayesianPureProfile) -> TypePrior | None:
    """A point-mass prior under which ``profile`` is not a Bayesian NE, if one exists."""
    for m, (s, lam) in enumerate(zip(profile.p1_actions, grid.lambda_values)):
        for n, (u, gam) in enumerate(zip(profile.p2_actions, grid.gamma_values)):
            if (s, u) not in local_ne(dg, lam, gam):
                return TypePrior.point_mass(grid.k, grid.ell, m, n)
    return None


def quadruple_profiles(grid: TypeGrid, quad: RegularityQuadruple) -> Iterator[BayesianPureProfile]:
    """All Bayesian profiles using only a quadruple's actions (``2^k * 2^l`` of them at most)."""
    rows = sorted({quad.s, quad.t})
    cols = sorted({quad.u, quad.v})
    for r in itertools.product(rows, repeat=grid.k):
        for c in itertools.product(cols, repeat=grid.ell):
            yield BayesianPureProfile(r, c)
