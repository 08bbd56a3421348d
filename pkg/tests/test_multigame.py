from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doublegame import (
    ContractViolation,
    DegenerateInterpolation,
    DoubleGame,
    InvalidInput,
    MultiGame,
    NormalFormGame,
    TypeGrid,
    br_interval,
    compose,
    instantiate,
    interpolate_dg,
    local_ne,
    mixed_interpolate,
    mixed_nash_2x2,
    region_diagram,
)
from doublegame.multigame import brute_local_ne
from doublegame.social import prisoners_dilemma, social_game
from oracles import dg_nash, raw_table, weighted_table
from strategies import double_games, type_grids, unit_rationals


class TestCompose:
    def test_uniform_matches_weighted_sum(self):
        pd, sg = prisoners_dilemma(5, 3, 1, 0), social_game("5/2", "5/2", 0, 0)
        g = compose(MultiGame((pd, sg)), [["2/3", "1/3"], ["1/2", "1/2"]])
        assert g.payoffs[(0, 1)] == (Fraction(5, 6), Fraction(5, 2))

    def test_weights_must_sum_to_one(self):
        pd = prisoners_dilemma(5, 3, 1, 0)
        with pytest.raises(ContractViolation, match="sum"):
            compose(MultiGame((pd, pd)), [["1/2", "1/3"], ["1/2", "1/2"]])

    def test_weights_in_unit_interval(self):
        pd = prisoners_dilemma(5, 3, 1, 0)
        with pytest.raises(InvalidInput):
            compose(MultiGame((pd, pd)), [[2, -1], ["1/2", "1/2"]])

    def test_product_form(self):
        g1 = NormalFormGame.bimatrix([[(1, 0), (0, 1)]], ("x",), ("a", "b"))
        g2 = NormalFormGame.bimatrix([[(2, 2)], [(0, 0)]], ("y", "z"), ("c",))
        mg = MultiGame((g1, g2))
        assert not mg.is_uniform
        g = compose(mg, [["1/2", "1/2"], ["1/4", "3/4"]])
        assert g.actions == (("x|y", "x|z"), ("a|c", "b|c"))
        # x|z against b|c: 1/2*0 + 1/2*0 for player 1, 1/4*1 + 3/4*0 for player 2
        assert g.payoffs[(1, 1)] == (0, Fraction(1, 4))

    def test_uniform_forced_on_mismatch(self):
        g1 = NormalFormGame.bimatrix([[(1, 0)]], ("x",), ("a",))
        g2 = NormalFormGame.bimatrix([[(1, 0)]], ("y",), ("a",))
        with pytest.raises(InvalidInput):
            compose(MultiGame((g1, g2)), [[1, 0], [1, 0]], uniform=True)

    @given(double_games(), unit_rationals(), unit_rationals())
    def test_instantiate_matches_oracle(self, dg, lam, gam):
        assert raw_table(instantiate(dg, lam, gam)) == weighted_table(dg, lam, gam)


class TestTypeGrid:
    @pytest.mark.parametrize("vals", [(0,), ("1/2", 1), (0, "1/2"), (0, "1/2", "1/2", 1), (0, 1, "1/2")])
    def test_invalid(self, vals):
        with pytest.raises(InvalidInput):
            TypeGrid(vals, (0, 1))

    def test_uniform_grid(self):
        g = TypeGrid.uniform(3, 5)
        assert g.lambda_values == (0, Fraction(1, 2), 1)
        assert g.ell == 5

    @given(type_grids())
    def test_json_round_trip(self, grid):
        assert TypeGrid.from_dict(grid.to_dict()) == grid


class TestRegions:
    @given(double_games(), unit_rationals(), unit_rationals())
    def test_local_ne_matches_enumeration(self, dg, lam, gam):
        assert local_ne(dg, lam, gam) == dg_nash(dg, lam, gam)

    @given(double_games())
    def test_rectangle_endpoints(self, dg):
        """Membership agrees with enumeration at every endpoint of every rectangle."""
        for prof, (i1, i2) in dg.rectangles.items():
            for lam in (*i1.endpoints(), Fraction(0), Fraction(1)):
                for gam in (*i2.endpoints(), Fraction(0), Fraction(1)):
                    inside = lam in i1 and gam in i2
                    assert inside == (prof in dg_nash(dg, lam, gam))

    @given(double_games())
    def test_br_interval_is_where_action_is_best(self, dg):
        for own in range(dg.shape[0]):
            for opp in range(dg.shape[1]):
                iv = br_interval(dg, 0, own, opp)
                for i in range(13):
                    w = Fraction(i, 12)
                    table = weighted_table(dg, w, 0)
                    best = max(table[(a, opp)][0] for a in range(dg.shape[0]))
                    assert (w in iv) == (table[(own, opp)][0] == best)

    def test_br_interval_bad_player(self, social_dg):
        with pytest.raises(InvalidInput):
            br_interval(social_dg, 2, 0, 0)

    def test_weights_checked(self, social_dg):
        with pytest.raises(InvalidInput, match="outside"):
            local_ne(social_dg, "3/2", 0)

    @given(double_games(shapes=((2, 2), (2, 3))), st.data())
    def test_diagram_constant_on_cells(self, dg, data):
        diagram = region_diagram(dg)
        for cell in diagram.cells:
            if cell.lam.is_point:
                lam = cell.lam.lo
            else:
                t = data.draw(st.fractions(0, 1).filter(lambda x: 0 < x < 1))
                lam = cell.lam.lo + t * (cell.lam.hi - cell.lam.lo)
            gam = cell.gam.sample()
            assert list(cell.equilibria) == dg_nash(dg, lam, gam)
            assert diagram.locate(lam, gam) == cell

    @given(double_games())
    def test_boundaries_contain_neighbours(self, dg):
        """Closed rectangles: a boundary cell holds every NE of the adjacent generic cells."""
        diagram = region_diagram(dg)
        rows, cols = len(diagram.gamma_segments), len(diagram.lambda_segments)
        for r in range(rows):
            for c in range(cols):
                cell = diagram.cell(r, c)
                if cell.is_generic:
                    continue
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        if 0 <= r + dr < rows and 0 <= c + dc < cols:
                            near = diagram.cell(r + dr, c + dc)
                            if near.is_generic:
                                assert set(near.equilibria) <= set(cell.equilibria)

    def test_to_dict(self, social_dg):
        d = region_diagram(social_dg).to_dict()
        assert d["lambda_breaks"] == ["2/7", "4/9"]
        assert len(d["cells"]) == 25
        assert d["cells"][0] == {
            "lambda": "0<=lambda<2/7", "gamma": "0<=gamma<2/7", "generic": True, "equilibria": ["D,D"],
        }

    @given(double_games())
    def test_json_round_trip(self, dg):
        assert DoubleGame.from_dict(dg.to_dict()) == dg

    def test_mismatched_strategy_sets(self):
        g1 = NormalFormGame.bimatrix([[(1, 1)]], ("x",), ("a",))
        g2 = NormalFormGame.bimatrix([[(1, 1)]], ("y",), ("a",))
        with pytest.raises(InvalidInput, match="strategy sets"):
            DoubleGame(g1, g2)

    @given(double_games(), unit_rationals(), unit_rationals())
    def test_swapped_seats(self, dg, lam, gam):
        flipped = {(b, a) for a, b in local_ne(dg, lam, gam)}
        assert set(local_ne(dg.swapped(), gam, lam)) == flipped

    def test_brute_reference_agrees(self, social_dg):
        assert brute_local_ne(social_dg, "1/3", "1/3") == local_ne(social_dg, "1/3", "1/3")


def column_mixes(dg, lam, gam, p):
    """Column probabilities ``q`` with ``(p, q)`` in the equilibrium set, as intervals."""
    res = mixed_nash_2x2(instantiate(dg, lam, gam))
    return [qr for pr, qr in res.components if p in pr]


class TestMixedInterpolation:
    P = Fraction(1, 2)
    LAM = Fraction(1, 2)

    def test_coherent_pair_exists(self, mixed_dg):
        assert column_mixes(mixed_dg, self.LAM, 0, self.P)
        assert column_mixes(mixed_dg, self.LAM, 1, self.P)

    @pytest.mark.parametrize("gamma", ["0", "1/4", "1/2", "3/4", "1"])
    def test_matches_support_enumeration(self, mixed_dg, gamma):
        q = interpolate_dg(mixed_dg, self.P, 1, 1, gamma)
        comps = column_mixes(mixed_dg, self.LAM, gamma, self.P)
        assert {(c.lo, c.hi) for c in comps} == {(q, q)}

    def test_endpoints(self):
        assert mixed_interpolate("1/3", "1/5", "4/5", 0, (1, 0, 2, 3), (4, 1, 0, 2)) == Fraction(1, 5)
        assert mixed_interpolate("1/3", "1/5", "4/5", 1, (1, 0, 2, 3), (4, 1, 0, 2)) == Fraction(4, 5)

    def test_degenerate_denominator(self):
        # both advantages vanish at p = 1/2
        with pytest.raises(DegenerateInterpolation):
            mixed_interpolate("1/2", "1/3", "2/3", "1/2", (1, 0, 0, 1), (1, 0, 0, 1))

    def test_unequal_endpoints_are_not_equilibria(self):
        """With A, B of one sign the column reply is pure, so an interior average is not an NE."""
        q = mixed_interpolate("1/2", 0, 1, "1/2", (1, 0, 1, 0), (1, 0, 1, 0))
        assert q == Fraction(1, 2)
        g = NormalFormGame.bimatrix([[(0, 1), (0, 0)], [(0, 1), (0, 0)]])
        assert not mixed_nash_2x2(g).contains(((Fraction(1, 2),) * 2, (q, 1 - q)))

    @given(
        unit_rationals(), unit_rationals(), unit_rationals(), unit_rationals(),
        st.lists(st.integers(0, 4), min_size=4, max_size=4),
        st.lists(st.integers(0, 4), min_size=4, max_size=4),
    )
    def test_between_endpoints_when_same_sign(self, p, p0, p1, gamma, e1, e2):
        a, b, c, d = e1
        e, f, g, h = e2
        adv1 = p * (a - b) + (1 - p) * (c - d)
        adv2 = p * (e - f) + (1 - p) * (g - h)
        if adv1 * adv2 <= 0:
            return
        q = mixed_interpolate(p, p0, p1, gamma, e1, e2)
        assert min(p0, p1) <= q <= max(p0, p1)
