import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doublegame import (
    BayesianPureProfile,
    ContractViolation,
    DoubleGame,
    EvalCounter,
    InvalidInput,
    NormalFormGame,
    TypeGrid,
    TypePrior,
    build_dg,
    certificate_is_sound,
    coherent_pairs,
    completely_pure_regular,
    is_pure_regular,
    ne_table,
    threshold,
    verify_bayes_ne,
)
from doublegame.regularity import RegularityQuadruple, counter_prior, quadruple_profiles
from doublegame.social import prisoners_dilemma
from oracles import bayes_values, dg_nash, exhaustive_certificates
from reference_tables import EXAMPLE_I, EXAMPLE_I_CHOSEN, EXAMPLE_II, as_printed
from strategies import double_games, type_grids

C, D = 0, 1


def pair_of(dg, grid, player, index, own, u, v):
    for pair in coherent_pairs(dg, grid, player, index):
        if (pair.own_action, pair.opp_actions) == (own, (u, v)):
            return pair
    raise AssertionError("pair not found")


class TestCoherentPairs:
    def test_extreme_types(self, social_dg, grid_one):
        low = coherent_pairs(social_dg, grid_one, 0, 0)
        assert [(p.own_action, p.opp_actions) for p in low] == [(D, (D, C))]
        high = coherent_pairs(social_dg, grid_one, 0, 3)
        assert [(p.own_action, p.opp_actions) for p in high] == [(C, (D, C))]

    def test_none_when_no_shared_action(self):
        # the row player coordinates; the column player prefers C in g1 and D in g2
        g1 = NormalFormGame.bimatrix([[(1, 1), (0, 0)], [(0, 1), (1, 0)]])
        g2 = NormalFormGame.bimatrix([[(1, 0), (0, 1)], [(0, 0), (1, 1)]])
        dg = DoubleGame(g1, g2)
        assert dg_nash(dg, 0, 0) == [(C, C)]
        assert dg_nash(dg, 0, 1) == [(D, D)]
        assert coherent_pairs(dg, TypeGrid.extremes(), 0, 0) == []

    def test_bad_index(self, social_dg, grid_one):
        with pytest.raises(InvalidInput):
            coherent_pairs(social_dg, grid_one, 0, 4)

    @given(double_games(), type_grids(4), st.data())
    def test_definition(self, dg, grid, data):
        player = data.draw(st.integers(0, 1))
        idx = data.draw(st.integers(0, len(grid.values(player)) - 1))
        w = grid.values(player)[idx]
        at = lambda opp_w: set(dg_nash(dg, w, opp_w) if player == 0 else dg_nash(dg, opp_w, w))
        expected = set()
        for s in range(dg.shape[player]):
            for u in range(dg.shape[1 - player]):
                for v in range(dg.shape[1 - player]):
                    prof = (lambda o: (s, o)) if player == 0 else (lambda o: (o, s))
                    if prof(u) in at(0) and prof(v) in at(1):
                        expected.add((s, u, v))
        got = {(p.own_action, *p.opp_actions) for p in coherent_pairs(dg, grid, player, idx)}
        assert got == expected


class TestThreshold:
    def test_example_one(self, social_dg, grid_one):
        assert threshold(social_dg, grid_one, pair_of(social_dg, grid_one, 0, 0, D, D, C)) == 2

    def test_example_two(self, social_dg, grid_two):
        assert threshold(social_dg, grid_two, pair_of(social_dg, grid_two, 0, 0, D, D, C)) == 2

    def test_two_point_grid(self, social_dg):
        grid = TypeGrid.extremes()
        assert threshold(social_dg, grid, pair_of(social_dg, grid, 0, 0, D, D, C)) == 1

    def test_not_coherent(self, social_dg, grid_one):
        pair = pair_of(social_dg, grid_one, 0, 0, D, D, C)
        fake = type(pair)(0, 0, Fraction(0), C, (D, C))
        with pytest.raises(ContractViolation):
            threshold(social_dg, grid_one, fake)

    @given(double_games(shapes=((2, 2),)), type_grids())
    def test_prefix_property_two_actions(self, dg, grid):
        """With two actions per player every coherent pair splits the opponent types cleanly."""
        for player in (0, 1):
            for idx, w in enumerate(grid.values(player)):
                for pair in coherent_pairs(dg, grid, player, idx):
                    p = threshold(dg, grid, pair)
                    s, (u, v) = pair.own_action, pair.opp_actions
                    for n, ow in enumerate(grid.values(1 - player)):
                        ne = dg_nash(dg, w, ow) if player == 0 else dg_nash(dg, ow, w)
                        prof = (lambda o: (s, o)) if player == 0 else (lambda o: (o, s))
                        assert (prof(u) in ne) == (n < p)
                        if n >= p:
                            assert prof(v) in ne

    @given(double_games(shapes=((3, 3),)), type_grids(4))
    def test_three_actions_consistent(self, dg, grid):
        for idx, w in enumerate(grid.lambda_values):
            for pair in coherent_pairs(dg, grid, 0, idx):
                s, (u, v) = pair.own_action, pair.opp_actions
                holds_u = [(s, u) in dg_nash(dg, w, g) for g in grid.gamma_values]
                holds_v = [(s, v) in dg_nash(dg, w, g) for g in grid.gamma_values]
                try:
                    p = threshold(dg, grid, pair)
                except ContractViolation:
                    prefix = holds_u.index(False) if False in holds_u else len(holds_u)
                    assert not all(holds_v[prefix:])
                else:
                    assert all(holds_u[:p]) and (p == len(holds_u) or not holds_u[p])
                    assert all(holds_v[p:])


class TestPureRegular:
    def test_social_dg(self, social_dg, b_lt_a_params):
        assert RegularityQuadruple(D, C, D, C) in is_pure_regular(social_dg)
        assert RegularityQuadruple(D, C, D, C) in is_pure_regular(build_dg(b_lt_a_params))

    def test_constant_composition(self):
        pd = prisoners_dilemma(5, 3, 1, 0)
        assert is_pure_regular(DoubleGame(pd, pd)) == [RegularityQuadruple(D, D, D, D)]

    def test_empty(self):
        # matching pennies at every corner has no pure NE at all
        mp = NormalFormGame.bimatrix([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])
        dg = DoubleGame(mp, mp)
        assert is_pure_regular(dg) == []
        res = completely_pure_regular(dg, TypeGrid.extremes())
        assert not res.completely_pure_regular


class TestCompletelyPureRegular:
    def test_example_one(self, social_dg, grid_one):
        res = completely_pure_regular(social_dg, grid_one)
        assert res.certificate.label(social_dg) == "DDCC,DDCC"
        assert [c.label(social_dg) for c in res.all_certificates()] == ["DDCC,DDCC"]
        assert certificate_is_sound(social_dg, grid_one, res.certificate)

    def test_example_one_table(self, social_dg, grid_one):
        assert as_printed(social_dg, ne_table(social_dg, grid_one)) == EXAMPLE_I

    def test_selection_from_table(self, social_dg, grid_one):
        cert = completely_pure_regular(social_dg, grid_one).certificate
        chosen = [
            [frozenset({f"{'CD'[cert.p1_actions[m]]},{'CD'[cert.p2_actions[n]]}"}) for m in range(4)]
            for n in reversed(range(4))
        ]
        assert chosen == EXAMPLE_I_CHOSEN
        for r in range(4):
            for c in range(4):
                assert EXAMPLE_I_CHOSEN[r][c] <= EXAMPLE_I[r][c]

    def test_example_two(self, social_dg, grid_two):
        res = completely_pure_regular(social_dg, grid_two)
        assert res.certificate is None
        assert list(res.all_certificates()) == []
        assert as_printed(social_dg, ne_table(social_dg, grid_two)) == EXAMPLE_II

    def test_extremes_only(self, social_dg):
        res = completely_pure_regular(social_dg, TypeGrid.extremes())
        assert res.certificate == BayesianPureProfile((D, C), (D, C))

    @given(double_games(shapes=((2, 2), (2, 3))), type_grids(4))
    def test_all_certificates_match_exhaustive_search(self, dg, grid):
        res = completely_pure_regular(dg, grid)
        expected = sorted(exhaustive_certificates(dg, grid))
        got = sorted((c.p1_actions, c.p2_actions) for c in res.all_certificates())
        assert got == expected
        assert res.completely_pure_regular == bool(expected)
        if expected:
            assert (res.certificate.p1_actions, res.certificate.p2_actions) == expected[0]

    @given(double_games(shapes=((3, 3),)), type_grids(3))
    def test_three_action_verdict(self, dg, grid):
        res = completely_pure_regular(dg, grid)
        expected = exhaustive_certificates(dg, grid)
        assert res.completely_pure_regular == bool(expected)
        if res.certificate:
            assert certificate_is_sound(dg, grid, res.certificate)

    def test_counter_is_linear(self, social_dg):
        sizes, counts = (8, 64, 512), []
        for n in sizes:
            counter = EvalCounter()
            completely_pure_regular(social_dg, TypeGrid.uniform(n), counter)
            counts.append(counter.count)
        # slope of count against k + l between consecutive sizes
        slopes = [(counts[i + 1] - counts[i]) / (2 * (sizes[i + 1] - sizes[i])) for i in range(2)]
        assert max(slopes) / min(slopes) < 1.2
        assert all(c <= max(slopes) * 2 * n + counts[0] for c, n in zip(counts, sizes))


class TestBayes:
    def test_uniform_prior(self, social_dg, grid_one):
        prof = BayesianPureProfile.parse(social_dg, "DDCC,DDCC")
        assert verify_bayes_ne(social_dg, grid_one, prof, TypePrior.uniform(4, 4)).ok

    def test_random_priors(self, social_dg, grid_one):
        prof = BayesianPureProfile.parse(social_dg, "DDCC,DDCC")
        rng = random.Random(7)
        for _ in range(100):
            assert verify_bayes_ne(social_dg, grid_one, prof, TypePrior.random(4, 4, rng)).ok

    def test_point_mass_rejects(self, social_dg, grid_one):
        prof = BayesianPureProfile.parse(social_dg, "CCCC,DDCC")
        rep = verify_bayes_ne(social_dg, grid_one, prof, TypePrior.point_mass(4, 4, 0, 0))
        assert not rep.ok
        bad = [c for c in rep.checks if not c.ok]
        assert [(c.player, c.type_index) for c in bad] == [(0, 0)]
        # zero-marginal types are not checked
        assert len(rep.checks) == 2

    def test_prior_validation(self):
        with pytest.raises(InvalidInput, match="zero total"):
            TypePrior(((0, 0), (0, 0)))
        with pytest.raises(InvalidInput, match="negative"):
            TypePrior(((1, -1),))

    def test_shape_mismatch(self, social_dg, grid_one):
        prof = BayesianPureProfile.parse(social_dg, "DDCC,DDCC")
        with pytest.raises(InvalidInput):
            verify_bayes_ne(social_dg, grid_one, prof, TypePrior.uniform(3, 4))

    def test_parse(self, social_dg):
        with pytest.raises(InvalidInput):
            BayesianPureProfile.parse(social_dg, "DDCC")
        with pytest.raises(InvalidInput):
            BayesianPureProfile.parse(social_dg, "DXCC,DDCC")

    def test_prior_conditionals(self):
        prior = TypePrior.independent(["1/4", "3/4"], ["1/3", "2/3"])
        assert prior.conditional(0, 1) == (Fraction(1, 3), Fraction(2, 3))
        assert prior.marginal(1, 0) == Fraction(1, 3)
        assert TypePrior.from_dict(prior.to_dict()) == prior

    @given(double_games(shapes=((2, 2), (2, 3))), type_grids(4), st.data())
    def test_matches_direct_expectation(self, dg, grid, data):
        plan1 = tuple(data.draw(st.integers(0, dg.shape[0] - 1)) for _ in range(grid.k))
        plan2 = tuple(data.draw(st.integers(0, dg.shape[1] - 1)) for _ in range(grid.ell))
        table = [[data.draw(st.integers(0, 3)) for _ in range(grid.ell)] for _ in range(grid.k)]
        if not any(map(any, table)):
            table[0][0] = 1
        rep = verify_bayes_ne(dg, grid, BayesianPureProfile(plan1, plan2), TypePrior(table))
        ok = True
        checked = 0
        for player, plan in ((0, plan1), (1, plan2)):
            for idx in range(len(plan)):
                vals = bayes_values(dg, grid, plan1, plan2, table, player, idx)
                if vals is None:
                    continue
                checked += 1
                ok &= vals[plan[idx]] == max(vals)
        assert rep.ok == ok
        assert len(rep.checks) == checked

    @given(double_games(shapes=((2, 2),)), type_grids(4), st.integers(0, 2**32))
    def test_certificates_survive_random_priors(self, dg, grid, seed):
        rng = random.Random(seed)
        res = completely_pure_regular(dg, grid)
        if res.certificate is None:
            return
        for _ in range(10):
            assert verify_bayes_ne(dg, grid, res.certificate, TypePrior.random(grid.k, grid.ell, rng)).ok

    def test_example_two_every_candidate_has_a_counter_prior(self, social_dg, grid_two):
        for quad in is_pure_regular(social_dg):
            for prof in quadruple_profiles(grid_two, quad):
                prior = counter_prior(social_dg, grid_two, prof)
                assert prior is not None
                assert not verify_bayes_ne(social_dg, grid_two, prof, prior).ok

    def test_report_dict(self, social_dg, grid_one):
        prof = BayesianPureProfile.parse(social_dg, "DDCC,DDCC")
        d = verify_bayes_ne(social_dg, grid_one, prof, TypePrior.point_mass(4, 4, 0, 0)).to_dict(social_dg)
        assert d["bayes_nash"] is True
        assert d["types"][0] == {
            "player": 1, "type_index": 1, "type": "0", "marginal": "1",
            "expected": {"C": "0", "D": "1"}, "assigned": "D", "best_response": True,
        }
