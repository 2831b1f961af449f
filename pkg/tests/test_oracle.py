from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import expsearch as es
from helpers import all_searches_unrestricted

FIG1 = es.fig1_graph()


class TestEnumeration:
    def test_counts(self):
        assert es.count_searches(es.gen_instance("uniform-star", n=3)) == 6
        path = es.build_graph(3, [(0, 1, 1), (1, 2, 1)])
        assert es.count_searches(path) == 1
        assert es.count_searches(FIG1) == 8

    def test_cap(self):
        with pytest.raises(es.CapExceededError):
            es.count_searches(FIG1, cap=7)
        with pytest.raises(es.CapExceededError):
            es.enumerate_searches(FIG1, cap=7)

    def test_fig1_orders(self):
        orders = {s.vertex_order for s in es.enumerate_searches(FIG1)}
        assert len(orders) == 8
        for order in orders:  # B opens the subtree holding C and D
            assert order.index(2) < order.index(3)
            assert order.index(2) < order.index(4)

    def test_all_searches_valid(self):
        for s in es.enumerate_searches(FIG1):
            again = es.validate_search(FIG1, s.edge_indices)
            assert again.times == s.times


class TestPayoffMatrix:
    def test_two_leaf_unit_star(self):
        star = es.gen_instance("uniform-star", n=2)
        M = es.payoff_matrix(star, es.enumerate_searches(star))
        assert sorted(M.entries) == [(1, 2), (2, 1)]

    def test_fig1_row(self):
        M = es.payoff_matrix(FIG1, [es.validate_search(FIG1, [1, 0, 3, 2])])
        assert M.entries[0] == (F(5, 3), 1, 2, 2)

    def test_single_edge(self):
        G = es.build_graph(2, [(0, 1, 2)])
        M = es.payoff_matrix(G, es.enumerate_searches(G))
        assert M.entries == ((1,),)

    def test_entries_at_least_one(self):
        for seed in range(5):
            G = es.gen_instance("random-weighted", seed=seed, n=4)
            M = es.payoff_matrix(G, es.enumerate_searches(G))
            assert all(x >= 1 for row in M.entries for x in row)


class TestSolveMatrixGame:
    def test_symmetric_two_by_two(self):
        sol = es.solve_matrix_game([[1, 2], [2, 1]])
        assert sol.value == F(3, 2)
        assert sol.row_probs == (F(1, 2), F(1, 2))
        assert sol.col_probs == (F(1, 2), F(1, 2))
        assert sol.exact and sol.certificate_gap == 0

    def test_single_entry(self):
        sol = es.solve_matrix_game([[7]])
        assert sol.value == 7 and sol.row_probs == (1,)

    def test_saddle_point(self):
        sol = es.solve_matrix_game([[2, 3], [4, 5]])
        assert sol.value == 3  # row 1 dominates, Hider picks column 2

    def test_dominated_rows_do_not_change_value(self):
        base = [[1, 2], [2, 1]]
        padded = base + [[3, 3], [2, 2]]
        assert es.solve_matrix_game(padded).value == F(3, 2)

    def test_certificate_is_exact_dual_pair(self):
        entries = [[F(5, 3), 1, 2, 2], [1, F(5, 2), F(7, 4), F(8, 3)]]
        sol = es.solve_matrix_game(entries)
        # both mixtures achieve the value exactly
        best_hider = min(
            sum(row[c] * sol.col_probs[c] for c in range(4)) for row in entries)
        worst_col = max(
            sum(sol.row_probs[r] * entries[r][c] for r in range(2))
            for c in range(4))
        assert best_hider == sol.value == worst_col


class TestExactRho:
    def test_uniform_star_n4(self):
        sol = es.exact_rho(es.gen_instance("uniform-star", n=4))
        assert sol.exact and sol.value == F(5, 2)
        assert sol.sigma == 4 and sol.search_count == 24

    def test_unit_path(self):
        path = es.build_graph(3, [(0, 1, 1), (1, 2, 1)])
        sol = es.exact_rho(path)
        assert sol.value == 1 and sol.sigma == 1

    def test_fig1_regression(self):
        """rho(fig1) = 41/24, frozen after the first verified exact run."""
        sol = es.exact_rho(FIG1)
        assert sol.exact and sol.certificate_gap == 0
        assert sol.value == F(41, 24)
        assert sol.sigma == 2
        assert sol.col_mix.as_dict() == {1: F(3, 8), 2: F(1, 6), 3: F(1, 3), 4: F(1, 8)}
        assert F(1) <= sol.value <= 2

    def test_row_mix_is_valid_mixed_search(self):
        sol = es.exact_rho(FIG1)
        payoffs = es.mixed_payoffs(sol.row_mix)
        assert payoffs.rho == sol.value  # optimal Searcher mix attains the value

    def test_cap_propagates(self):
        with pytest.raises(es.CapExceededError):
            es.exact_rho(FIG1, cap=3)

    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_prop2_interval_on_trees_and_unweighted(self, seed):
        family = ("random-tree", "random-unweighted")[seed % 2]
        G = es.gen_instance(family, seed=seed, n=2 + seed % 5)
        sol = es.exact_rho(G)
        assert sol.sigma / 2 <= sol.value <= sol.sigma
        assert es.best_prefix_bound(G).bound <= sol.value

    @given(st.integers(0, 400))
    @settings(max_examples=20, deadline=None)
    def test_value_matches_unrestricted_game(self, seed):
        """Minimum-edge canonicalization keeps the game value unchanged."""
        G = es.gen_instance("random-weighted", seed=seed, n=2 + seed % 2)
        sol = es.exact_rho(G)
        searches = all_searches_unrestricted(G)
        M = es.payoff_matrix(G, searches)
        full = es.solve_zero_sum(M)
        assert abs(float(full.value - sol.value)) <= 2e-9

    @given(st.integers(0, 400))
    @settings(max_examples=25, deadline=None)
    def test_cap_n_plus_one_over_two(self, seed):
        G = es.gen_instance("random-weighted", seed=seed, n=2 + seed % 5)
        sol = es.exact_rho(G)
        assert sol.value <= F(G.n + 1, 2) + F(1, 10**9)

    def test_mixed_strategies_upper_bound_the_value(self):
        for seed in range(6):
            G = es.gen_instance("random-tree", seed=seed, n=5)
            sol = es.exact_rho(G)
            mix = es.rdfs(G)
            assert es.mixed_payoffs(mix).rho >= sol.value
