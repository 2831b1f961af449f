import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import expsearch as es
from helpers import all_searches_unrestricted, steiner_brute

FIG1 = es.fig1_graph()


class TestDistanceOrder:
    def test_fig1(self):
        search, sigma = es.distance_order_search(FIG1)
        assert search.vertex_order == (2, 1, 4, 3)  # B, then A before D by id
        assert sigma == 2

    def test_uniform_star(self):
        star = es.gen_instance("uniform-star", n=5)
        _, sigma = es.distance_order_search(star)
        assert sigma == 5

    def test_unit_path(self):
        G = es.build_graph(3, [(0, 1, 1), (1, 2, 1)])
        _, sigma = es.distance_order_search(G)
        assert sigma == 1

    def test_weighted_non_tree_rejected(self):
        G = es.build_graph(3, [(0, 1, 2), (0, 2, 2), (1, 2, 3)])
        with pytest.raises(es.UnsupportedGraphClassError):
            es.distance_order_search(G)
        with pytest.raises(es.UnsupportedGraphClassError):
            es.sigma_closed_form(G)


class TestClosedForm:
    def test_two_leaf_star(self):
        star = es.build_graph(3, [(0, 1, 1), (0, 2, 2)])
        assert es.sigma_closed_form(star) == F(3, 2)

    def test_unit_path(self):
        G = es.build_graph(3, [(0, 1, 1), (1, 2, 1)])
        assert es.sigma_closed_form(G) == 1

    def test_fig1(self):
        assert es.sigma_closed_form(FIG1) == 2

    @given(st.integers(0, 400))
    @settings(max_examples=40, deadline=None)
    def test_three_ways_agree(self, seed):
        family = ("random-tree", "random-unweighted")[seed % 2]
        G = es.gen_instance(family, seed=seed, n=2 + seed % 5)
        closed = es.sigma_closed_form(G)
        _, ordered = es.distance_order_search(G)
        brute, _ = es.brute_force_sigma(G)
        assert closed == ordered == brute


class TestBruteForce:
    def test_fig1(self):
        sigma, search = es.brute_force_sigma(FIG1)
        assert sigma == 2
        assert es.search_ratio(search)[0] == 2

    def test_uniform_star_n3(self):
        star = es.gen_instance("uniform-star", n=3)
        assert es.brute_force_sigma(star)[0] == 3

    def test_unit_triangle(self):
        tri = es.build_graph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
        assert es.brute_force_sigma(tri)[0] == 2

    def test_cap(self):
        star = es.gen_instance("uniform-star", n=4)
        with pytest.raises(es.CapExceededError):
            es.brute_force_sigma(star, cap=5)

    @given(st.integers(0, 200))
    @settings(max_examples=20, deadline=None)
    def test_matches_unrestricted_enumeration(self, seed):
        """Minimum-edge canonical searches dominate: same sigma on any graph."""
        G = es.gen_instance("random-weighted", seed=seed, n=2 + seed % 3)
        canonical, _ = es.brute_force_sigma(G)
        unrestricted = min(es.search_ratio(s)[0]
                           for s in all_searches_unrestricted(G))
        assert canonical == unrestricted


class TestExchangeArgument:
    @given(st.integers(0, 300))
    @settings(max_examples=30, deadline=None)
    def test_swap_toward_distance_order_never_hurts(self, seed):
        G = es.gen_instance("random-tree", seed=seed, n=3 + seed % 4)
        d = es.shortest_distances(G).dist
        searches = es.enumerate_searches(G)
        rng = random.Random(seed)
        s = searches[rng.randrange(len(searches))]
        order = list(s.vertex_order)
        parent = es.shortest_distances(G).parent
        for i in range(len(order) - 1):
            u, w = order[i], order[i + 1]
            if d[u] > d[w] and parent[w] != u:
                swapped = order[:i] + [w, u] + order[i + 2:]
                pe = es.shortest_distances(G).parent_edge
                new = es.validate_search(G, [pe[v] for v in swapped])
                assert es.search_ratio(new)[0] <= es.search_ratio(s)[0]
                break


class TestSteiner:
    def test_fig1_root_to_c(self):
        result = es.steiner_tree(FIG1, {0, 3})
        assert result.total_length == 4
        assert {FIG1.edges[i].key() for i in result.edge_indices} == {(0, 2), (2, 3)}

    def test_all_terminals_of_tree(self):
        result = es.steiner_tree(FIG1, set(range(5)))
        assert result.total_length == FIG1.total_length()

    def test_unit_four_cycle_opposite_corner(self):
        G = es.build_graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
        result = es.steiner_tree(G, {0, 2})
        assert result.total_length == 2

    def test_root_required(self):
        with pytest.raises(ValueError):
            es.steiner_tree(FIG1, {3})

    def test_terminal_cap(self):
        star = es.gen_instance("uniform-star", n=15)
        with pytest.raises(es.TooManyTerminalsForExactError):
            es.steiner_tree(star, set(range(16)), mode="exact")
        assert es.steiner_tree(star, set(range(16)), mode="mst2").total_length == 15

    def test_root_only(self):
        assert es.steiner_tree(FIG1, {0}).total_length == 0

    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_exact_matches_subset_oracle(self, seed):
        G = es.gen_instance("random-weighted", seed=seed, n=2 + seed % 4)
        vertices = list(range(G.vertex_count))
        rng = random.Random(seed)
        terminals = {0} | {v for v in vertices[1:] if rng.random() < 0.6}
        result = es.steiner_tree(G, terminals, mode="exact")
        assert result.total_length == steiner_brute(G, terminals)
        # the result is a tree spanning the terminals
        touched = {w for i in result.edge_indices
                   for w in (G.edges[i].u, G.edges[i].v)} | {0}
        assert terminals <= touched
        assert len(result.edge_indices) == len(touched) - 1

    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_mst2_within_factor_two(self, seed):
        G = es.gen_instance("random-weighted", seed=seed, n=2 + seed % 4)
        rng = random.Random(seed)
        terminals = {0} | {v for v in range(1, G.vertex_count) if rng.random() < 0.6}
        exact = es.steiner_tree(G, terminals, mode="exact")
        approx = es.steiner_tree(G, terminals, mode="mst2")
        assert exact.total_length <= approx.total_length <= 2 * exact.total_length


class TestDoubling:
    def test_unit_star_single_phase(self):
        star = es.gen_instance("uniform-star", n=3)
        result = es.doubling_search(star)
        assert [r for r, _ in result.phases] == [1]
        assert result.sigma == 3
        assert result.certified_factor == 4

    def test_star_124(self):
        star = es.build_graph(4, [(0, 1, 1), (0, 2, 2), (0, 3, 4)])
        result = es.doubling_search(star)
        assert [r for r, _ in result.phases] == [1, 2, 4]
        sigma, _ = es.brute_force_sigma(star)
        assert result.sigma <= 4 * sigma

    def test_fig1_bound(self):
        result = es.doubling_search(FIG1)
        assert result.sigma <= 4 * 2

    def test_fractional_radius_below_two(self):
        G = es.build_graph(2, [(0, 1, "1.5")])
        result = es.doubling_search(G)
        assert [r for r, _ in result.phases] == [F(3, 2)]

    @given(st.integers(0, 300))
    @settings(max_examples=25, deadline=None)
    def test_certified_factors(self, seed):
        G = es.gen_instance("random-weighted", seed=seed, n=2 + seed % 5)
        sigma, _ = es.brute_force_sigma(G)
        assert es.doubling_search(G, "exact").sigma <= 4 * sigma
        assert es.doubling_search(G, "mst2").sigma <= 8 * sigma
