from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import expsearch as es
from helpers import all_searches_unrestricted

FIG1 = es.fig1_graph()
FIG1_S = es.validate_search(FIG1, [(0, 2), (0, 1), (2, 4), (2, 3)])  # OB OA BD BC


class TestValidateSearch:
    def test_fig1_example_sequence(self):
        assert FIG1_S.vertex_order == (2, 1, 4, 3)

    def test_first_edge_must_touch_root(self):
        with pytest.raises(es.PrefixNotTreeError):
            es.validate_search(FIG1, [(2, 4)])

    def test_incomplete_cover(self):
        with pytest.raises(es.IncompleteCoverError):
            es.validate_search(FIG1, [(0, 2), (0, 1), (2, 4)])

    def test_cycle_edge_rejected(self):
        tri = es.build_graph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
        with pytest.raises(es.PrefixNotTreeError):
            es.validate_search(tri, [(0, 1), (0, 2), (1, 2)])

    def test_unknown_edge(self):
        with pytest.raises(es.SearchValidationError):
            es.validate_search(FIG1, [(0, 4)])

    def test_accepts_edge_objects_and_indices(self):
        s = es.validate_search(FIG1, [1, FIG1.edges[0], (2, 4), 2])
        assert s.vertex_order == (2, 1, 4, 3)


class TestSearchTimes:
    def test_fig1_times(self):
        table = es.search_times(FIG1_S)
        assert table.time == {2: 2, 1: 5, 4: 6, 3: 8}
        assert table.normalized == {1: F(5, 3), 2: 1, 3: 2, 4: 2}

    def test_single_edge(self):
        G = es.build_graph(2, [(0, 1, 3)])
        s = es.validate_search(G, [0])
        table = es.search_times(s)
        assert table.time[1] == 3 and table.normalized[1] == 1

    def test_times_non_decreasing_in_discovery_order(self):
        for s in es.enumerate_searches(FIG1):
            times = [s.times[v] for v in s.vertex_order]
            assert times == sorted(times)


class TestSearchRatio:
    def test_fig1_witness(self):
        ratio, witness = es.search_ratio(FIG1_S)
        assert ratio == 2
        assert witness == 3  # C and D tie at 2; C has the smaller id

    def test_uniform_star_any_order(self):
        star = es.gen_instance("uniform-star", n=5)
        for s in es.enumerate_searches(star)[:10]:
            ratio, _ = es.search_ratio(s)
            assert ratio == 5

    def test_all_ratios_at_least_one(self):
        for seed in range(10):
            G = es.gen_instance("random-weighted", seed=seed, n=4)
            for s in es.enumerate_searches(G):
                ratio, _ = es.search_ratio(s)
                assert ratio >= 1

    def test_distance_order_first_vertex_hits_one(self):
        for seed in range(10):
            G = es.gen_instance("random-tree", seed=seed, n=5)
            s, _ = es.distance_order_search(G)
            assert s.normalized_time(s.vertex_order[0]) == 1


class TestMixedSearch:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(es.SearchValidationError):
            es.MixedSearch([(FIG1_S, F(1, 2))])

    def test_negative_probability(self):
        with pytest.raises(es.SearchValidationError):
            es.MixedSearch([(FIG1_S, F(3, 2)), (FIG1_S, F(-1, 2))])

    def test_duplicates_merge(self):
        mixed = es.MixedSearch([(FIG1_S, F(1, 2)), (FIG1_S, F(1, 2))])
        assert len(mixed) == 1

    def test_point_mass_matches_pure(self):
        mixed = es.MixedSearch.point_mass(FIG1_S)
        payoffs = es.mixed_payoffs(mixed)
        ratio, witness = es.search_ratio(FIG1_S)
        assert payoffs.rho == ratio and payoffs.witness == witness
        assert payoffs.normalized == es.search_times(FIG1_S).normalized


class TestMixedPayoffs:
    def test_two_leaf_star_both_orders(self):
        star = es.gen_instance("uniform-star", n=2)
        searches = es.enumerate_searches(star)
        mixed = es.MixedSearch([(s, F(1, 2)) for s in searches])
        payoffs = es.mixed_payoffs(mixed)
        assert payoffs.normalized == {1: F(3, 2), 2: F(3, 2)}
        assert payoffs.rho == F(3, 2)

    def test_three_leaf_star_uniform_over_orders(self):
        star = es.gen_instance("uniform-star", n=3)
        searches = es.enumerate_searches(star)
        assert len(searches) == 6
        mixed = es.MixedSearch([(s, F(1, 6)) for s in searches])
        assert es.mixed_payoffs(mixed).rho == 2


class TestExpectedPayoff:
    def test_point_mass_both_sides(self):
        h = es.HiderDistribution.for_graph(FIG1, {4: 1})
        value = es.expected_payoff(es.MixedSearch.point_mass(FIG1_S), h)
        assert value == es.search_times(FIG1_S).normalized[4]

    def test_uniform_star_uniform_hider(self):
        star = es.gen_instance("uniform-star", n=2)
        searches = es.enumerate_searches(star)
        mixed = es.MixedSearch([(s, F(1, 2)) for s in searches])
        value = es.expected_payoff(mixed, es.HiderDistribution.uniform(star))
        assert value == F(3, 2)

    def test_hider_on_argmax_vertex_recovers_rho(self):
        mixed = es.MixedSearch.point_mass(FIG1_S)
        payoffs = es.mixed_payoffs(mixed)
        h = es.HiderDistribution.for_graph(FIG1, {payoffs.witness: 1})
        assert es.expected_payoff(mixed, h) == payoffs.rho

    def test_bilinearity(self):
        star = es.gen_instance("uniform-star", n=3)
        s1, s2, *_ = es.enumerate_searches(star)
        h1 = es.HiderDistribution.for_graph(star, {1: 1})
        h2 = es.HiderDistribution.for_graph(star, {2: F(1, 2), 3: F(1, 2)})
        lam = F(1, 3)
        blended_searcher = es.MixedSearch([(s1, lam), (s2, 1 - lam)])
        lhs = es.expected_payoff(blended_searcher, h1)
        rhs = (lam * es.expected_payoff(es.MixedSearch.point_mass(s1), h1)
               + (1 - lam) * es.expected_payoff(es.MixedSearch.point_mass(s2), h1))
        assert lhs == rhs
        mixed_h = es.HiderDistribution.for_graph(
            star, {1: lam, 2: (1 - lam) / 2, 3: (1 - lam) / 2})
        lhs = es.expected_payoff(es.MixedSearch.point_mass(s1), mixed_h)
        rhs = (lam * es.expected_payoff(es.MixedSearch.point_mass(s1), h1)
               + (1 - lam) * es.expected_payoff(es.MixedSearch.point_mass(s1), h2))
        assert lhs == rhs


class TestLemma1Bound:
    def test_uniform_star_all_vertices(self):
        star = es.gen_instance("uniform-star", n=3)
        result = es.lemma1_bound(star, [1, 2, 3])
        assert result.bound == 2

    def test_singleton(self):
        result = es.lemma1_bound(FIG1, [3])
        d = es.shortest_distances(FIG1)
        assert result.bound == d.lam[3] / d.dist[3]
        assert result.bound <= 1

    def test_two_leaf_star(self):
        star = es.build_graph(3, [(0, 1, 1), (0, 2, 2)])
        result = es.lemma1_bound(star, [1, 2])
        assert result.bound == F(7, 5)

    def test_empty_set(self):
        with pytest.raises(es.EmptySetError):
            es.lemma1_bound(FIG1, [])

    def test_root_not_allowed(self):
        with pytest.raises(es.EmptySetError):
            es.lemma1_bound(FIG1, [0, 1])

    @given(st.integers(0, 300))
    @settings(max_examples=25, deadline=None)
    def test_certified_by_enumeration(self, seed):
        """Every search pays at least the bound against the Lemma-1 Hider."""
        family = ("random-tree", "random-unweighted")[seed % 2]
        G = es.gen_instance(family, seed=seed, n=2 + seed % 3)
        vertices = G.non_root_vertices()
        subset = [v for i, v in enumerate(vertices) if (seed >> i) & 1] or list(vertices)
        result = es.lemma1_bound(G, subset)
        assert result.certified
        for s in all_searches_unrestricted(G):
            assert es.pure_expected_payoff(s, result.hider) >= result.bound

    def test_not_certified_on_weighted_non_tree(self):
        # frozen counterexample: the cheap cross edge beats the bound,
        # so the Lemma-1 argument must not claim certification here
        G = es.build_graph(3, [(0, 1, "8.73"), (0, 2, "9.18"), (1, 2, "6.45")])
        result = es.lemma1_bound(G, [1, 2])
        assert not result.certified
        rho = es.exact_rho(G).value
        assert rho < result.bound  # the uncertified value really is no bound


class TestBestPrefixBound:
    def test_uniform_star_n4(self):
        star = es.gen_instance("uniform-star", n=4)
        result = es.best_prefix_bound(star)
        assert result.bound == F(5, 2)
        assert result.vertices == {1, 2, 3, 4}

    def test_two_leaf_star(self):
        star = es.build_graph(3, [(0, 1, 1), (0, 2, 2)])
        result = es.best_prefix_bound(star)
        assert result.bound == F(7, 5) and result.vertices == {1, 2}

    def test_single_edge(self):
        G = es.build_graph(2, [(0, 1, 2)])
        assert es.best_prefix_bound(G).bound == 1

    def test_all_subsets_at_least_prefixes(self):
        for seed in range(8):
            G = es.gen_instance("random-weighted", seed=seed, n=5)
            assert (es.best_prefix_bound(G, all_subsets=True).bound
                    >= es.best_prefix_bound(G).bound)
