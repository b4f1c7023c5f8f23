import math

import numpy as np
import pytest

from contagion.netgen import (
    DirectedWeightedNetwork,
    NetworkConfig,
    UniformWeights,
    UnitWeights,
    average_clustering,
    average_path_length,
    degree_pmf_binomial,
    degree_pmf_poisson,
    degree_stats,
    generate,
    link_count_pmf,
    local_clustering,
    path_length_estimate,
    read_edge_list,
    write_edge_list,
)


def net_from(n, edges):
    return DirectedWeightedNetwork.from_edges(n, edges)


class TestConfigValidation:
    def test_rejects_zero_nodes(self):
        with pytest.raises(ValueError):
            NetworkConfig(0, 0.5)

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_rejects_bad_probability(self, p):
        with pytest.raises(ValueError):
            NetworkConfig(5, p)

    def test_rejects_bad_weight_bounds(self):
        with pytest.raises(ValueError):
            UniformWeights(1.5, 0.5)
        with pytest.raises(ValueError):
            UniformWeights(0.0, 1.0)

    def test_degenerate_configs_are_legal(self):
        assert generate(NetworkConfig(1, 0.5, seed=7)).edge_count == 0
        assert generate(NetworkConfig(4, 0.0, seed=3)).edge_count == 0


class TestNetworkInvariants:
    def test_rejects_self_loops(self):
        w = np.zeros((3, 3))
        w[1, 1] = 2.0
        with pytest.raises(ValueError):
            DirectedWeightedNetwork(w)

    def test_rejects_negative_weights(self):
        w = np.zeros((2, 2))
        w[0, 1] = -1.0
        with pytest.raises(ValueError):
            DirectedWeightedNetwork(w)

    def test_from_edges_rejects_duplicates_and_range(self):
        with pytest.raises(ValueError):
            net_from(3, [(0, 1, 1.0), (0, 1, 2.0)])
        with pytest.raises(ValueError):
            net_from(3, [(0, 3, 1.0)])
        with pytest.raises(ValueError):
            net_from(3, [(2, 2, 1.0)])

    def test_weights_are_read_only(self):
        net = generate(NetworkConfig(5, 0.5, seed=1))
        with pytest.raises(ValueError):
            net.weights[0, 1] = 9.0


class TestGenerate:
    def test_complete_graph_with_unit_weights(self):
        net = generate(NetworkConfig(100, 1.0, UnitWeights(), seed=5))
        assert net.edge_count == 9900
        weights = net.weights[net.weights > 0]
        assert np.all(weights == 1.0)

    def test_deterministic_per_config(self):
        a = generate(NetworkConfig(40, 0.2, seed=99))
        b = generate(NetworkConfig(40, 0.2, seed=99))
        assert np.array_equal(a.weights, b.weights)

    def test_weight_rule_does_not_change_link_pattern(self):
        cfg_uniform = NetworkConfig(30, 0.3, UniformWeights(0.5, 1.5), seed=4)
        cfg_unit = NetworkConfig(30, 0.3, UnitWeights(), seed=4)
        assert np.array_equal(
            generate(cfg_uniform).weights > 0, generate(cfg_unit).weights > 0
        )

    def test_uniform_weights_stay_in_bounds(self):
        net = generate(NetworkConfig(50, 0.5, UniformWeights(0.5, 1.5), seed=2))
        weights = net.weights[net.weights > 0]
        assert np.all((weights >= 0.5) & (weights < 1.5))

    def test_mean_edge_count_matches_binomial(self):
        # 1000 independent seeds at n=100, p=0.05: mean within 3 SE of n(n-1)p
        counts = [generate(NetworkConfig(100, 0.05, seed=s)).edge_count for s in range(1000)]
        expected = 100 * 99 * 0.05
        se = math.sqrt(100 * 99 * 0.05 * 0.95 / 1000)
        assert abs(np.mean(counts) - expected) <= 3 * se

    def test_each_ordered_pair_frequency_matches_p(self):
        # pooled presence over 1000 seeds: every pair within 4 SE of p
        n, p, trials = 50, 0.1, 1000
        freq = np.zeros((n, n))
        for s in range(trials):
            freq += generate(NetworkConfig(n, p, seed=s)).weights > 0
        freq /= trials
        off = ~np.eye(n, dtype=bool)
        bound = 4 * math.sqrt(p * (1 - p) / trials)
        assert np.all(np.abs(freq[off] - p) <= bound)
        assert np.all(freq[~off] == 0)


class TestDegreeStats:
    def test_sums_and_z_av(self):
        net = net_from(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 0, 0.5), (3, 0, 1.0)])
        stats = degree_stats(net)
        assert stats.in_degrees.sum() == stats.out_degrees.sum() == net.edge_count == 4
        assert np.array_equal(stats.total_degrees, stats.in_degrees + stats.out_degrees)
        assert stats.z_av == 2 * 4 / 4


class TestAnalyticPmfs:
    def test_link_count_examples(self):
        assert link_count_pmf(2, 0.5, 0) == pytest.approx(0.5)
        assert link_count_pmf(3, 0.5, 2) == pytest.approx(0.375)
        assert link_count_pmf(4, 0.0, 0) == 1.0

    def test_link_count_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            link_count_pmf(3, 0.5, 4)  # C(3,2) = 3
        with pytest.raises(ValueError):
            link_count_pmf(3, 1.5, 1)

    def test_link_count_sums_to_one_up_to_n_12(self):
        for n in range(1, 13):
            support = math.comb(n, 2)
            for p in (0.2, 0.5, 0.9):
                total = sum(link_count_pmf(n, p, L) for L in range(support + 1))
                assert total == pytest.approx(1.0, abs=1e-9)

    def test_degree_binomial_examples(self):
        assert degree_pmf_binomial(2, 0.3, 1) == pytest.approx(0.3)
        assert degree_pmf_binomial(5, 0.5, 2) == pytest.approx(0.375)
        total = sum(degree_pmf_binomial(10, 0.2, z) for z in range(10))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_degree_binomial_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            degree_pmf_binomial(5, 0.5, 5)
        with pytest.raises(ValueError):
            degree_pmf_binomial(5, 0.5, -1)

    def test_degree_binomial_large_n_is_stable(self):
        # far tail underflows gracefully, bulk stays normalized
        total = sum(degree_pmf_binomial(2000, 0.01, z) for z in range(120))
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_degree_binomial_survives_huge_combinations(self):
        # C(1199, 600) overflows float64; the log path must still normalize
        bulk = sum(degree_pmf_binomial(1200, 0.5, z) for z in range(480, 720))
        assert bulk == pytest.approx(1.0, abs=1e-9)

    def test_poisson_examples(self):
        assert degree_pmf_poisson(1.0, 0) == pytest.approx(math.exp(-1))
        assert degree_pmf_poisson(3.0, 3) == pytest.approx(27 * math.exp(-3) / 6)

    def test_poisson_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            degree_pmf_poisson(0.0, 1)
        with pytest.raises(ValueError):
            degree_pmf_poisson(2.0, -1)

    def test_poisson_approximates_binomial(self):
        gap = max(
            abs(degree_pmf_binomial(1000, 0.003, z) - degree_pmf_poisson(2.997, z))
            for z in range(41)
        )
        assert gap < 0.01


class TestClustering:
    def test_triangle_is_fully_clustered(self):
        net = net_from(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
        for v in range(3):
            assert local_clustering(net, v) == 1.0
        assert average_clustering(net) == 1.0

    def test_path_middle_node(self):
        net = net_from(3, [(0, 1, 1.0), (1, 2, 1.0)])
        assert local_clustering(net, 1) == 0.0

    def test_star_center(self):
        net = net_from(5, [(0, leaf, 1.0) for leaf in range(1, 5)])
        assert local_clustering(net, 0) == 0.0

    def test_low_degree_nodes_contribute_zero(self):
        net = net_from(2, [(0, 1, 1.0)])
        assert local_clustering(net, 0) == 0.0
        assert average_clustering(net) == 0.0

    def test_complete_projection(self):
        edges = [(i, j, 1.0) for i in range(4) for j in range(4) if i != j]
        assert average_clustering(net_from(4, edges)) == 1.0

    def test_empty_network(self):
        assert average_clustering(generate(NetworkConfig(6, 0.0, seed=1))) == 0.0

    def test_unknown_node_rejected(self):
        net = net_from(3, [(0, 1, 1.0)])
        with pytest.raises(ValueError):
            local_clustering(net, 3)

    def test_er_projection_matches_density(self):
        # expected clustering of an independent-link graph is its link density
        clusterings, densities = [], []
        for s in range(50):
            net = generate(NetworkConfig(500, 0.05, seed=s))
            proj = net.undirected_adjacency
            clusterings.append(average_clustering(net))
            densities.append(proj.sum() / (500 * 499))
        assert abs(np.mean(clusterings) - np.mean(densities)) <= 0.01


class TestPathLength:
    def test_complete_directed_graph(self):
        edges = [(i, j, 1.0) for i in range(5) for j in range(5) if i != j]
        result = average_path_length(net_from(5, edges))
        assert result.mean == 1.0
        assert result.reachable_pairs == 20
        assert result.unreachable_pairs == 0

    def test_directed_three_cycle(self):
        net = net_from(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
        result = average_path_length(net)
        assert result.mean == 1.5  # three pairs at distance 1, three at 2
        assert result.reachable_pairs == 6

    def test_direction_matters(self):
        net = net_from(2, [(0, 1, 1.0)])
        result = average_path_length(net)
        assert result.mean == 1.0
        assert result.reachable_pairs == 1
        assert result.unreachable_pairs == 1

    def test_disconnected_raises(self):
        with pytest.raises(ValueError, match="disconnected"):
            average_path_length(generate(NetworkConfig(4, 0.0, seed=1)))

    def test_estimate(self):
        assert path_length_estimate(100, 10.0) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            path_length_estimate(100, 1.0)

    def test_measured_within_quarter_of_estimate(self):
        net = generate(NetworkConfig(1000, 0.01, seed=11))
        measured = average_path_length(net).mean
        branching = net.edge_count / net.n  # per-direction mean degree
        estimate = path_length_estimate(1000, branching)
        assert abs(measured - estimate) / estimate <= 0.25


class TestEdgeListIO:
    def test_round_trip_is_bit_exact(self, tmp_path):
        net = generate(NetworkConfig(40, 0.15, seed=8))
        path = tmp_path / "net.txt"
        write_edge_list(net, path)
        loaded = read_edge_list(path)
        assert np.array_equal(loaded.weights, net.weights)

    def test_header_format(self, tmp_path):
        net = net_from(3, [(0, 2, 1.25)])
        path = tmp_path / "net.txt"
        write_edge_list(net, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# n=3 directed weighted"
        assert lines[1].split() == ["0", "2", "1.25"]

    @pytest.mark.parametrize(
        "content,lineno",
        [
            ("garbage\n0 1 1.0\n", 1),
            ("# n=3 directed weighted\n0 1\n", 2),
            ("# n=3 directed weighted\n0 1 1.0\n0 5 1.0\n", 3),
            ("# n=3 directed weighted\n1 1 1.0\n", 2),
            ("# n=3 directed weighted\n0 1 x\n", 2),
            ("# n=3 directed weighted\n0 1 1.0\n0 1 2.0\n", 3),
            ("# n=3 directed weighted\n0 1 -2.0\n", 2),
        ],
    )
    def test_parse_errors_carry_line_numbers(self, tmp_path, content, lineno):
        path = tmp_path / "bad.txt"
        path.write_text(content)
        with pytest.raises(ValueError, match=f"line {lineno}"):
            read_edge_list(path)
