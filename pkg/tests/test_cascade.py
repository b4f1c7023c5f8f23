import numpy as np
import pytest

from contagion.balance import (
    BalanceSheet,
    ResidualRule,
    ScaledUniformRule,
    SheetConfig,
    build_sheets,
)
from contagion.cascade import (
    CascadeParams,
    apply_initial_shock,
    draw_shock_ids,
    initial_state,
    propagate_round,
    run_cascade,
    write_timeline_csv,
)
from contagion.netgen import DirectedWeightedNetwork, NetworkConfig, generate


def rescan_oracle(network, sheets, shock, params):
    """Reference fixed point: rescan every bank until nothing changes.

    Deliberately written as plain loops with none of the engine's
    bookkeeping, so the two routes only agree if the semantics agree.
    """
    n = network.n
    w = network.weights
    defaulted = {int(b) for b in shock}
    a_m = [params.q * s.external_assets for s in sheets]
    for b in defaulted:
        a_m[b] = 0.0
    changed = True
    while changed:
        changed = False
        for j in range(n):
            if j in defaulted:
                continue
            obligors = [i for i in range(n) if w[i, j] > 0]
            dead = [i for i in obligors if i in defaulted]
            if params.phi_mode == "weight":
                effective = sheets[j].interbank_assets - (1.0 - params.recovery_rate) * sum(
                    w[i, j] for i in dead
                )
            else:
                fraction = len(dead) / len(obligors) if obligors else 0.0
                effective = sheets[j].interbank_assets * (
                    1.0 - (1.0 - params.recovery_rate) * fraction
                )
            if effective + a_m[j] - sheets[j].interbank_liabilities - sheets[j].deposits <= 0.0:
                defaulted.add(j)
                changed = True
    return frozenset(defaulted)


def chain_state():
    # 2 -> 1 -> 0 with weight-5 exposures and thin buffers on 0 and 1
    net = DirectedWeightedNetwork.from_edges(3, [(2, 1, 5.0), (1, 0, 5.0)])
    sheets = [
        BalanceSheet(5.0, 0.0, 0.0, 2.0),   # K = 3
        BalanceSheet(5.0, 3.0, 5.0, 0.0),   # K = 3
        BalanceSheet(0.0, 10.0, 5.0, 1.0),  # K = 4
    ]
    return initial_state(net, sheets)


class TestShockApplication:
    def test_empty_shock_changes_nothing(self):
        state = chain_state()
        apply_initial_shock(state, [])
        assert not state.defaulted.any()
        assert state.timeline == []

    def test_unknown_bank_rejected(self):
        with pytest.raises(ValueError):
            apply_initial_shock(chain_state(), [7])

    def test_shock_removes_assets(self):
        state = chain_state()
        apply_initial_shock(state, [2])
        dumped = state.current_sheets()
        assert dumped[2].external_assets == 0.0
        assert dumped[2].interbank_assets == 0.0
        assert state.timeline == [(0, (2,))]

    def test_reshock_is_noop_and_merges(self):
        state = chain_state()
        apply_initial_shock(state, [2])
        apply_initial_shock(state, [2, 0])
        assert state.timeline == [(0, (0, 2))]
        assert sorted(state.defaulted_ids()) == [0, 2]

    def test_shock_after_propagation_rejected(self):
        state = chain_state()
        apply_initial_shock(state, [2])
        propagate_round(state)
        with pytest.raises(ValueError):
            apply_initial_shock(state, [0])

    def test_fifteen_of_hundred_leaves_85_percent(self):
        net = generate(NetworkConfig(100, 0.05, seed=21))
        sheets = build_sheets(net, SheetConfig(), seed=22)
        state = initial_state(net, sheets)
        apply_initial_shock(state, draw_shock_ids(100, 15, seed=23))
        assert state.percent_solvent() == 85.0

    def test_shock_all_banks(self):
        net = generate(NetworkConfig(6, 0.5, seed=3))
        sheets = build_sheets(net, SheetConfig(), seed=4)
        state = initial_state(net, sheets)
        apply_initial_shock(state, range(6))
        result = run_cascade(state)
        assert result.percent_solvent == 0.0
        assert result.rounds_used == 0


class TestPropagation:
    def test_two_bank_write_off(self):
        net = DirectedWeightedNetwork.from_edges(2, [(1, 0, 5.0)])
        sheets = [BalanceSheet(5.0, 0.0, 0.0, 2.0), BalanceSheet(0.0, 10.0, 5.0, 2.0)]
        state = initial_state(net, sheets)
        apply_initial_shock(state, [1])
        newly = propagate_round(state)
        assert newly == {0}  # 3 - 5 <= 0
        assert propagate_round(state) == frozenset()

    def test_chain_defaults_round_by_round(self):
        state = chain_state()
        apply_initial_shock(state, [2])
        result = run_cascade(state)
        assert result.defaulted == {0, 1, 2}
        assert result.rounds_used == 2
        assert result.percent_solvent == 0.0
        assert state.timeline == [(0, (2,)), (1, (1,)), (2, (0,))]

    def test_thick_buffer_stops_the_cascade(self):
        net = DirectedWeightedNetwork.from_edges(3, [(2, 1, 5.0), (1, 0, 5.0)])
        sheets = [
            BalanceSheet(5.0, 10.0, 0.0, 2.0),  # K = 13 > 5: survives the write-off
            BalanceSheet(5.0, 3.0, 5.0, 0.0),
            BalanceSheet(0.0, 10.0, 5.0, 1.0),
        ]
        state = initial_state(net, sheets)
        apply_initial_shock(state, [2])
        result = run_cascade(state)
        assert result.defaulted == {1, 2}
        assert result.percent_solvent == pytest.approx(100 / 3)

    def test_no_shock_means_full_solvency(self):
        result = run_cascade(chain_state())
        assert result.percent_solvent == 100.0
        assert result.defaulted == frozenset()

    def test_isolated_shocked_bank_spreads_nothing(self):
        net = DirectedWeightedNetwork.from_edges(4, [(1, 2, 1.0)])
        sheets = build_sheets(net, SheetConfig(), seed=5)
        state = initial_state(net, sheets)
        apply_initial_shock(state, [0])  # bank 0 has no outgoing links
        result = run_cascade(state)
        assert result.defaulted == {0}

    def test_full_recovery_contains_the_shock(self):
        # recovery 1 writes off nothing, so only shocked banks fail
        net = generate(NetworkConfig(30, 0.3, seed=6))
        sheets = build_sheets(net, SheetConfig(), seed=7)
        state = initial_state(net, sheets, CascadeParams(recovery_rate=1.0))
        shock = draw_shock_ids(30, 10, seed=8)
        apply_initial_shock(state, shock)
        assert run_cascade(state).defaulted == frozenset(shock)

    def test_fire_sale_price_hits_external_assets(self):
        net = DirectedWeightedNetwork.from_edges(2, [(1, 0, 1.0)])
        # after writing off the exposure, bank 0 holds 10q - 9.5:
        # positive at q=1, negative once the fire sale knocks 10% off
        sheets = [BalanceSheet(1.0, 10.0, 0.0, 9.5), BalanceSheet(0.0, 5.0, 1.0, 1.0)]
        gentle = initial_state(net, [s for s in sheets])
        apply_initial_shock(gentle, [1])
        assert run_cascade(gentle).defaulted == {1}
        harsh = initial_state(net, [s for s in sheets], CascadeParams(q=0.9))
        apply_initial_shock(harsh, [1])
        assert run_cascade(harsh).defaulted == {0, 1}


class TestDrawShockIds:
    def test_sorted_unique_and_deterministic(self):
        ids = draw_shock_ids(100, 15, seed=42)
        assert ids == sorted(set(ids))
        assert len(ids) == 15
        assert all(0 <= b < 100 for b in ids)
        assert ids == draw_shock_ids(100, 15, seed=42)
        assert ids != draw_shock_ids(100, 15, seed=43)

    def test_bounds(self):
        assert draw_shock_ids(5, 0, seed=1) == []
        assert draw_shock_ids(5, 5, seed=1) == [0, 1, 2, 3, 4]
        with pytest.raises(ValueError):
            draw_shock_ids(5, 6, seed=1)


def random_instance(k):
    rng = np.random.Generator(np.random.PCG64(9000 + k))
    n = int(rng.integers(2, 7))
    p = float(rng.uniform(0.0, 1.0))
    net = generate(NetworkConfig(n, p, seed=int(rng.integers(2**32))))
    cfg = SheetConfig(
        external_asset_rule=ScaledUniformRule(scale=float(rng.uniform(0.3, 3.0))),
        deposit_rule=ResidualRule(),
        target_buffer_margin=float(rng.uniform(0.01, 0.25)),
    )
    sheets = build_sheets(net, cfg, seed=int(rng.integers(2**32)))
    shock = draw_shock_ids(n, int(rng.integers(1, n + 1)), seed=int(rng.integers(2**32)))
    params = CascadeParams(
        recovery_rate=float(rng.choice([0.0, rng.uniform(0.0, 0.9)])),
        q=float(rng.choice([1.0, rng.uniform(0.5, 1.0)])),
        phi_mode=str(rng.choice(["weight", "count"])),
    )
    return net, sheets, shock, params


class TestAgainstRescanOracle:
    def test_thousand_random_instances(self):
        for k in range(1000):
            net, sheets, shock, params = random_instance(k)
            state = initial_state(net, sheets, params)
            apply_initial_shock(state, shock)
            result = run_cascade(state)
            expected = rescan_oracle(net, sheets, shock, params)
            assert result.defaulted == expected, f"instance {k}"
            assert result.rounds_used <= net.n
            assert result.defaulted >= frozenset(shock)
            ceiling = 100.0 * (net.n - len(shock)) / net.n
            assert result.percent_solvent <= ceiling + 1e-9


class TestOrderIndependence:
    def test_relabeling_equivariance(self):
        # permuting bank labels must permute the defaulted set and nothing else
        for k in range(60):
            net, sheets, shock, params = random_instance(5000 + k)
            rng = np.random.Generator(np.random.PCG64(77 + k))
            perm = rng.permutation(net.n)
            relabeled = np.zeros_like(net.weights)
            for i in range(net.n):
                for j in range(net.n):
                    relabeled[perm[i], perm[j]] = net.weights[i, j]
            net_p = DirectedWeightedNetwork(relabeled)
            sheets_p = [None] * net.n
            for i, s in enumerate(sheets):
                sheets_p[perm[i]] = s
            state = initial_state(net, sheets, params)
            apply_initial_shock(state, shock)
            base = run_cascade(state).defaulted
            state_p = initial_state(net_p, sheets_p, params)
            apply_initial_shock(state_p, [int(perm[b]) for b in shock])
            assert run_cascade(state_p).defaulted == frozenset(int(perm[b]) for b in base)


class TestTimelineCsv:
    def test_rows(self, tmp_path):
        state = chain_state()
        apply_initial_shock(state, [2])
        run_cascade(state)
        out = tmp_path / "timeline.csv"
        write_timeline_csv(state.timeline, out)
        assert out.read_text().splitlines() == [
            "round,bank_id",
            "0,2",
            "1,1",
            "2,0",
        ]
