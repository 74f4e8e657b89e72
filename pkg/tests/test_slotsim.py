import numpy as np
import pytest

from dangermac.config import MacTimings
from dangermac.markov import ChainGeometry, solve_fixed_point
from dangermac.metrics import access_probabilities
from dangermac.slotsim import SimStats, init_stations, run, step_slot

G = ChainGeometry(5, 8)


def test_init_stations_stage_zero_uniform_window():
    rng = np.random.default_rng(0)
    stations = init_stations(10, G, rng)
    assert all(s.stage == 0 for s in stations)
    assert all(0 <= s.counter < 8 for s in stations)


def test_init_stations_deterministic():
    a = [s.counter for s in init_stations(20, G, np.random.default_rng(5))]
    b = [s.counter for s in init_stations(20, G, np.random.default_rng(5))]
    assert a == b


def test_init_counters_uniform_chi_square():
    rng = np.random.default_rng(1234)
    counters = [s.counter for s in init_stations(100_000, G, rng)]
    observed = np.bincount(counters, minlength=8)
    expected = len(counters) / 8
    chi2 = float(((observed - expected) ** 2 / expected).sum())
    assert chi2 < 18.475  # 1% critical value, 7 degrees of freedom


def test_step_single_station_never_collides():
    rng = np.random.default_rng(2)
    stations = init_stations(1, G, rng)
    successes = 0
    for _ in range(2000):
        outcome = step_slot(stations, G, rng)
        assert not outcome.collision
        successes += outcome.success
        assert stations[0].stage == 0
    # one success per mean backoff of (w0 - 1) / 2 plus the attempt slot
    assert successes == pytest.approx(2000 / 4.5, rel=0.15)


def test_step_two_at_zero_collide_and_escalate():
    from dangermac.slotsim import StationState
    rng = np.random.default_rng(3)
    stations = [StationState(0, 0), StationState(0, 0), StationState(2, 4)]
    outcome = step_slot(stations, G, rng)
    assert outcome.collision and not outcome.success
    assert outcome.transmitters == (0, 1)
    assert stations[0].stage == 1 and stations[1].stage == 1
    assert stations[0].counter < 16 and stations[1].counter < 16
    # the bystander keeps counting down during the busy slot
    assert stations[2].counter == 3 and stations[2].stage == 2


def test_step_success_resets_stage():
    from dangermac.slotsim import StationState
    rng = np.random.default_rng(4)
    stations = [StationState(4, 0), StationState(1, 7)]
    outcome = step_slot(stations, G, rng)
    assert outcome.success
    assert stations[0].stage == 0
    assert stations[1].counter == 6


def test_stage_never_exceeds_cap():
    rng = np.random.default_rng(5)
    g = ChainGeometry(2, 2)  # tiny windows force frequent collisions
    stations = init_stations(8, g, rng)
    for _ in range(5000):
        step_slot(stations, g, rng)
        assert all(0 <= s.stage <= 2 for s in stations)
        assert all(0 <= s.counter < g.window(s.stage) for s in stations)


def _reference_run(n: int, slots: int, g: ChainGeometry, seed: int,
                   timings: MacTimings) -> SimStats:
    # same statistics gathered the slow way, one step_slot call per slot
    from dangermac.config import derive_durations
    from dangermac.metrics import frame_times

    rng = np.random.default_rng(seed)
    stations = init_stations(n, g, rng)
    warmup = slots // 100
    attempts = tx = succ = tagged_pairs = 0
    for slot in range(warmup + slots):
        outcome = step_slot(stations, g, rng)
        if slot < warmup:
            continue
        if outcome.transmitters:
            attempts += len(outcome.transmitters)
            tx += 1
            succ += outcome.success
            if len(outcome.transmitters) == 2 and outcome.transmitters[0] == 0:
                tagged_pairs += 1
    coll = tx - succ
    idle = slots - tx
    d = derive_durations(timings)
    t_s, t_c = frame_times(d, timings)
    total = idle * timings.slot_us + succ * t_s + coll * t_c
    return SimStats(
        slots=slots, tx_slots=tx, success_slots=succ, collision_slots=coll,
        idle_slots=idle, tau_hat=attempts / (n * slots),
        p_su_hat=succ / tx if tx else 1.0,
        p_col_tagged_hat=tagged_pairs / slots,
        payload_time_fraction=succ * d.payload_us / total,
    )


def test_run_matches_slot_by_slot_reference():
    timings = MacTimings()
    for n, seed in [(1, 0), (3, 1), (8, 2)]:
        fast = run(n, 5000, G, seed, timings)
        slow = _reference_run(n, 5000, G, seed, timings)
        assert fast == slow


def test_run_deterministic():
    assert run(10, 20_000, G, 77) == run(10, 20_000, G, 77)
    assert run(10, 20_000, G, 77) != run(10, 20_000, G, 78)


def test_run_slot_conservation():
    stats = run(12, 30_000, G, 9)
    assert stats.tx_slots == stats.success_slots + stats.collision_slots
    assert stats.idle_slots + stats.tx_slots == stats.slots


def test_run_single_station():
    stats = run(1, 50_000, G, 3)
    assert stats.collision_slots == 0
    assert stats.p_su_hat == 1.0
    assert stats.tau_hat == pytest.approx(2 / 9, rel=0.05)


def test_contention_lowers_transmission_rate():
    assert run(50, 100_000, G, 6).tau_hat < run(10, 100_000, G, 6).tau_hat


def test_matches_classic_fixed_point():
    stats = run(5, 200_000, G, 42)
    solution = solve_fixed_point(5, G, "classic")
    assert stats.tau_hat == pytest.approx(solution.tau, rel=0.05)
    p_su = access_probabilities(solution.tau, 5).p_su
    assert stats.p_su_hat == pytest.approx(p_su, rel=0.05)


def test_dense_network_matches_classic_chain_and_throughput():
    timings = MacTimings()
    stats = run(50, 400_000, G, 2024, timings)
    solution = solve_fixed_point(50, G, "classic")
    assert stats.tau_hat == pytest.approx(solution.tau, rel=0.05)
    from dangermac.pipeline import evaluate_point
    report = evaluate_point(timings, 50.0, "classic", "slot_scaled")
    assert stats.payload_time_fraction == pytest.approx(report.throughput.s, rel=0.10)


def test_success_ratio_matches_product_form_at_observed_rate():
    # the analytic success probability assumes independent per-slot attempts;
    # feeding it the simulator's own attempt rate checks that approximation
    stats = run(50, 400_000, G, 2024)
    ap = access_probabilities(stats.tau_hat, 50)
    assert ap.p_su == pytest.approx(stats.p_su_hat, rel=0.05)


def test_tagged_pairwise_collision_frequency():
    stats = run(10, 400_000, G, 99)
    from dangermac.metrics import delay_state_probabilities
    states = delay_state_probabilities(stats.tau_hat, 10)
    assert states.p_col == pytest.approx(stats.p_col_tagged_hat, rel=0.10)


def test_fewer_contenders_succeed_more_often():
    for seed in (1, 2, 3):
        thinned = run(10, 50_000, G, seed)
        full = run(20, 50_000, G, seed)
        assert thinned.p_su_hat >= full.p_su_hat


def test_invalid_arguments():
    with pytest.raises(ValueError):
        run(5, 0, G, 1)
    with pytest.raises(ValueError):
        init_stations(0, G, np.random.default_rng(0))
