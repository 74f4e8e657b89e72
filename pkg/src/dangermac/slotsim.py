"""Slot-level Monte Carlo simulation of n saturated backoff stations.

Time advances in logical channel slots: a slot is idle, a success (exactly
one station at counter zero), or a collision. Every station's counter
ticks once per slot, so a busy slot costs bystanders one countdown step;
real durations (slot time vs. success vs. collision) enter only when slot
counts are converted to air-time fractions. This keeps the simulator on
the same slot axis as the analytic chain, making it a like-for-like
empirical check on tau, the success probability, and throughput.

A successful station redraws at stage 0; every station involved in a
collision advances one stage (capped at the top) and redraws over its new
window. ``run`` is deterministic given its seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import MacTimings, derive_durations
from .markov import ChainGeometry
from .metrics import frame_times


@dataclass
class StationState:
    stage: int
    counter: int


@dataclass(frozen=True)
class SlotOutcome:
    transmitters: tuple[int, ...]
    success: bool
    collision: bool

    @property
    def idle(self) -> bool:
        return not self.transmitters


@dataclass(frozen=True)
class SimStats:
    slots: int
    tx_slots: int
    success_slots: int
    collision_slots: int
    idle_slots: int
    tau_hat: float               # attempts per station-slot
    p_su_hat: float              # successes per transmission slot
    p_col_tagged_hat: float      # station 0 colliding with exactly one other, per slot
    payload_time_fraction: float


def init_stations(n: int, g: ChainGeometry, rng: np.random.Generator) -> list[StationState]:
    """Fresh stations at stage 0 with uniform counters over the base window."""
    if n < 1:
        raise ValueError(f"n must be >= 1 (got {n})")
    return [StationState(stage=0, counter=int(rng.integers(0, g.w0))) for _ in range(n)]


def step_slot(
    stations: list[StationState],
    g: ChainGeometry,
    rng: np.random.Generator,
) -> SlotOutcome:
    """Advance every station by one slot, mutating ``stations`` in place."""
    transmitters = tuple(j for j, s in enumerate(stations) if s.counter == 0)
    success = len(transmitters) == 1
    for j, s in enumerate(stations):
        if s.counter > 0:
            s.counter -= 1
    for j in transmitters:
        s = stations[j]
        s.stage = 0 if success else min(s.stage + 1, g.max_stage)
        s.counter = int(rng.integers(0, g.window(s.stage)))
    return SlotOutcome(
        transmitters=transmitters,
        success=success,
        collision=len(transmitters) > 1,
    )


def run(
    n: int,
    slots: int,
    g: ChainGeometry,
    seed: int,
    timings: MacTimings | None = None,
) -> SimStats:
    """Simulate ``slots`` slots after discarding a 1% warm-up stretch.

    Implemented event to event: with every counter ticking each slot, a
    station holding counter c transmits exactly c slots later, so idle
    runs are skipped in one jump. The trajectory and random-draw order
    are identical to stepping slot by slot.
    """
    if slots < 1:
        raise ValueError(f"slots must be >= 1 (got {slots})")
    timings = timings or MacTimings()
    rng = np.random.default_rng(seed)
    stages = np.zeros(n, dtype=np.int64)
    next_tx = np.empty(n, dtype=np.int64)
    for j in range(n):
        next_tx[j] = int(rng.integers(0, g.w0))

    warmup = slots // 100
    horizon = warmup + slots
    attempts = 0
    tx_slots = 0
    success_slots = 0
    tagged_pair_slots = 0

    t = int(next_tx.min())
    while t < horizon:
        active = np.flatnonzero(next_tx == t)
        k = active.size
        success = k == 1
        if t >= warmup:
            attempts += k
            tx_slots += 1
            if success:
                success_slots += 1
            elif k == 2 and active[0] == 0:
                tagged_pair_slots += 1
        for j in active:
            stages[j] = 0 if success else min(stages[j] + 1, g.max_stage)
            next_tx[j] = t + 1 + int(rng.integers(0, g.window(int(stages[j]))))
        t = int(next_tx.min())

    collision_slots = tx_slots - success_slots
    idle_slots = slots - tx_slots
    d = derive_durations(timings)
    t_s, t_c = frame_times(d, timings)
    busy_time = success_slots * t_s + collision_slots * t_c
    total_time = idle_slots * timings.slot_us + busy_time
    return SimStats(
        slots=slots,
        tx_slots=tx_slots,
        success_slots=success_slots,
        collision_slots=collision_slots,
        idle_slots=idle_slots,
        tau_hat=attempts / (n * slots),
        p_su_hat=success_slots / tx_slots if tx_slots else 1.0,
        p_col_tagged_hat=tagged_pair_slots / slots,
        payload_time_fraction=success_slots * d.payload_us / total_time,
    )
