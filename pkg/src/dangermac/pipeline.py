"""Glue between the chain solver, the danger filter, and the metric set.

``evaluate_point`` turns an effective contender count into the complete
performance report used by every CLI command. The contender count may be
a Monte Carlo mean, hence fractional; zero contenders short-circuits to a
silent-network report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import MacTimings, derive_durations
from .markov import ChainGeometry, solve_fixed_point
from .metrics import (
    AccessProbabilities,
    DelayBreakdown,
    DelayStates,
    ThroughputReport,
    access_probabilities,
    delay_state_probabilities,
    frame_times,
    pdr,
    throughput,
    total_delay,
)


@dataclass(frozen=True)
class PerfReport:
    n_eff: float
    tau: float
    p_c: float         # per-attempt collision probability at the fixed point
    p_b: float         # per-slot busy probability at the fixed point
    iterations: int
    residual: float
    access: AccessProbabilities
    pdr: float
    throughput: ThroughputReport
    states: DelayStates
    delay: DelayBreakdown


def geometry_from(timings: MacTimings) -> ChainGeometry:
    return ChainGeometry(max_stage=timings.max_stage, w0=timings.w0)


def evaluate_point(
    timings: MacTimings,
    n_eff: float,
    model_mode: str = "busy_aware",
    throughput_mode: str = "slot_scaled",
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> PerfReport:
    """Full analytic report for ``n_eff`` contenders."""
    d = derive_durations(timings)
    t_s, t_c = frame_times(d, timings)
    if n_eff <= 0:
        access = access_probabilities(0.0, 0.0)
        states = delay_state_probabilities(0.0, 0.0)
        return PerfReport(
            n_eff=n_eff,
            tau=0.0,
            p_c=0.0,
            p_b=0.0,
            iterations=0,
            residual=0.0,
            access=access,
            pdr=pdr(access),
            throughput=throughput(access, t_s, t_c, d.payload_us, d.t_slot_us,
                                  throughput_mode),
            states=states,
            delay=total_delay(states, access.p_tr, 0.0, timings, d),
        )
    solution = solve_fixed_point(n_eff, geometry_from(timings), model_mode,
                                 tol=tol, max_iter=max_iter)
    access = access_probabilities(solution.tau, n_eff)
    states = delay_state_probabilities(solution.tau, n_eff)
    return PerfReport(
        n_eff=n_eff,
        tau=solution.tau,
        p_c=solution.p_c,
        p_b=solution.p_b,
        iterations=solution.iterations,
        residual=solution.residual,
        access=access,
        pdr=pdr(access),
        throughput=throughput(access, t_s, t_c, d.payload_us, d.t_slot_us,
                              throughput_mode),
        states=states,
        delay=total_delay(states, access.p_tr, n_eff, timings, d),
    )


# Metric names accepted by the sweep command, in canonical order.
SWEEP_METRICS = ("pdr", "throughput", "total_delay", "p_bus", "p_col", "n_eff", "tau")


def metric_value(report: PerfReport, metric: str) -> float:
    """Value of one plottable sweep metric.

    ``p_col`` and ``p_bus`` are the fixed point's per-attempt collision and
    per-slot busy probabilities (the quantities that respond monotonically
    to thinning the contender population); the tagged-station slot-state
    probabilities live in ``report.states``.
    """
    if metric == "pdr":
        return report.pdr
    if metric == "throughput":
        return report.throughput.s
    if metric == "total_delay":
        return report.delay.t_td_us
    if metric == "p_bus":
        return report.p_b
    if metric == "p_col":
        return report.p_c
    if metric == "n_eff":
        return report.n_eff
    if metric == "tau":
        return report.tau
    raise ValueError(f"unknown metric: {metric!r}")
