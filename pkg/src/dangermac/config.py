"""MAC/PHY timing and road-scenario configuration.

All durations are microseconds, all road lengths are meters, and the data
rate is Mb/s (equivalently bits per microsecond). Configs are immutable
after loading and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

MODEL_MODES = ("busy_aware", "classic")
THROUGHPUT_MODES = ("slot_scaled", "unscaled")
DANGER_METRICS = ("min_gap", "front_gap_only")


class ConfigError(ValueError):
    """Raised for unparseable input, unknown keys, or out-of-range values."""


@dataclass(frozen=True)
class MacTimings:
    """Channel access timing parameters and frame sizes.

    ``cw_min`` is the minimum contention window; a station at backoff
    stage 0 draws its counter uniformly from ``0..cw_min``, so the stage-0
    window holds ``cw_min + 1`` counter values. ``max_stage`` is the number
    of window doublings after which the window stops growing.
    """

    difs_us: float = 64.0
    sifs_us: float = 32.0
    slot_us: float = 13.0
    prop_delay_us: float = 1.0
    payload_bytes: int = 1023
    data_rate_mbps: float = 6.0
    header_bytes: int = 50
    ack_us: float = 44.0
    rts_us: float = 0.0
    cts_us: float = 0.0
    cw_min: int = 7
    max_stage: int = 5

    @property
    def w0(self) -> int:
        """Stage-0 window size in slots (number of counter values)."""
        return self.cw_min + 1


@dataclass(frozen=True)
class ScenarioConfig:
    """Road scenario and evaluation knobs.

    ``threshold_m`` is the danger-distance cutoff; ``None`` disables the
    transmit filter entirely (benchmark behaviour, every vehicle contends).
    """

    n_vehicles: int = 50
    road_length_m: float = 1000.0
    threshold_m: float | None = None
    trials: int = 1000
    rng_seed: int = 1
    model_mode: str = "busy_aware"
    throughput_mode: str = "slot_scaled"
    danger_metric: str = "min_gap"


@dataclass(frozen=True)
class FrameDurations:
    """Serialization times derived from sizes and data rate, in us."""

    payload_us: float
    header_us: float
    t_slot_us: float


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def validate_timings(t: MacTimings) -> None:
    _require(t.difs_us > 0, f"difs_us must be > 0 (got {t.difs_us})")
    _require(t.sifs_us > 0, f"sifs_us must be > 0 (got {t.sifs_us})")
    _require(t.slot_us > 0, f"slot_us must be > 0 (got {t.slot_us})")
    _require(t.prop_delay_us >= 0, f"prop_delay_us must be >= 0 (got {t.prop_delay_us})")
    _require(t.payload_bytes >= 1, f"payload_bytes must be >= 1 (got {t.payload_bytes})")
    _require(t.data_rate_mbps > 0, f"data_rate_mbps must be > 0 (got {t.data_rate_mbps})")
    _require(t.header_bytes >= 0, f"header_bytes must be >= 0 (got {t.header_bytes})")
    _require(t.ack_us >= 0, f"ack_us must be >= 0 (got {t.ack_us})")
    _require(t.rts_us >= 0, f"rts_us must be >= 0 (got {t.rts_us})")
    _require(t.cts_us >= 0, f"cts_us must be >= 0 (got {t.cts_us})")
    _require(t.cw_min >= 1, f"cw_min must be >= 1 (got {t.cw_min})")
    _require(t.max_stage >= 0, f"max_stage must be >= 0 (got {t.max_stage})")


def validate_scenario(s: ScenarioConfig) -> None:
    _require(s.n_vehicles >= 1, f"n_vehicles must be >= 1 (got {s.n_vehicles})")
    _require(s.road_length_m > 0, f"road_length_m must be > 0 (got {s.road_length_m})")
    if s.threshold_m is not None:
        _require(s.threshold_m >= 0, f"threshold_m must be >= 0 (got {s.threshold_m})")
    _require(s.trials >= 1, f"trials must be >= 1 (got {s.trials})")
    _require(s.rng_seed >= 0, f"rng_seed must be >= 0 (got {s.rng_seed})")
    _require(
        s.model_mode in MODEL_MODES,
        f"model_mode must be one of {MODEL_MODES} (got {s.model_mode!r})",
    )
    _require(
        s.throughput_mode in THROUGHPUT_MODES,
        f"throughput_mode must be one of {THROUGHPUT_MODES} (got {s.throughput_mode!r})",
    )
    _require(
        s.danger_metric in DANGER_METRICS,
        f"danger_metric must be one of {DANGER_METRICS} (got {s.danger_metric!r})",
    )


_TIMING_FIELDS = {f.name: f for f in fields(MacTimings)}
_SCENARIO_FIELDS = {f.name: f for f in fields(ScenarioConfig)}
_INT_FIELDS = {"payload_bytes", "header_bytes", "cw_min", "max_stage",
               "n_vehicles", "trials", "rng_seed"}


def _coerce(key: str, value):
    if value is None:
        if key == "threshold_m":
            return None
        raise ConfigError(f"{key} must not be null")
    if isinstance(value, bool):
        raise ConfigError(f"{key} must be a number or string, not a boolean")
    if key in _INT_FIELDS:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{key} must be an integer (got {value})")
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer (got {value!r})") from None
    if key in ("model_mode", "throughput_mode", "danger_metric"):
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string (got {value!r})")
        return value
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number (got {value!r})") from None


def load_config(
    text: str | None = None,
    overrides: dict | None = None,
) -> tuple[MacTimings, ScenarioConfig]:
    """Build validated configs from JSON text plus explicit overrides.

    The JSON document is a single flat object whose keys are exactly the
    field names of :class:`MacTimings` and :class:`ScenarioConfig`; omitted
    keys take the defaults. Unknown keys are rejected. ``overrides`` (for
    example parsed CLI flags) are applied on top of the JSON values.
    """
    merged: dict = {}
    if text is not None and text.strip():
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config JSON must be a flat object")
        merged.update(doc)
    if overrides:
        merged.update(overrides)

    timing_kwargs: dict = {}
    scenario_kwargs: dict = {}
    for key, value in merged.items():
        if key in _TIMING_FIELDS:
            timing_kwargs[key] = _coerce(key, value)
        elif key in _SCENARIO_FIELDS:
            scenario_kwargs[key] = _coerce(key, value)
        else:
            raise ConfigError(f"unknown config key: {key!r}")

    timings = MacTimings(**timing_kwargs)
    scenario = ScenarioConfig(**scenario_kwargs)
    validate_timings(timings)
    validate_scenario(scenario)
    return timings, scenario


def config_to_dict(timings: MacTimings, scenario: ScenarioConfig) -> dict:
    """Flatten both configs into one JSON-serializable dict (round-trips)."""
    out: dict = {}
    for f in fields(MacTimings):
        out[f.name] = getattr(timings, f.name)
    for f in fields(ScenarioConfig):
        out[f.name] = getattr(scenario, f.name)
    return out


def derive_durations(t: MacTimings) -> FrameDurations:
    """Convert payload/header byte counts into air time at the data rate."""
    return FrameDurations(
        payload_us=t.payload_bytes * 8.0 / t.data_rate_mbps,
        header_us=t.header_bytes * 8.0 / t.data_rate_mbps,
        t_slot_us=t.slot_us,
    )
