"""Link budget, MIMO capacity, and the beam-switch controller.

The panel reaches any elevation inside its coverage range by electronically
selecting the element whose fixed beam is strongest there; no phase shifters
are involved. The controller adds hysteresis and a minimum dwell so a noisy
trajectory cannot chatter between adjacent beams, and the simulator chains
selection, the link budget, and the capacity formula over a user trajectory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from scipy.constants import c as _C_M_S, k as _BOLTZMANN

from .arraymodel import ArrayCatalog, element_gain_dbi


@dataclass(frozen=True)
class LinkBudget:
    """Fixed link parameters; the transmit antenna gain comes per-sample
    from the selected element."""

    freq_ghz: float
    distance_m: float
    tx_power_dbm: float
    bandwidth_hz: float
    noise_figure_db: float = 0.0
    temperature_k: float = 290.0
    misc_loss_db: float = 0.0
    rx_gain_dbi: float = 0.0

    def __post_init__(self):
        if not (self.freq_ghz > 0 and self.distance_m > 0):
            raise ValueError("frequency and distance must be positive")
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth must be positive")
        if not self.temperature_k > 0:
            raise ValueError("temperature must be positive")


def fspl_db(freq_ghz: float, distance_m: float) -> float:
    """Free-space path loss 20 log10(4 pi d f / c)."""
    if not (freq_ghz > 0 and distance_m > 0):
        raise ValueError("frequency and distance must be positive")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * freq_ghz * 1e9 / _C_M_S)


def noise_floor_dbm(b: LinkBudget) -> float:
    """Thermal noise power in the budget bandwidth plus the noise figure."""
    return (
        10.0 * math.log10(_BOLTZMANN * b.temperature_k * b.bandwidth_hz * 1000.0)
        + b.noise_figure_db
    )


def snr_db(b: LinkBudget, tx_gain_dbi: float) -> float:
    """Received SNR for a given transmit antenna gain."""
    return (
        b.tx_power_dbm
        + tx_gain_dbi
        + b.rx_gain_dbi
        - fspl_db(b.freq_ghz, b.distance_m)
        - b.misc_loss_db
        - noise_floor_dbm(b)
    )


def capacity_bps(
    bandwidth_hz: float, m_tx: int, k_rx: int, snr_linear: float
) -> float:
    """MIMO link capacity B min(M, K) log2(1 + SNR) in bit/s."""
    if not bandwidth_hz > 0:
        raise ValueError("bandwidth must be positive")
    if not (isinstance(m_tx, int) and isinstance(k_rx, int)):
        raise ValueError("antenna counts must be integers")
    if m_tx < 1 or k_rx < 1:
        raise ValueError("antenna counts must be >= 1")
    if snr_linear < 0:
        raise ValueError("snr must be non-negative")
    return bandwidth_hz * min(m_tx, k_rx) * math.log2(1.0 + snr_linear)


@dataclass(frozen=True)
class SwitchConfig:
    """Debounce rule for the controller: a candidate must beat the current
    element by hysteresis_db, and at least min_dwell_steps samples must have
    passed since the last switch."""

    hysteresis_db: float = 1.0
    min_dwell_steps: int = 0

    def __post_init__(self):
        if self.hysteresis_db < 0:
            raise ValueError("hysteresis must be >= 0")
        if self.min_dwell_steps < 0:
            raise ValueError("min dwell must be >= 0")


@dataclass(frozen=True)
class SwitchState:
    """Controller state owned by the caller; updates are functional."""

    current_element_id: int
    hysteresis_db: float = 1.0
    min_dwell_steps: int = 0
    steps_since_switch: int = 0

    def __post_init__(self):
        if self.hysteresis_db < 0 or self.min_dwell_steps < 0:
            raise ValueError("hysteresis and dwell must be >= 0")
        if self.steps_since_switch < 0:
            raise ValueError("steps_since_switch must be >= 0")


def _argmax_element(cat: ArrayCatalog, theta_deg: float) -> tuple[int, float]:
    """Element with the highest H-plane gain at theta; lowest id on ties."""
    if not cat.elements:
        raise ValueError("catalog has no elements")
    best_id = None
    best_gain = -math.inf
    for e in sorted(cat.elements, key=lambda e: e.id):
        g = float(element_gain_dbi(e, theta_deg))
        if g > best_gain:
            best_id, best_gain = e.id, g
    return best_id, best_gain


def select_element(
    cat: ArrayCatalog, state: SwitchState, user_theta_deg: float
) -> tuple[SwitchState, int]:
    """One controller step: pick the argmax candidate and switch to it only
    if it clears the hysteresis margin and the dwell requirement."""
    current = cat[state.current_element_id]
    cand_id, cand_gain = _argmax_element(cat, user_theta_deg)
    cur_gain = float(element_gain_dbi(current, user_theta_deg))
    if (
        cand_id != state.current_element_id
        and cand_gain - cur_gain >= state.hysteresis_db
        and state.steps_since_switch >= state.min_dwell_steps
    ):
        return replace(state, current_element_id=cand_id, steps_since_switch=0), cand_id
    return (
        replace(state, steps_since_switch=state.steps_since_switch + 1),
        state.current_element_id,
    )


@dataclass(frozen=True)
class TrajectorySample:
    t_s: float
    theta_deg: float


@dataclass(frozen=True)
class SimRecord:
    t_s: float
    theta_deg: float
    element_id: int
    tx_gain_dbi: float
    snr_db: float
    capacity_bps: float
    clamped: bool = False


THETA_LIMIT_DEG = 90.0  # the H-plane model covers one front half circle


def simulate(
    cat: ArrayCatalog,
    budget: LinkBudget,
    trajectory: list[TrajectorySample],
    switch: SwitchConfig = SwitchConfig(),
    m_tx: int = 1,
    k_rx: int = 1,
) -> list[SimRecord]:
    """Run the switch controller along a user trajectory and report the
    selected element, its gain toward the user, the SNR, and the capacity
    at every sample. Angles beyond +-90 deg are clamped and flagged."""
    if not trajectory:
        raise ValueError("trajectory is empty")
    times = [s.t_s for s in trajectory]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("trajectory times must be strictly increasing")
    records = []
    state: SwitchState | None = None
    for sample in trajectory:
        theta = sample.theta_deg
        clamped = False
        if abs(theta) > THETA_LIMIT_DEG:
            theta = math.copysign(THETA_LIMIT_DEG, theta)
            clamped = True
        if state is None:
            elem_id, _ = _argmax_element(cat, theta)
            state = SwitchState(
                elem_id, switch.hysteresis_db, switch.min_dwell_steps, 0
            )
        else:
            state, elem_id = select_element(cat, state, theta)
        tx_gain = float(element_gain_dbi(cat[elem_id], theta))
        snr = snr_db(budget, tx_gain)
        cap = capacity_bps(budget.bandwidth_hz, m_tx, k_rx, 10.0 ** (snr / 10.0))
        records.append(
            SimRecord(sample.t_s, sample.theta_deg, elem_id, tx_gain, snr, cap, clamped)
        )
    return records


def switch_count(records: list[SimRecord]) -> int:
    """Number of element changes along a record list."""
    return sum(
        1 for a, b in zip(records, records[1:]) if a.element_id != b.element_id
    )


TRAJECTORY_HEADER = "t_s,theta_deg"
RECORD_HEADER = "t_s,theta_deg,element_id,tx_gain_dbi,snr_db,capacity_bps,clamped"


def load_trajectory_csv(text: str) -> list[TrajectorySample]:
    """Parse the ``t_s,theta_deg`` trajectory schema."""
    samples = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if [c.strip() for c in line.split(",")] != TRAJECTORY_HEADER.split(","):
                raise ValueError(f"line {lineno}: expected header '{TRAJECTORY_HEADER}'")
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise ValueError(f"line {lineno}: expected 2 columns")
        try:
            samples.append(TrajectorySample(float(cells[0]), float(cells[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed numeric value") from None
    if not header_seen:
        raise ValueError("missing trajectory header")
    if not samples:
        raise ValueError("trajectory has no samples")
    return samples


def save_records_csv(records: list[SimRecord]) -> str:
    lines = [RECORD_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    repr(float(r.t_s)),
                    repr(float(r.theta_deg)),
                    str(r.element_id),
                    repr(float(r.tx_gain_dbi)),
                    repr(float(r.snr_db)),
                    repr(float(r.capacity_bps)),
                    "1" if r.clamped else "0",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def load_budget_json(text: str) -> LinkBudget:
    """Budget from a JSON object keyed by the LinkBudget field names."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad budget JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ValueError("budget JSON must be an object")
    try:
        return LinkBudget(**raw)
    except TypeError as exc:
        raise ValueError(f"bad budget object: {exc}") from None


def load_switch_json(text: str) -> SwitchConfig:
    """Switch config from a JSON object (hysteresis_db, min_dwell_steps)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad switch JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ValueError("switch JSON must be an object")
    try:
        return SwitchConfig(**raw)
    except TypeError as exc:
        raise ValueError(f"bad switch object: {exc}") from None
