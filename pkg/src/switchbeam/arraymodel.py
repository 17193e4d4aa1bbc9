"""Sidewall-steered element catalog and the wall-height steering law.

A metallized sidewall next to the radiating element tilts its beam inside
the H-plane and, past one wavelength of height, raises its gain. The
measured height-to-(beam, gain) mapping at 28 GHz is kept as an embedded
knot table; the 4x3 panel is described by a 12-element catalog of measured
gains, beamwidths, and steer angles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.constants import c as _C_M_S

from .pattern import AngleGrid, BeamParams, FarFieldPattern, beam_gain_dbi, synthesize_beam

# (wall height mm, gain dBi, beam direction deg) measured at 28 GHz.
# Beam tilt saturates at 30 deg; gain saturates at 12.5 dBi near 5 wavelengths.
WALL_LAW_TABLE: tuple[tuple[float, float, float], ...] = (
    (0.0, 9.6, 0.0),
    (3.0, 8.5, 7.0),
    (4.5, 8.7, 10.0),
    (6.0, 9.1, 15.0),
    (11.0, 10.0, 20.0),
    (16.0, 10.5, 25.0),
    (21.5, 11.4, 27.0),
    (25.0, 11.7, 29.0),
    (32.0, 12.1, 30.0),
    (43.0, 12.4, 30.0),
    (54.0, 12.5, 30.0),
)

BEAM_SATURATION_DEG = 30.0
GAIN_SATURATION_DBI = 12.5

_WALL_H = np.array([r[0] for r in WALL_LAW_TABLE])
_WALL_G = np.array([r[1] for r in WALL_LAW_TABLE])
_WALL_B = np.array([r[2] for r in WALL_LAW_TABLE])


@dataclass(frozen=True)
class WallLawPoint:
    wall_height_mm: float
    gain_dbi: float
    beam_deg: float


def wall_law(wh_mm: float) -> tuple[float, float]:
    """(beam direction deg, gain dBi) for a sidewall of the given height.

    Exact at the embedded knots, piecewise linear between them; the beam
    clamps at 30 deg from 32 mm up and the gain at 12.5 dBi past 54 mm.
    """
    if not (math.isfinite(wh_mm) and wh_mm >= 0.0):
        raise ValueError("wall height must be a finite non-negative length")
    if wh_mm >= _WALL_H[-1]:
        return BEAM_SATURATION_DEG, GAIN_SATURATION_DBI
    idx = np.searchsorted(_WALL_H, wh_mm)
    if idx < _WALL_H.size and _WALL_H[idx] == wh_mm:
        return float(_WALL_B[idx]), float(_WALL_G[idx])
    beam = float(np.interp(wh_mm, _WALL_H, _WALL_B))
    gain = float(np.interp(wh_mm, _WALL_H, _WALL_G))
    return beam, gain


@dataclass(frozen=True)
class ElementSpec:
    """One radiating element of the panel: geometry and measured figures.

    gain_28_dbi is the measured gain at 28 GHz, peak_gain_dbi the measured
    peak at 28.5 GHz. sll_db/f2b_db override the panel-wide defaults of the
    synthesized pattern when set.
    """

    id: int
    role: str
    wall_height_mm: float
    steer_deg: float
    gain_28_dbi: float
    peak_gain_dbi: float
    hpbw_h_deg: float
    hpbw_e_deg: float
    sll_db: float | None = None
    f2b_db: float | None = None

    def __post_init__(self):
        if self.role not in ("steered", "boresight"):
            raise ValueError(f"unknown element role {self.role!r}")
        if not 1 <= self.id <= 12:
            raise ValueError("element id must lie in 1..12")
        if self.role == "steered":
            if not self.wall_height_mm > 0:
                raise ValueError("steered elements need a nonzero wall height")
            if abs(self.steer_deg) > 35.0:
                raise ValueError("steer angle magnitude cannot exceed 35 deg")
        else:
            if self.steer_deg != 0.0:
                raise ValueError("boresight elements must have steer 0")
            if self.wall_height_mm != 0.0:
                raise ValueError("boresight elements must have wall height 0")


@dataclass(frozen=True)
class ArrayCatalog:
    """The panel's elements plus the boresight-to-walled spacing note."""

    elements: tuple[ElementSpec, ...]
    spacing_mm: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        ids = [e.id for e in self.elements]
        if len(ids) != len(set(ids)):
            raise ValueError("element ids must be unique")
        if not any(e.role == "boresight" for e in self.elements):
            raise ValueError("catalog needs at least one boresight element")

    def __getitem__(self, element_id: int) -> ElementSpec:
        for e in self.elements:
            if e.id == element_id:
                return e
        raise KeyError(element_id)


def default_catalog() -> ArrayCatalog:
    """The 12-element panel: six sidewall-steered elements (measured steer
    +28/-32/+25/-17/+13/-11 deg) and six boresight elements. Wall heights
    follow the design targets +-10/20/30 deg through the wall law."""
    steered = [
        # id, wall mm, steer, gain@28, peak@28.5, hpbw H, hpbw E
        (1, 32.0, 28.0, 11.1, 11.5, 33.0, 36.5),
        (2, 32.0, -32.0, 10.7, 10.8, 34.0, 38.0),
        (3, 11.0, 25.0, 10.6, 10.7, 49.6, 35.9),
        (4, 11.0, -17.0, 9.3, 9.6, 52.3, 41.0),
        (5, 4.5, 13.0, 9.4, 9.5, 54.5, 42.5),
        (6, 4.5, -11.0, 9.5, 9.7, 44.4, 45.6),
    ]
    boresight = [
        (7, 10.1, 10.8, 41.0, 29.0),
        (8, 10.2, 10.5, 47.8, 28.4),
        (9, 10.3, 10.5, 51.9, 27.8),
        (10, 10.7, 10.8, 39.5, 21.0),
        (11, 10.4, 10.3, 46.7, 28.3),
        (12, 10.2, 10.5, 48.3, 25.5),
    ]
    elements = [
        ElementSpec(i, "steered", wh, st, g28, gpk, hh, he)
        for (i, wh, st, g28, gpk, hh, he) in steered
    ] + [
        ElementSpec(i, "boresight", 0.0, 0.0, g28, gpk, hh, he)
        for (i, g28, gpk, hh, he) in boresight
    ]
    return ArrayCatalog(tuple(elements))


def _element_params(e: ElementSpec) -> BeamParams:
    kwargs = {}
    if e.sll_db is not None:
        kwargs["sll_db"] = e.sll_db
    if e.f2b_db is not None:
        kwargs["f2b_db"] = e.f2b_db
    return BeamParams(
        peak_gain_dbi=e.gain_28_dbi,
        steer_theta_deg=e.steer_deg,
        hpbw_e_deg=e.hpbw_e_deg,
        hpbw_h_deg=e.hpbw_h_deg,
        **kwargs,
    )


def element_pattern(
    e: ElementSpec, grid: AngleGrid, freq_ghz: float = 28.0
) -> FarFieldPattern:
    """Synthesize the element's beam from its catalog figures."""
    return synthesize_beam(_element_params(e), grid, freq_ghz)


def hplane_direction(theta_signed_deg: float) -> tuple[float, float]:
    """Map a signed H-plane elevation angle onto (theta, phi)."""
    t = float(theta_signed_deg)
    return abs(t), 90.0 if t >= 0.0 else 270.0


def element_gain_dbi(e: ElementSpec, theta_signed_deg) -> np.ndarray | float:
    """Element gain along the H-plane at signed elevation angles."""
    t = np.asarray(theta_signed_deg, dtype=float)
    theta = np.abs(t)
    phi = np.where(t >= 0.0, 90.0, 270.0)
    out = beam_gain_dbi(_element_params(e), theta, phi)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CoveragePoint:
    theta_deg: float
    element_id: int
    gain_dbi: float


def coverage_envelope(
    cat: ArrayCatalog,
    theta_min_deg: float = -30.0,
    theta_max_deg: float = 30.0,
    step_deg: float = 0.5,
) -> list[CoveragePoint]:
    """Best element (and its gain) at each H-plane angle in the range.

    The envelope is the pointwise maximum over all element patterns; ties
    resolve to the lowest element id.
    """
    if not step_deg > 0:
        raise ValueError("step must be positive")
    if theta_max_deg < theta_min_deg:
        raise ValueError("empty angle range")
    if not cat.elements:
        raise ValueError("catalog has no elements")
    n = int(round((theta_max_deg - theta_min_deg) / step_deg)) + 1
    thetas = theta_min_deg + step_deg * np.arange(n)
    order = sorted(cat.elements, key=lambda e: e.id)
    gains = np.stack([element_gain_dbi(e, thetas) for e in order])
    best = np.argmax(gains, axis=0)  # first (lowest id) wins ties
    return [
        CoveragePoint(float(t), order[b].id, float(gains[b, i]))
        for i, (t, b) in enumerate(zip(thetas, best))
    ]


def slot_resonance_ghz(sl_mm: float, k_eff: float = 1.209) -> float:
    """Resonance of a half-wavelength slot of length sl_mm.

    f = k_eff * c / (2 SL); k_eff absorbs the effective-length shortening
    of the loaded slot (1.209 reproduces the measured 6.5 mm / 27.9 GHz
    pairing, 1.0 is the bare half-wave rule).
    """
    if not (sl_mm > 0 and k_eff > 0):
        raise ValueError("slot length and k_eff must be positive")
    # c in mm/ns gives GHz directly against a length in mm
    return k_eff * (_C_M_S * 1e-6) / (2.0 * sl_mm)


def catalog_to_json(cat: ArrayCatalog) -> str:
    """Serialize a catalog as a JSON array of element objects."""
    return json.dumps([asdict(e) for e in cat.elements], indent=2) + "\n"


def load_catalog_json(text: str) -> ArrayCatalog:
    """Parse a catalog from the JSON array schema of catalog_to_json."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad catalog JSON: {exc}") from None
    if not isinstance(raw, list):
        raise ValueError("catalog JSON must be an array of element objects")
    elements = []
    for item in raw:
        if not isinstance(item, dict):
            raise ValueError("catalog entries must be objects")
        try:
            elements.append(ElementSpec(**item))
        except TypeError as exc:
            raise ValueError(f"bad element object: {exc}") from None
    return ArrayCatalog(tuple(elements))
