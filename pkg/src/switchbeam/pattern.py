"""Far-field radiation patterns: synthesis, interpolation, spherical
integration, and beam-statistic extraction.

Conventions: boresight is theta = 0 (+z). The H-plane is the y-z plane
(phi = 90/270 deg), the E-plane the x-z plane (phi = 0/180 deg). Beam steer
is a signed tilt inside the H-plane. Gains are dBi, interpolation and
quadrature act on linear power.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import RegularGridInterpolator

HALF_POWER_DB = 10.0 * math.log10(2.0)  # 3.0103 dB drop at the -3 dB points

Plane = Literal["E", "H"]


class PatternError(ValueError):
    """Base error for pattern operations."""


class BeamParamError(PatternError):
    """Beam parameters violate their domain."""


class ResolutionError(PatternError):
    """Grid too coarse to resolve the requested beam."""


class AngleRangeError(PatternError):
    """Query angle outside the grid hull."""


class CoverageError(PatternError):
    """Pattern does not cover the required angular region."""


class BeamTooWideError(PatternError):
    """No half-power crossing exists on one side of the peak."""


class PatternFormatError(PatternError):
    """Pattern CSV violates the schema."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=a.dtype, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class AngleGrid:
    """Ordered spherical sampling axes: theta in [0, 180], phi in [0, 360)."""

    theta_deg: np.ndarray
    phi_deg: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.theta_deg, dtype=float)
        ph = np.asarray(self.phi_deg, dtype=float)
        for name, ax in (("theta", th), ("phi", ph)):
            if ax.ndim != 1 or ax.size < 2:
                raise PatternError(f"{name} axis needs at least 2 ordered samples")
            if not np.all(np.isfinite(ax)):
                raise PatternError(f"{name} axis contains non-finite values")
            if not np.all(np.diff(ax) > 0):
                raise PatternError(f"{name} axis must be strictly increasing")
        if th[0] < 0.0 or th[-1] > 180.0:
            raise PatternError("theta samples must lie in [0, 180]")
        if ph[0] < 0.0 or ph[-1] >= 360.0:
            raise PatternError("phi samples must lie in [0, 360)")
        object.__setattr__(self, "theta_deg", _readonly(th))
        object.__setattr__(self, "phi_deg", _readonly(ph))

    @classmethod
    def regular(cls, theta_step_deg: float = 0.5, phi_step_deg: float = 1.0) -> "AngleGrid":
        """Full-sphere grid; defaults resolve any beamwidth above ~1 degree."""
        nt = int(round(180.0 / theta_step_deg)) + 1
        nph = int(round(360.0 / phi_step_deg))
        theta = np.linspace(0.0, 180.0, nt)
        phi = np.linspace(0.0, 360.0 * (nph - 1) / nph, nph)
        return cls(theta, phi)

    @property
    def n_theta(self) -> int:
        return self.theta_deg.size

    @property
    def n_phi(self) -> int:
        return self.phi_deg.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_theta, self.n_phi)

    @property
    def phi_wrap_gap_deg(self) -> float:
        """Gap closing the phi axis back onto itself (last sample to first + 360)."""
        return 360.0 - (float(self.phi_deg[-1]) - float(self.phi_deg[0]))

    @property
    def phi_is_periodic(self) -> bool:
        """True when the phi samples cover one full period without a large hole."""
        interior = float(np.max(np.diff(self.phi_deg)))
        return self.phi_wrap_gap_deg <= 1.5 * interior

    @property
    def covers_full_sphere(self) -> bool:
        return (
            abs(float(self.theta_deg[0])) <= 1e-9
            and abs(float(self.theta_deg[-1]) - 180.0) <= 1e-9
            and self.phi_is_periodic
        )

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.theta_deg, self.phi_deg, indexing="ij")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AngleGrid):
            return NotImplemented
        return np.array_equal(self.theta_deg, other.theta_deg) and np.array_equal(
            self.phi_deg, other.phi_deg
        )


@dataclass(frozen=True)
class BeamParams:
    """Parametric single-beam descriptor.

    peak_gain_dbi and the two half-power beamwidths fix the Gaussian main
    lobe; sll_db sets the constant front-hemisphere floor relative to the
    peak and f2b_db the constant back-hemisphere level (peak - f2b_db).
    """

    peak_gain_dbi: float
    steer_theta_deg: float = 0.0
    hpbw_e_deg: float = 36.7
    hpbw_h_deg: float = 56.0
    sll_db: float = -10.0
    f2b_db: float = 6.5

    def __post_init__(self):
        vals = (
            self.peak_gain_dbi, self.steer_theta_deg, self.hpbw_e_deg,
            self.hpbw_h_deg, self.sll_db, self.f2b_db,
        )
        if not all(math.isfinite(v) for v in vals):
            raise BeamParamError("beam parameters must be finite")
        if not -10.0 <= self.peak_gain_dbi <= 30.0:
            raise BeamParamError("peak_gain_dbi must lie in [-10, 30]")
        if not (0.0 < self.hpbw_e_deg <= 180.0 and 0.0 < self.hpbw_h_deg <= 180.0):
            raise BeamParamError("HPBW values must lie in (0, 180]")
        if self.sll_db >= 0.0:
            raise BeamParamError("sll_db must be negative")
        if self.f2b_db <= 0.0:
            raise BeamParamError("f2b_db must be positive")


def _unit_vectors(theta_deg, phi_deg):
    th = np.radians(theta_deg)
    ph = np.radians(phi_deg)
    st = np.sin(th)
    return st * np.cos(ph), st * np.sin(ph), np.cos(th)


def beam_gain_dbi(params: BeamParams, theta_deg, phi_deg):
    """Evaluate the parametric beam model at arbitrary directions.

    The main lobe is a separable Gaussian in the two principal-plane offset
    angles, worth exactly half power at +-HPBW/2 in each plane. Outside it
    the front hemisphere is floored at peak + sll_db and the back hemisphere
    sits at peak - f2b_db; hemispheres follow the steered beam axis.
    """
    x, y, z = _unit_vectors(theta_deg, phi_deg)
    ps = math.radians(params.steer_theta_deg)
    xp = x
    yp = y * math.cos(ps) - z * math.sin(ps)
    zp = y * math.sin(ps) + z * math.cos(ps)
    de = np.degrees(np.arctan2(xp, zp))
    dh = np.degrees(np.arctan2(yp, zp))
    main = -HALF_POWER_DB * (
        (2.0 * de / params.hpbw_e_deg) ** 2 + (2.0 * dh / params.hpbw_h_deg) ** 2
    )
    floor = np.where(zp >= 0.0, params.sll_db, -params.f2b_db)
    return params.peak_gain_dbi + np.maximum(main, floor)


@dataclass(frozen=True, eq=False)
class FarFieldPattern:
    """Sampled realized gain over a spherical grid at a single frequency.

    The optional complex field pair (e_theta, e_phi) must satisfy
    |E_theta|^2 + |E_phi|^2 proportional to linear gain with one positive
    constant across the whole grid.
    """

    grid: AngleGrid
    freq_ghz: float
    gain_dbi: np.ndarray
    e_theta: np.ndarray | None = None
    e_phi: np.ndarray | None = None

    def __post_init__(self):
        gain = np.asarray(self.gain_dbi, dtype=float)
        if gain.shape != self.grid.shape:
            raise PatternError(
                f"gain shape {gain.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(gain)):
            raise PatternError("gain must be finite at every sample")
        if not (math.isfinite(self.freq_ghz) and self.freq_ghz > 0):
            raise PatternError("freq_ghz must be positive and finite")
        object.__setattr__(self, "freq_ghz", float(self.freq_ghz))
        object.__setattr__(self, "gain_dbi", _readonly(gain))
        if (self.e_theta is None) != (self.e_phi is None):
            raise PatternError("field requires both e_theta and e_phi")
        if self.e_theta is not None:
            et = np.asarray(self.e_theta, dtype=complex)
            ep = np.asarray(self.e_phi, dtype=complex)
            if et.shape != self.grid.shape or ep.shape != self.grid.shape:
                raise PatternError("field shape does not match grid")
            if not (np.all(np.isfinite(et)) and np.all(np.isfinite(ep))):
                raise PatternError("field must be finite at every sample")
            power = np.abs(et) ** 2 + np.abs(ep) ** 2
            ratio = power / 10.0 ** (gain / 10.0)
            ref = float(np.median(ratio))
            if ref <= 0.0 or np.max(np.abs(ratio - ref)) > 1e-6 * ref:
                raise PatternError(
                    "field power is not proportional to linear gain"
                )
            object.__setattr__(self, "e_theta", _readonly(et))
            object.__setattr__(self, "e_phi", _readonly(ep))

    @property
    def has_field(self) -> bool:
        return self.e_theta is not None

    def gain_linear(self) -> np.ndarray:
        return 10.0 ** (self.gain_dbi / 10.0)

    def with_gain_offset(self, offset_db: float) -> "FarFieldPattern":
        """Uniformly shifted copy (fields rescaled to stay consistent)."""
        scale = 10.0 ** (offset_db / 20.0)
        return FarFieldPattern(
            self.grid,
            self.freq_ghz,
            self.gain_dbi + offset_db,
            None if self.e_theta is None else self.e_theta * scale,
            None if self.e_phi is None else self.e_phi * scale,
        )


def synthesize_beam(
    params: BeamParams, grid: AngleGrid, freq_ghz: float = 28.0
) -> FarFieldPattern:
    """Sample the parametric beam model onto a grid.

    The result carries a theta-polarized field (E_theta = sqrt of linear
    gain) so polarization-aware metrics stay computable.

    Raises
    ------
    BeamParamError
        Propagated from BeamParams validation.
    ResolutionError
        If either HPBW would be sampled by fewer than 3 points (HPBW below
        twice the coarsest theta spacing).
    """
    step = float(np.max(np.diff(grid.theta_deg)))
    if params.hpbw_e_deg < 2.0 * step or params.hpbw_h_deg < 2.0 * step:
        raise ResolutionError(
            f"theta spacing {step} deg leaves fewer than 3 samples inside the "
            f"HPBW ({params.hpbw_e_deg} x {params.hpbw_h_deg} deg)"
        )
    th, ph = grid.meshgrid()
    gain = beam_gain_dbi(params, th, ph)
    e_theta = 10.0 ** (gain / 20.0) + 0.0j
    return FarFieldPattern(grid, freq_ghz, gain, e_theta, np.zeros_like(e_theta))


def _phi_extended(grid: AngleGrid, values: np.ndarray):
    """Append the wrap column so the periodic phi axis closes at phi0 + 360."""
    phi_ext = np.concatenate([grid.phi_deg, [grid.phi_deg[0] + 360.0]])
    vals_ext = np.concatenate([values, values[:, :1]], axis=1)
    return phi_ext, vals_ext


def gain_at(p: FarFieldPattern, theta_deg, phi_deg):
    """Bilinear interpolation of gain in linear power; exact at grid nodes.

    phi wraps around when the grid covers a full period; otherwise queries
    must stay inside the sampled phi hull. theta never extrapolates.
    """
    theta_q = np.asarray(theta_deg, dtype=float)
    phi_q = np.asarray(phi_deg, dtype=float)
    scalar = theta_q.ndim == 0 and phi_q.ndim == 0
    theta_q, phi_q = np.broadcast_arrays(theta_q, phi_q)
    grid = p.grid
    if np.any(theta_q < grid.theta_deg[0] - 1e-12) or np.any(
        theta_q > grid.theta_deg[-1] + 1e-12
    ):
        raise AngleRangeError("theta query outside the grid hull")
    theta_q = np.clip(theta_q, grid.theta_deg[0], grid.theta_deg[-1])
    power = p.gain_linear()
    if grid.phi_is_periodic:
        phi_axis, power = _phi_extended(grid, power)
        phi_q = grid.phi_deg[0] + np.mod(phi_q - grid.phi_deg[0], 360.0)
    else:
        phi_axis = grid.phi_deg
        if np.any(phi_q < phi_axis[0] - 1e-12) or np.any(phi_q > phi_axis[-1] + 1e-12):
            raise AngleRangeError("phi query outside the grid hull")
        phi_q = np.clip(phi_q, phi_axis[0], phi_axis[-1])
    interp = RegularGridInterpolator(
        (grid.theta_deg, phi_axis), power, method="linear", bounds_error=True
    )
    out = 10.0 * np.log10(interp(np.stack([theta_q, phi_q], axis=-1)))
    return float(out) if scalar else out


def sphere_quadrature(grid: AngleGrid, values: np.ndarray):
    """Integrate values(theta, phi) * sin(theta) over the sphere (trapezoid).

    The phi axis is treated as periodic (the wrap segment closes the period).
    Accepts real or complex integrands.
    """
    phi_ext, vals = _phi_extended(grid, np.asarray(values))
    th = np.radians(grid.theta_deg)
    inner = trapezoid(vals, np.radians(phi_ext), axis=1)
    return trapezoid(inner * np.sin(th), th)


def integrate_sphere(p: FarFieldPattern) -> float:
    """Average linear gain over the full sphere, 1/(4 pi) * integral.

    For a physically consistent realized-gain pattern this is the radiation
    efficiency times the mismatch factor.
    """
    if not p.grid.covers_full_sphere:
        raise CoverageError(
            "pattern must cover theta [0, 180] and a full phi period"
        )
    return float(sphere_quadrature(p.grid, p.gain_linear())) / (4.0 * math.pi)


@dataclass(frozen=True)
class PeakInfo:
    """Grid-resolution beam peak: value, location, and signed H-plane tilt."""

    gain_dbi: float
    theta_deg: float
    phi_deg: float
    steer_deg: float


def extract_peak(p: FarFieldPattern) -> PeakInfo:
    i, j = np.unravel_index(int(np.argmax(p.gain_dbi)), p.grid.shape)
    th = float(p.grid.theta_deg[i])
    ph = float(p.grid.phi_deg[j])
    _, y, z = _unit_vectors(th, ph)
    steer = math.degrees(math.atan2(y, z))
    return PeakInfo(float(p.gain_dbi[i, j]), th, ph, steer)


def _cut_directions(plane: str, steer_deg: float, tau_deg: np.ndarray):
    """Great-circle cut directions: H is the y-z circle, E the x-z circle
    rigidly rotated by the steer angle so it passes through the beam axis."""
    t = np.radians(tau_deg)
    if plane == "H":
        x = np.zeros_like(t)
        y = np.sin(t)
        z = np.cos(t)
    else:
        ps = math.radians(steer_deg)
        x = np.sin(t)
        y = np.cos(t) * math.sin(ps)
        z = np.cos(t) * math.cos(ps)
    theta = np.degrees(np.arccos(np.clip(z, -1.0, 1.0)))
    phi = np.mod(np.degrees(np.arctan2(y, x)), 360.0)
    return theta, phi


def _check_plane(plane: str):
    if plane not in ("E", "H"):
        raise ValueError("plane must be 'E' or 'H'")


def _principal_cut(p: FarFieldPattern, plane: str):
    """Resample the steer-corrected principal-plane cut of the pattern.

    Returns (tau, gain_db, center) where tau is the signed in-plane angle at
    the grid's theta resolution and center is the expected lobe position.
    """
    pk = extract_peak(p)
    step = float(np.max(np.diff(p.grid.theta_deg)))
    n = max(int(round(360.0 / step)), 8)
    tau = np.linspace(-180.0, 180.0, n, endpoint=False)
    th, ph = _cut_directions(plane, pk.steer_deg, tau)
    gdb = gain_at(p, th, ph)
    center = pk.steer_deg if plane == "H" else 0.0
    return tau, np.asarray(gdb, dtype=float), center


def extract_hpbw(p: FarFieldPattern, plane: Plane) -> float:
    """Half-power beamwidth of the principal-plane cut, in degrees.

    Crossings are located by linear interpolation of the dB cut between
    samples. Raises BeamTooWideError when either side never drops to half
    power within a half circle of the peak.
    """
    _check_plane(plane)
    tau, gdb, _ = _principal_cut(p, plane)
    n = tau.size
    step = 360.0 / n
    k = int(np.argmax(gdb))
    thr = gdb[k] - HALF_POWER_DB

    def crossing(direction: int) -> float | None:
        prev = gdb[k]
        for m in range(1, n // 2 + 1):
            cur = gdb[(k + direction * m) % n]
            if cur <= thr:
                frac = (prev - thr) / (prev - cur)
                return (m - 1 + frac) * step
            prev = cur
        return None

    right = crossing(+1)
    left = crossing(-1)
    if right is None or left is None:
        raise BeamTooWideError("no half-power crossing bracketing the peak")
    return right + left


def _circular_delta(a: np.ndarray, b: float) -> np.ndarray:
    return np.abs((a - b + 180.0) % 360.0 - 180.0)


def extract_sll(p: FarFieldPattern, plane: Plane) -> float | None:
    """Highest lobe outside the main lobe on the front half of the cut,
    in dB relative to the peak (negative). Returns None when the cut decays
    monotonically to the hemisphere edge (no side lobe).

    The main lobe is walked outward from the peak; its boundary is the first
    non-decreasing step found beyond the half-power radius. Samples within a
    couple of grid cells of the hemisphere seam are skipped so back-lobe
    energy cannot bleed into the side-lobe figure through interpolation.
    """
    _check_plane(plane)
    tau, gdb, center = _principal_cut(p, plane)
    n = tau.size
    k = int(np.argmax(gdb))
    peak = gdb[k]
    seam_margin = 2.0 * max(
        float(np.max(np.diff(p.grid.theta_deg))),
        float(np.max(np.diff(p.grid.phi_deg))),
    )
    in_front = _circular_delta(tau, center) <= 90.0 - seam_margin

    def side_max(direction: int) -> float | None:
        boundary = None
        prev = gdb[k]
        dropped = False
        for m in range(1, n // 2 + 1):
            idx = (k + direction * m) % n
            if not in_front[idx]:
                break
            cur = gdb[idx]
            if dropped and cur >= prev:
                boundary = m - 1  # local minimum / plateau start
                break
            if cur <= peak - HALF_POWER_DB:
                dropped = True
            prev = cur
        if boundary is None:
            return None
        best = gdb[(k + direction * boundary) % n]
        for m in range(boundary + 1, n // 2 + 1):
            idx = (k + direction * m) % n
            if not in_front[idx]:
                break
            if gdb[idx] > best:
                best = gdb[idx]
        return best

    candidates = [v for v in (side_max(+1), side_max(-1)) if v is not None]
    if not candidates:
        return None
    return max(candidates) - peak


def extract_f2b(p: FarFieldPattern) -> float:
    """Front-to-back ratio: peak minus the highest gain in the hemisphere
    opposite the (steer-corrected) beam axis, in dB."""
    pk = extract_peak(p)
    ux, uy, uz = _unit_vectors(pk.theta_deg, pk.phi_deg)
    th, ph = p.grid.meshgrid()
    x, y, z = _unit_vectors(th, ph)
    back = (x * ux + y * uy + z * uz) < 0.0
    if not np.any(back):
        raise CoverageError("pattern has no samples in the back hemisphere")
    return pk.gain_dbi - float(np.max(p.gain_dbi[back]))


_FREQ_RE = re.compile(r"^#\s*freq_ghz\s*=\s*(\S+)\s*$")
_HEADER_PLAIN = ["theta_deg", "phi_deg", "gain_dbi"]
_HEADER_FIELD = _HEADER_PLAIN + ["etheta_re", "etheta_im", "ephi_re", "ephi_im"]


def save_pattern_csv(p: FarFieldPattern) -> str:
    """Serialize a pattern to CSV, one row per node in row-major theta order."""
    out = [f"# freq_ghz={p.freq_ghz!r}"]
    out.append(",".join(_HEADER_FIELD if p.has_field else _HEADER_PLAIN))
    for i, th in enumerate(p.grid.theta_deg):
        for j, ph in enumerate(p.grid.phi_deg):
            cells = [repr(float(th)), repr(float(ph)), repr(float(p.gain_dbi[i, j]))]
            if p.has_field:
                et = p.e_theta[i, j]
                ep = p.e_phi[i, j]
                cells += [
                    repr(float(et.real)), repr(float(et.imag)),
                    repr(float(ep.real)), repr(float(ep.imag)),
                ]
            out.append(",".join(cells))
    return "\n".join(out) + "\n"


def load_pattern_csv(text: str) -> FarFieldPattern:
    """Parse the pattern CSV schema; errors carry the offending line number."""
    freq = None
    header = None
    rows: list[tuple[int, list[float]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _FREQ_RE.match(line)
            if m:
                if freq is not None:
                    raise PatternFormatError("duplicate freq_ghz declaration", lineno)
                try:
                    freq = float(m.group(1))
                except ValueError:
                    raise PatternFormatError("bad freq_ghz value", lineno) from None
            continue
        cells = [c.strip() for c in line.split(",")]
        if header is None:
            if cells == _HEADER_PLAIN:
                header = _HEADER_PLAIN
            elif cells == _HEADER_FIELD:
                header = _HEADER_FIELD
            else:
                raise PatternFormatError("unrecognized header", lineno)
            continue
        if len(cells) != len(header):
            raise PatternFormatError(
                f"expected {len(header)} columns, got {len(cells)}", lineno
            )
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise PatternFormatError("malformed numeric value", lineno) from None
        if not 0.0 <= vals[0] <= 180.0:
            raise PatternFormatError(f"theta {vals[0]} out of [0, 180]", lineno)
        if not 0.0 <= vals[1] < 360.0:
            raise PatternFormatError(f"phi {vals[1]} out of [0, 360)", lineno)
        rows.append((lineno, vals))
    if header is None:
        raise PatternFormatError("missing header line")
    if freq is None:
        raise PatternFormatError("missing '# freq_ghz=' declaration")
    if not rows:
        raise PatternFormatError("no data rows")

    theta0 = rows[0][1][0]
    phi_axis: list[float] = []
    phi_lines: list[int] = []
    for lineno, vals in rows:
        if vals[0] != theta0:
            break
        phi_axis.append(vals[1])
        phi_lines.append(lineno)
    nphi = len(phi_axis)
    if len(rows) % nphi != 0:
        raise PatternFormatError(
            f"row count {len(rows)} is not a multiple of the phi block ({nphi})",
            rows[-1][0],
        )
    ntheta = len(rows) // nphi
    theta_axis = [rows[i * nphi][1][0] for i in range(ntheta)]
    theta_lines = [rows[i * nphi][0] for i in range(ntheta)]
    for axis, lines, label in (
        (phi_axis, phi_lines, "phi"),
        (theta_axis, theta_lines, "theta"),
    ):
        for a, b, ln in zip(axis, axis[1:], lines[1:]):
            if b == a:
                raise PatternFormatError(f"duplicate {label} sample {b}", ln)
            if b < a:
                raise PatternFormatError(f"non-monotone {label} axis at {b}", ln)
    for m, (lineno, vals) in enumerate(rows):
        want = (theta_axis[m // nphi], phi_axis[m % nphi])
        if (vals[0], vals[1]) != want:
            raise PatternFormatError(
                f"row-major order violation: expected theta={want[0]}, phi={want[1]}",
                lineno,
            )

    grid = AngleGrid(np.array(theta_axis), np.array(phi_axis))
    data = np.array([vals for _, vals in rows], dtype=float)
    gain = data[:, 2].reshape(ntheta, nphi)
    e_theta = e_phi = None
    if header is _HEADER_FIELD:
        e_theta = (data[:, 3] + 1j * data[:, 4]).reshape(ntheta, nphi)
        e_phi = (data[:, 5] + 1j * data[:, 6]).reshape(ntheta, nphi)
    return FarFieldPattern(grid, freq, gain, e_theta, e_phi)
