"""MIMO diversity figures from scattering parameters or complex patterns.

Implements the envelope correlation coefficient via the closed-form
S-parameter expression and via pattern-overlap quadrature in a Taga-style
propagation environment, plus the two-branch diversity gain, its
efficiency-scaled variant, and the mean effective gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .pattern import AngleGrid, FarFieldPattern, sphere_quadrature
from .sparams import SweepSMatrix, _entry_at

DB_FLOOR = -100.0


class LossyPortError(ValueError):
    """S-parameter ECC formula is invalid for strongly lossy ports."""


class GridMismatchError(ValueError):
    """Two patterns do not share a grid."""


class MissingFieldError(ValueError):
    """Operation requires polarization-resolved (complex field) patterns."""


@dataclass(frozen=True)
class AngularDensity:
    """Normalized angular power density, uniform in azimuth.

    kind 'isotropic' is 1/(4 pi); 'gaussian_elevation' concentrates power
    around mean_deg in elevation with spread sigma_deg. The normalization
    constant is fixed by fine quadrature so the density integrates to one
    over the sphere.
    """

    kind: str
    mean_deg: float = 90.0
    sigma_deg: float = 20.0

    def __post_init__(self):
        if self.kind not in ("isotropic", "gaussian_elevation"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "gaussian_elevation" and not self.sigma_deg > 0:
            raise ValueError("sigma_deg must be positive")

    @classmethod
    def isotropic(cls) -> "AngularDensity":
        return cls("isotropic")

    @classmethod
    def gaussian_elevation(cls, mean_deg: float, sigma_deg: float) -> "AngularDensity":
        return cls("gaussian_elevation", mean_deg, sigma_deg)

    @cached_property
    def _gauss_norm(self) -> float:
        # 2 pi * integral of exp(-(theta-mean)^2 / 2 sigma^2) sin(theta) dtheta
        th = np.linspace(0.0, math.pi, 36001)
        mean = math.radians(self.mean_deg)
        sigma = math.radians(self.sigma_deg)
        shape = np.exp(-((th - mean) ** 2) / (2.0 * sigma**2)) * np.sin(th)
        return float(2.0 * math.pi * np.trapezoid(shape, th))

    def evaluate(self, theta_deg) -> np.ndarray:
        """Density values (per steradian) at the given elevation angles."""
        th = np.asarray(theta_deg, dtype=float)
        if self.kind == "isotropic":
            return np.full_like(th, 1.0 / (4.0 * math.pi))
        mean = math.radians(self.mean_deg)
        sigma = math.radians(self.sigma_deg)
        rad = np.radians(th)
        return np.exp(-((rad - mean) ** 2) / (2.0 * sigma**2)) / self._gauss_norm


@dataclass(frozen=True)
class PropagationEnvironment:
    """Incident-field model: cross-polarization ratio plus one angular
    density per polarization. xpr_linear = inf selects the theta-only limit."""

    xpr_linear: float = 1.0
    theta_density: AngularDensity = AngularDensity.isotropic()
    phi_density: AngularDensity = AngularDensity.isotropic()

    def __post_init__(self):
        if not self.xpr_linear > 0:
            raise ValueError("xpr_linear must be positive")

    @property
    def pol_weights(self) -> tuple[float, float]:
        """(theta, phi) power weights: XPR/(1+XPR) and 1/(1+XPR)."""
        if math.isinf(self.xpr_linear):
            return 1.0, 0.0
        return (
            self.xpr_linear / (1.0 + self.xpr_linear),
            1.0 / (1.0 + self.xpr_linear),
        )


@dataclass(frozen=True)
class EccResult:
    """Envelope correlation in [0, 1]; the dB view floors at -100."""

    rho_e: float

    def __post_init__(self):
        if not (math.isfinite(self.rho_e) and 0.0 <= self.rho_e <= 1.0):
            raise ValueError("rho_e must lie in [0, 1]")

    @property
    def rho_e_db(self) -> float:
        if self.rho_e <= 10.0 ** (DB_FLOOR / 10.0):
            return DB_FLOOR
        return 10.0 * math.log10(self.rho_e)


def _clamped_rho(value: float, slack: float = 1e-6) -> EccResult:
    if value > 1.0 + slack or value < -slack:
        raise ValueError(f"correlation {value} outside [0, 1] beyond tolerance")
    return EccResult(min(max(value, 0.0), 1.0))


def ecc_from_sparams(
    sm: SweepSMatrix, i: int, j: int, f_ghz: float
) -> EccResult:
    """Closed-form envelope correlation from the scattering matrix:

        rho_e = |S_ii* S_ij + S_ji* S_jj|^2
                / ((1 - |S_ii|^2 - |S_ji|^2)(1 - |S_jj|^2 - |S_ij|^2))

    Entries are complex-interpolated at f_ghz. Valid only while both
    denominator factors stay positive (high-efficiency ports).
    """
    if i == j:
        raise ValueError("ECC needs two distinct ports")
    sii = _entry_at(sm, i, i, f_ghz)
    sjj = _entry_at(sm, j, j, f_ghz)
    sij = _entry_at(sm, i, j, f_ghz)
    sji = _entry_at(sm, j, i, f_ghz)
    d1 = 1.0 - abs(sii) ** 2 - abs(sji) ** 2
    d2 = 1.0 - abs(sjj) ** 2 - abs(sij) ** 2
    if d1 <= 0.0 or d2 <= 0.0:
        raise LossyPortError(
            "ports reflect/couple too much power for the S-parameter ECC form"
        )
    num = abs(sii.conjugate() * sij + sji.conjugate() * sjj) ** 2
    return _clamped_rho(num / (d1 * d2), slack=1e-9)


def _require_field(p: FarFieldPattern) -> None:
    if not p.has_field:
        raise MissingFieldError("pattern carries no complex field")


def _pol_gains(p: FarFieldPattern) -> tuple[np.ndarray, np.ndarray]:
    """Split linear gain into (G_theta, G_phi) using the field magnitudes."""
    _require_field(p)
    pt = np.abs(p.e_theta) ** 2
    pp = np.abs(p.e_phi) ** 2
    total = pt + pp
    g = p.gain_linear()
    return g * pt / total, g * pp / total


def _density_grids(env: PropagationEnvironment, grid: AngleGrid):
    pt = env.theta_density.evaluate(grid.theta_deg)[:, None]
    pp = env.phi_density.evaluate(grid.theta_deg)[:, None]
    ones = np.ones((1, grid.n_phi))
    return pt * ones, pp * ones


def ecc_from_patterns(
    p1: FarFieldPattern, p2: FarFieldPattern, env: PropagationEnvironment
) -> EccResult:
    """Envelope correlation from two complex patterns on a shared grid:

        rho_e = |I (XPR E1t E2t* Pt + E1p E2p* Pp) dOmega|^2
                / (I(XPR |E1t|^2 Pt + |E1p|^2 Pp) * I(... pattern 2 ...))

    using the same spherical trapezoid quadrature as integrate_sphere.
    """
    _require_field(p1)
    _require_field(p2)
    if p1.grid != p2.grid:
        raise GridMismatchError("patterns must share one grid")
    xpr = env.xpr_linear
    if math.isinf(xpr):
        raise ValueError("pattern-route ECC needs a finite XPR")
    grid = p1.grid
    pt, pp = _density_grids(env, grid)
    cross = xpr * p1.e_theta * np.conj(p2.e_theta) * pt + p1.e_phi * np.conj(
        p2.e_phi
    ) * pp
    a1 = xpr * np.abs(p1.e_theta) ** 2 * pt + np.abs(p1.e_phi) ** 2 * pp
    a2 = xpr * np.abs(p2.e_theta) ** 2 * pt + np.abs(p2.e_phi) ** 2 * pp
    num = abs(sphere_quadrature(grid, cross)) ** 2
    den = float(sphere_quadrature(grid, a1)) * float(sphere_quadrature(grid, a2))
    if den <= 0.0:
        raise ValueError("pattern power vanishes in this environment")
    return _clamped_rho(num / den)


def diversity_gain(ecc: EccResult) -> float:
    """Two-branch selection diversity gain 10 sqrt(1 - rho_e^2), dB (max 10)."""
    return 10.0 * math.sqrt(max(0.0, 1.0 - ecc.rho_e**2))


def edg(ecc: EccResult, efficiency: float) -> float:
    """Effective diversity gain: DG plus the efficiency term in dB."""
    if not 0.0 < efficiency <= 1.0:
        raise ValueError("efficiency must lie in (0, 1]")
    return diversity_gain(ecc) + 10.0 * math.log10(efficiency)


def meg(p: FarFieldPattern, env: PropagationEnvironment) -> float:
    """Mean effective gain in dB over the environment:

        MEG = I [ XPR/(1+XPR) Gt Pt + 1/(1+XPR) Gp Pp ] dOmega

    Needs a polarization-resolved pattern. The result floors at -100 dB
    (orthogonal antenna/environment limit).
    """
    gt, gp = _pol_gains(p)
    pt, pp = _density_grids(env, p.grid)
    wt, wp = env.pol_weights
    total = float(sphere_quadrature(p.grid, wt * gt * pt + wp * gp * pp))
    if total <= 10.0 ** (DB_FLOOR / 10.0):
        return DB_FLOOR
    return 10.0 * math.log10(total)
