"""Touchstone v1 scattering-parameter sweeps and scalar RF figures.

Handles .s1p/.s2p/.sNp text in MA, DB, or RI format, stores everything as
complex linear entries on a strictly increasing GHz axis, and extracts the
usual single numbers: port-to-port isolation, -10 dB impedance bandwidth,
and the resonance frequency of a reflection dip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class TouchstoneError(ValueError):
    """Malformed Touchstone input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class SweepSMatrix:
    """Frequency-swept N-port scattering matrix (complex linear entries)."""

    freq_ghz: np.ndarray
    s: np.ndarray
    z0_ohm: float = 50.0

    def __post_init__(self):
        f = np.asarray(self.freq_ghz, dtype=float)
        s = np.asarray(self.s, dtype=complex)
        if f.ndim != 1 or f.size < 1:
            raise ValueError("freq_ghz must be a non-empty 1-D array")
        if not np.all(np.isfinite(f)) or not np.all(np.diff(f) > 0):
            raise ValueError("freq_ghz must be finite and strictly increasing")
        if s.ndim != 3 or s.shape[0] != f.size or s.shape[1] != s.shape[2]:
            raise ValueError("s must have shape (n_freq, n_ports, n_ports)")
        if s.shape[1] < 1:
            raise ValueError("need at least one port")
        if not np.all(np.isfinite(s)):
            raise ValueError("scattering entries must be finite")
        if not self.z0_ohm > 0:
            raise ValueError("z0_ohm must be positive")
        f.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "freq_ghz", f)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "z0_ohm", float(self.z0_ohm))

    @property
    def n_ports(self) -> int:
        return self.s.shape[1]


_UNIT_TO_GHZ = {"hz": 1e-9, "khz": 1e-6, "mhz": 1e-3, "ghz": 1.0}


def _pair_to_complex(fmt: str, a: float, b: float) -> complex:
    if fmt == "ri":
        return complex(a, b)
    if fmt == "ma":
        return a * complex(math.cos(math.radians(b)), math.sin(math.radians(b)))
    # db: 20 log10 |S|, angle in degrees
    mag = 10.0 ** (a / 20.0)
    return mag * complex(math.cos(math.radians(b)), math.sin(math.radians(b)))


def _parse_option_line(tokens: list[str], lineno: int):
    unit = "ghz"
    fmt = "ma"
    z0 = 50.0
    it = iter(tokens)
    for tok in it:
        low = tok.lower()
        if low in _UNIT_TO_GHZ:
            unit = low
        elif low == "s":
            pass
        elif low in ("y", "z", "h", "g"):
            raise TouchstoneError(f"only S parameters supported, got '{tok}'", lineno)
        elif low in ("ri", "ma", "db"):
            fmt = low
        elif low == "r":
            try:
                z0 = float(next(it))
            except (StopIteration, ValueError):
                raise TouchstoneError("expected impedance after 'R'", lineno) from None
        else:
            raise TouchstoneError(f"unknown option token '{tok}'", lineno)
    return unit, fmt, z0


def parse_touchstone(text: str, n_ports: int) -> SweepSMatrix:
    """Parse Touchstone v1 text for the stated port count.

    Option line: ``# <unit> S <MA|DB|RI> R <z0>`` (tokens optional, defaults
    GHz/MA/50). ``!`` comments are stripped. Two-port rows follow the v1
    column order S11 S21 S12 S22; for more ports the entries run row-major
    with any line wrapping. Only version 1 is accepted.
    """
    if n_ports < 1:
        raise ValueError("n_ports must be >= 1")
    option = None
    option_line = None
    numbers: list[float] = []
    number_lines: list[int] = []
    per_freq = 1 + 2 * n_ports * n_ports
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            raise TouchstoneError(
                "Touchstone v2 keywords are not supported (v1 only)", lineno
            )
        if line.startswith("#"):
            if option is not None:
                raise TouchstoneError("duplicate option line", lineno)
            option = _parse_option_line(line[1:].split(), lineno)
            option_line = lineno
            continue
        if option is None:
            raise TouchstoneError("data before the option line", lineno)
        toks = line.split()
        if n_ports <= 2 and len(toks) != per_freq:
            raise TouchstoneError(
                f"expected {per_freq} columns for {n_ports}-port data, "
                f"got {len(toks)}",
                lineno,
            )
        for tok in toks:
            try:
                numbers.append(float(tok))
            except ValueError:
                raise TouchstoneError(f"bad number '{tok}'", lineno) from None
            number_lines.append(lineno)
    if option is None:
        raise TouchstoneError("missing option line")
    unit, fmt, z0 = option
    if not numbers:
        raise TouchstoneError("no network data", option_line)
    if len(numbers) % per_freq != 0:
        raise TouchstoneError(
            f"data size {len(numbers)} is not a whole number of "
            f"{n_ports}-port frequency blocks",
            number_lines[-1],
        )
    nf = len(numbers) // per_freq
    freqs = np.empty(nf)
    s = np.empty((nf, n_ports, n_ports), dtype=complex)
    scale = _UNIT_TO_GHZ[unit]
    for b in range(nf):
        base = b * per_freq
        freqs[b] = numbers[base] * scale
        vals = numbers[base + 1 : base + per_freq]
        entries = [
            _pair_to_complex(fmt, vals[2 * m], vals[2 * m + 1])
            for m in range(n_ports * n_ports)
        ]
        if n_ports == 2:
            # v1 quirk: two-port data is ordered S11 S21 S12 S22
            s[b, 0, 0], s[b, 1, 0], s[b, 0, 1], s[b, 1, 1] = entries
        else:
            s[b] = np.array(entries).reshape(n_ports, n_ports)
        if b > 0 and freqs[b] <= freqs[b - 1]:
            raise TouchstoneError(
                f"non-monotone frequency {freqs[b]!r} GHz",
                number_lines[base],
            )
    return SweepSMatrix(freqs, s, z0)


def format_touchstone(sm: SweepSMatrix) -> str:
    """Emit canonical v1 text: ``# GHz S RI R <z0>``, row-major entries,
    at most four complex pairs per line, each matrix row on a new line."""
    n = sm.n_ports
    lines = [f"# GHz S RI R {sm.z0_ohm:g}"]
    for b, f in enumerate(sm.freq_ghz):
        if n == 1:
            v = sm.s[b, 0, 0]
            lines.append(
                f"{float(f)!r} {float(v.real)!r} {float(v.imag)!r}"
            )
        elif n == 2:
            order = [(0, 0), (1, 0), (0, 1), (1, 1)]
            cells = [repr(float(f))]
            for i, j in order:
                v = sm.s[b, i, j]
                cells += [repr(float(v.real)), repr(float(v.imag))]
            lines.append(" ".join(cells))
        else:
            for i in range(n):
                row: list[str] = [repr(float(f))] if i == 0 else []
                pairs = 0
                for j in range(n):
                    v = sm.s[b, i, j]
                    row += [repr(float(v.real)), repr(float(v.imag))]
                    pairs += 1
                    if pairs == 4 and j < n - 1:
                        lines.append(" ".join(row))
                        row = []
                        pairs = 0
                if row:
                    lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def _entry_at(sm: SweepSMatrix, i: int, j: int, f_ghz: float) -> complex:
    """Complex S_ij at f_ghz, linear interpolation between sweep points."""
    f = sm.freq_ghz
    if not f[0] <= f_ghz <= f[-1]:
        raise ValueError(
            f"frequency {f_ghz} GHz outside the sweep [{f[0]}, {f[-1]}]"
        )
    col = sm.s[:, i - 1, j - 1]
    k = int(np.searchsorted(f, f_ghz))
    if k < f.size and f[k] == f_ghz:
        return complex(col[k])
    t = (f_ghz - f[k - 1]) / (f[k] - f[k - 1])
    return complex(col[k - 1] * (1.0 - t) + col[k] * t)


def _check_port(sm: SweepSMatrix, port: int):
    if not 1 <= port <= sm.n_ports:
        raise ValueError(f"port {port} outside 1..{sm.n_ports}")


def isolation_db(sm: SweepSMatrix, i: int, j: int, f_ghz: float) -> float:
    """20 log10 |S_ij| at f_ghz for a distinct port pair."""
    _check_port(sm, i)
    _check_port(sm, j)
    if i == j:
        raise ValueError("isolation needs two distinct ports")
    mag = abs(_entry_at(sm, i, j, f_ghz))
    if mag == 0.0:
        return -math.inf
    return 20.0 * math.log10(mag)


def _reflection_db(sm: SweepSMatrix, port: int) -> np.ndarray:
    mags = np.abs(sm.s[:, port - 1, port - 1])
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(mags)


def bandwidth_minus10db(
    sm: SweepSMatrix, port: int, threshold_db: float = -10.0
) -> tuple[float, float] | None:
    """Widest contiguous band where the port reflection stays at or below
    the threshold. Edges are located by linear interpolation of the dB
    curve; returns None when the sweep never reaches the threshold."""
    _check_port(sm, port)
    db = _reflection_db(sm, port)
    f = sm.freq_ghz
    below = db <= threshold_db
    if not np.any(below):
        return None
    bands = []
    k = 0
    n = f.size
    while k < n:
        if not below[k]:
            k += 1
            continue
        start = k
        while k + 1 < n and below[k + 1]:
            k += 1
        end = k
        if start == 0:
            f_lo = float(f[0])
        else:
            t = (threshold_db - db[start - 1]) / (db[start] - db[start - 1])
            f_lo = float(f[start - 1] * (1.0 - t) + f[start] * t)
        if end == n - 1:
            f_hi = float(f[-1])
        else:
            t = (threshold_db - db[end]) / (db[end + 1] - db[end])
            f_hi = float(f[end] * (1.0 - t) + f[end + 1] * t)
        bands.append((f_lo, f_hi))
        k += 1
    return max(bands, key=lambda b: b[1] - b[0])


@dataclass(frozen=True)
class ResonanceResult:
    """Dip frequency of |S_pp|; at_edge flags a minimum on the sweep border."""

    freq_ghz: float
    at_edge: bool = False


def resonance_freq(sm: SweepSMatrix, port: int) -> ResonanceResult:
    """Frequency of the global |S_pp| minimum, refined by the parabola
    through the three neighboring dB samples. A minimum sitting on the
    first or last sweep point is returned as-is with at_edge set."""
    _check_port(sm, port)
    db = _reflection_db(sm, port)
    f = sm.freq_ghz
    k = int(np.argmin(db))
    if k == 0 or k == f.size - 1:
        return ResonanceResult(float(f[k]), at_edge=True)
    x1, x2, x3 = f[k - 1], f[k], f[k + 1]
    y1, y2, y3 = db[k - 1], db[k], db[k + 1]
    num = (y1 - y2) * (x3 - x2) ** 2 - (y3 - y2) * (x2 - x1) ** 2
    den = (y1 - y2) * (x3 - x2) + (y3 - y2) * (x2 - x1)
    if den == 0.0:
        return ResonanceResult(float(x2))
    return ResonanceResult(float(x2 + 0.5 * num / den))
