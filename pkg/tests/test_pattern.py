import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchbeam import (
    AngleGrid,
    AngleRangeError,
    BeamParamError,
    BeamParams,
    BeamTooWideError,
    CoverageError,
    FarFieldPattern,
    PatternError,
    PatternFormatError,
    ResolutionError,
    extract_f2b,
    extract_hpbw,
    extract_peak,
    extract_sll,
    gain_at,
    integrate_sphere,
    load_pattern_csv,
    save_pattern_csv,
    synthesize_beam,
)

HALF_POWER_DB = 10.0 * math.log10(2.0)


def uniform_pattern(grid, level_dbi=0.0, freq=28.0):
    return FarFieldPattern(grid, freq, np.full(grid.shape, level_dbi))


class TestAngleGrid:
    def test_regular_default(self, default_grid):
        assert default_grid.theta_deg[0] == 0.0
        assert default_grid.theta_deg[-1] == 180.0
        assert default_grid.phi_deg[-1] == 359.0
        assert default_grid.covers_full_sphere

    def test_rejects_short_axis(self):
        with pytest.raises(PatternError):
            AngleGrid(np.array([0.0]), np.array([0.0, 90.0]))

    def test_rejects_non_monotone(self):
        with pytest.raises(PatternError):
            AngleGrid(np.array([0.0, 10.0, 5.0]), np.array([0.0, 90.0]))

    def test_rejects_out_of_range(self):
        with pytest.raises(PatternError):
            AngleGrid(np.array([0.0, 181.0]), np.array([0.0, 90.0]))
        with pytest.raises(PatternError):
            AngleGrid(np.array([0.0, 90.0]), np.array([0.0, 360.0]))

    def test_axes_are_immutable(self, default_grid):
        with pytest.raises(ValueError):
            default_grid.theta_deg[0] = 5.0


class TestBeamParams:
    def test_valid(self, ref_params):
        assert ref_params.hpbw_e_deg == 36.7

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(peak_gain_dbi=31.0),
            dict(peak_gain_dbi=-11.0),
            dict(hpbw_e_deg=0.0),
            dict(hpbw_h_deg=190.0),
            dict(sll_db=0.5),
            dict(f2b_db=-1.0),
            dict(f2b_db=0.0),
        ],
    )
    def test_invalid(self, kwargs):
        base = dict(
            peak_gain_dbi=9.6, steer_theta_deg=0.0, hpbw_e_deg=36.7,
            hpbw_h_deg=56.0, sll_db=-9.2, f2b_db=6.5,
        )
        base.update(kwargs)
        with pytest.raises(BeamParamError):
            BeamParams(**base)


class TestSynthesize:
    def test_reference_beam_peak(self, ref_pattern):
        pk = extract_peak(ref_pattern)
        assert pk.gain_dbi == pytest.approx(9.6, abs=1e-12)
        assert pk.theta_deg == 0.0

    def test_quasi_uniform_wide_beam(self, default_grid):
        # degenerate wide beam: the whole front hemisphere within 3 dB of peak
        p = synthesize_beam(
            BeamParams(0.0, 0.0, 180.0, 180.0, -0.01, 0.01), default_grid
        )
        th, _ = default_grid.meshgrid()
        front = th <= 90.0
        assert np.all(p.gain_dbi[front] >= -3.0)
        assert np.all(p.gain_dbi[front] <= 0.0)

    def test_steered_beam_peak_angle(self, default_grid):
        p = synthesize_beam(BeamParams(11.1, 28.0, 36.5, 33.0), default_grid)
        pk = extract_peak(p)
        assert abs(pk.steer_deg - 28.0) <= 0.5
        assert pk.gain_dbi == pytest.approx(11.1, abs=1e-9)

    def test_negative_steer(self, default_grid):
        p = synthesize_beam(BeamParams(10.7, -32.0, 38.0, 34.0), default_grid)
        assert abs(extract_peak(p).steer_deg + 32.0) <= 0.5

    def test_resolution_error(self):
        coarse = AngleGrid.regular(10.0, 10.0)
        with pytest.raises(ResolutionError):
            synthesize_beam(BeamParams(9.6, 0.0, 5.0, 56.0), coarse)

    def test_carries_theta_polarized_field(self, ref_pattern):
        assert ref_pattern.has_field
        assert np.all(ref_pattern.e_phi == 0)
        power = np.abs(ref_pattern.e_theta) ** 2
        assert np.allclose(power, ref_pattern.gain_linear(), rtol=1e-12)


class TestGainAt:
    def test_exact_at_nodes(self, ref_pattern):
        g = ref_pattern.grid
        i, j = 40, 123
        assert gain_at(
            ref_pattern, float(g.theta_deg[i]), float(g.phi_deg[j])
        ) == pytest.approx(float(ref_pattern.gain_dbi[i, j]), abs=1e-12)

    def test_midpoint_linear_power(self):
        # nodes at 0 and 2 dBi, interpolation in linear power
        grid = AngleGrid(np.array([0.0, 10.0]), np.array([0.0, 180.0]))
        p = FarFieldPattern(grid, 28.0, np.array([[0.0, 0.0], [2.0, 2.0]]))
        expected = 10.0 * math.log10((1.0 + 10.0**0.2) / 2.0)
        assert gain_at(p, 5.0, 0.0) == pytest.approx(expected, abs=1e-12)

    def test_boresight_of_reference_beam(self, ref_pattern):
        assert gain_at(ref_pattern, 0.0, 0.0) == pytest.approx(9.6, abs=1e-9)

    def test_phi_wraparound(self, ref_pattern):
        # query inside the wrap cell between the last phi sample and 360
        v = gain_at(ref_pattern, 90.0, 359.5)
        lo = gain_at(ref_pattern, 90.0, 359.0)
        hi = gain_at(ref_pattern, 90.0, 0.0)
        assert min(lo, hi) - 1e-9 <= v <= max(lo, hi) + 1e-9

    def test_range_error(self, ref_pattern):
        with pytest.raises(AngleRangeError):
            gain_at(ref_pattern, 181.0, 0.0)
        grid = AngleGrid(np.array([0.0, 90.0]), np.array([0.0, 90.0]))
        partial = FarFieldPattern(grid, 28.0, np.zeros((2, 2)))
        with pytest.raises(AngleRangeError):
            gain_at(partial, 10.0, 270.0)

    @given(values=st.lists(st.floats(-5.0, 15.0), min_size=4, max_size=4))
    def test_monotone_between_monotone_nodes(self, values):
        vals = sorted(values)
        grid = AngleGrid(np.array([0.0, 10.0, 20.0, 30.0]), np.array([0.0, 180.0]))
        gain = np.array([[v, v] for v in vals])
        p = FarFieldPattern(grid, 28.0, gain)
        q = np.linspace(0.0, 30.0, 61)
        out = gain_at(p, q, np.zeros_like(q))
        assert np.all(np.diff(out) >= -1e-12)


class TestIntegrateSphere:
    def test_isotropic(self, default_grid):
        assert integrate_sphere(uniform_pattern(default_grid, 0.0)) == pytest.approx(
            1.0, abs=1e-3
        )

    def test_half_power_isotropic(self, default_grid):
        assert integrate_sphere(
            uniform_pattern(default_grid, -3.01)
        ) == pytest.approx(0.5, abs=1e-3)

    def test_reference_beam_regression(self, ref_pattern):
        # frozen from scripts/compute_reference_values.py (independent
        # quadrature of the documented lobe-floor model on this grid);
        # the wide constant back cap makes this nominal "efficiency" > 1
        assert integrate_sphere(ref_pattern) == pytest.approx(
            1.8682298686922465, rel=1e-9
        )

    def test_physical_parameterization_stays_below_unity(self, default_grid):
        p = synthesize_beam(
            BeamParams(9.6, 0.0, 36.7, 56.0, -20.0, 20.0), default_grid
        )
        assert 0.0 < integrate_sphere(p) <= 1.05

    def test_scaling_linearity(self, ref_pattern):
        base = integrate_sphere(ref_pattern)
        for k_db in (-7.0, 3.0):
            scaled = integrate_sphere(ref_pattern.with_gain_offset(k_db))
            assert scaled == pytest.approx(base * 10.0 ** (k_db / 10.0), rel=1e-12)

    def test_partial_sphere_rejected(self):
        grid = AngleGrid(
            np.linspace(0.0, 90.0, 91), np.linspace(0.0, 359.0, 360)
        )
        with pytest.raises(CoverageError):
            integrate_sphere(uniform_pattern(grid))

    def test_partial_phi_rejected(self):
        grid = AngleGrid(
            np.linspace(0.0, 180.0, 181), np.linspace(0.0, 180.0, 181)
        )
        with pytest.raises(CoverageError):
            integrate_sphere(uniform_pattern(grid))


class TestExtractHpbw:
    def test_round_trip_h(self, ref_pattern):
        assert extract_hpbw(ref_pattern, "H") == pytest.approx(56.0, abs=0.5)

    def test_round_trip_e(self, ref_pattern):
        assert extract_hpbw(ref_pattern, "E") == pytest.approx(36.7, abs=0.5)

    def test_uniform_pattern_too_wide(self, default_grid):
        with pytest.raises(BeamTooWideError):
            extract_hpbw(uniform_pattern(default_grid), "H")

    def test_steered_round_trip(self, default_grid):
        p = synthesize_beam(BeamParams(10.6, 25.0, 35.9, 49.6), default_grid)
        assert extract_hpbw(p, "H") == pytest.approx(49.6, abs=0.5)
        assert extract_hpbw(p, "E") == pytest.approx(35.9, abs=0.5)

    @settings(max_examples=15, deadline=None)
    @given(offset=st.floats(-12.0, 12.0))
    def test_offset_invariance(self, ref_pattern, offset):
        base = extract_hpbw(ref_pattern, "H")
        shifted = extract_hpbw(ref_pattern.with_gain_offset(offset), "H")
        assert shifted == pytest.approx(base, abs=1e-9)

    def test_bad_plane(self, ref_pattern):
        with pytest.raises(ValueError):
            extract_hpbw(ref_pattern, "X")


class TestExtractSllF2b:
    def test_sll_floor(self, ref_pattern):
        assert extract_sll(ref_pattern, "E") == pytest.approx(-9.2, abs=0.3)
        assert extract_sll(ref_pattern, "H") == pytest.approx(-9.2, abs=0.3)

    def test_f2b(self, ref_pattern):
        assert extract_f2b(ref_pattern) == pytest.approx(6.5, abs=0.3)

    def test_steered_sll_and_f2b(self, default_grid):
        p = synthesize_beam(
            BeamParams(11.1, 28.0, 36.5, 33.0, -10.0, 6.5), default_grid
        )
        assert extract_sll(p, "H") == pytest.approx(-10.0, abs=0.3)
        assert extract_f2b(p) == pytest.approx(6.5, abs=0.3)

    def test_no_side_lobe_sentinel(self, default_grid):
        # floor far below the lobe tail: the cut decays monotonically
        p = synthesize_beam(
            BeamParams(9.6, 0.0, 36.7, 56.0, -90.0, 80.0), default_grid
        )
        assert extract_sll(p, "H") is None
        assert extract_sll(p, "E") is None


class TestPatternCsv:
    def test_round_trip_with_field(self, ref_params):
        grid = AngleGrid.regular(5.0, 15.0)
        p = synthesize_beam(ref_params, grid, 28.0)
        q = load_pattern_csv(save_pattern_csv(p))
        assert q.grid == p.grid
        assert q.freq_ghz == p.freq_ghz
        assert np.array_equal(q.gain_dbi, p.gain_dbi)
        assert np.array_equal(q.e_theta, p.e_theta)
        assert np.array_equal(q.e_phi, p.e_phi)

    def test_round_trip_plain(self, coarse_grid):
        p = uniform_pattern(coarse_grid, 3.25)
        q = load_pattern_csv(save_pattern_csv(p))
        assert not q.has_field
        assert np.array_equal(q.gain_dbi, p.gain_dbi)

    def test_comments_and_crlf(self):
        text = (
            "# a comment\r\n# freq_ghz=28.0\r\n"
            "theta_deg,phi_deg,gain_dbi\r\n"
            "# another comment\r\n"
            "0.0,0.0,1.0\r\n0.0,180.0,1.0\r\n10.0,0.0,2.0\r\n10.0,180.0,2.0\r\n"
        )
        p = load_pattern_csv(text)
        assert p.freq_ghz == 28.0
        assert p.gain_dbi[1, 1] == 2.0

    def test_theta_out_of_range_names_line(self):
        text = (
            "# freq_ghz=28.0\ntheta_deg,phi_deg,gain_dbi\n"
            "0.0,0.0,1.0\n0.0,180.0,1.0\n200.0,0.0,2.0\n200.0,180.0,2.0\n"
        )
        with pytest.raises(PatternFormatError, match="line 5"):
            load_pattern_csv(text)

    def test_malformed_row(self):
        text = (
            "# freq_ghz=28.0\ntheta_deg,phi_deg,gain_dbi\n"
            "0.0,0.0,abc\n"
        )
        with pytest.raises(PatternFormatError, match="line 3"):
            load_pattern_csv(text)

    def test_wrong_column_count(self):
        text = "# freq_ghz=28.0\ntheta_deg,phi_deg,gain_dbi\n0.0,0.0\n"
        with pytest.raises(PatternFormatError, match="columns"):
            load_pattern_csv(text)

    def test_duplicate_pair(self):
        text = (
            "# freq_ghz=28.0\ntheta_deg,phi_deg,gain_dbi\n"
            "0.0,0.0,1.0\n0.0,0.0,1.0\n"
        )
        with pytest.raises(PatternFormatError, match="duplicate"):
            load_pattern_csv(text)

    def test_non_monotone_grid(self):
        text = (
            "# freq_ghz=28.0\ntheta_deg,phi_deg,gain_dbi\n"
            "0.0,90.0,1.0\n0.0,0.0,1.0\n"
        )
        with pytest.raises(PatternFormatError, match="non-monotone"):
            load_pattern_csv(text)

    def test_missing_freq(self):
        text = "theta_deg,phi_deg,gain_dbi\n0.0,0.0,1.0\n0.0,180.0,1.0\n"
        with pytest.raises(PatternFormatError, match="freq_ghz"):
            load_pattern_csv(text)

    def test_field_columns_consistency_enforced(self):
        text = (
            "# freq_ghz=28.0\n"
            "theta_deg,phi_deg,gain_dbi,etheta_re,etheta_im,ephi_re,ephi_im\n"
            "0.0,0.0,0.0,1.0,0.0,0.0,0.0\n"
            "0.0,180.0,0.0,1.0,0.0,0.0,0.0\n"
            "10.0,0.0,0.0,1.0,0.0,0.0,0.0\n"
            "10.0,180.0,0.0,5.0,0.0,0.0,0.0\n"
        )
        with pytest.raises(PatternError, match="proportional"):
            load_pattern_csv(text)


@settings(max_examples=20, deadline=None)
@given(
    peak=st.floats(-5.0, 15.0),
    steer=st.floats(-40.0, 40.0),
    hpbw_e=st.floats(8.0, 80.0),
    hpbw_h=st.floats(8.0, 80.0),
    sll=st.floats(-25.0, -5.0),
    f2b=st.floats(3.0, 25.0),
)
def test_round_trip_property(peak, steer, hpbw_e, hpbw_h, sll, f2b):
    grid = AngleGrid.regular(1.0, 2.0)
    params = BeamParams(peak, steer, hpbw_e, hpbw_h, sll, f2b)
    p = synthesize_beam(params, grid)
    pk = extract_peak(p)
    assert pk.gain_dbi == pytest.approx(peak, abs=0.1)
    assert abs(pk.steer_deg - steer) <= 1.0
    assert extract_hpbw(p, "E") == pytest.approx(hpbw_e, abs=0.5)
    assert extract_hpbw(p, "H") == pytest.approx(hpbw_h, abs=0.5)


@settings(max_examples=20, deadline=None)
@given(
    levels=st.lists(st.floats(-10.0, 10.0), min_size=6, max_size=6),
    freq=st.floats(1.0, 100.0),
)
def test_csv_round_trip_property(levels, freq):
    grid = AngleGrid(np.array([0.0, 45.0, 90.0]), np.array([0.0, 120.0]))
    gain = np.array(levels).reshape(3, 2)
    p = FarFieldPattern(grid, freq, gain)
    q = load_pattern_csv(save_pattern_csv(p))
    assert q.freq_ghz == p.freq_ghz
    assert np.array_equal(q.gain_dbi, p.gain_dbi)
    assert q.grid == p.grid
