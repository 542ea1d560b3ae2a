from dataclasses import replace

import pytest

from sgcvapor import (EmptyTable, EquationVariant, Handedness, ResponseRecord,
                      SweepAxis, SweepTable, SystemParams, ValidationError,
                      classify_handedness, detect_bands, find_extrema,
                      response_at, sweep_alignment, sweep_detuning)


def make_record(axis_value, eps=-1 + 0.1j, mu=-1 + 0.1j, n=-1 + 0.01j):
    return ResponseRecord(
        delta_p=axis_value, p_align=0.5, rho24=0.01j, rho32=0.001j,
        gamma_e=1e-25j, gamma_m=1e-25j, eps_r=eps, mu_r=mu, n_index=n,
        handedness=classify_handedness(eps, mu))


def make_table(pattern, grid=None):
    """pattern: string of R (right-handed), L (left-handed), F (failed)."""
    if grid is None:
        grid = tuple(float(i) for i in range(len(pattern)))
    records = []
    for g, ch in zip(grid, pattern):
        if ch == "F":
            records.append(None)
        elif ch == "L":
            records.append(make_record(g, eps=-1 + 0.1j, mu=-1 + 0.1j))
        else:
            records.append(make_record(g, eps=1 + 0.1j, mu=1 + 0.1j))
    return SweepTable(axis=SweepAxis.DETUNING, grid=grid,
                      records=tuple(records), bands=(), failures=())


class TestDetectBands:
    def test_all_right_handed(self):
        assert detect_bands(make_table("RRRR")) == []

    def test_run_length_scan(self):
        assert detect_bands(make_table("RLLRL")) == [(1.0, 2.0), (4.0, 4.0)]

    def test_band_at_edges(self):
        assert detect_bands(make_table("LLRLL")) == [(0.0, 1.0), (3.0, 4.0)]

    def test_failure_breaks_a_band(self):
        assert detect_bands(make_table("LLFLL")) == [(0.0, 1.0), (3.0, 4.0)]

    def test_single_point_run_is_zero_width(self):
        bands = detect_bands(make_table("RLR"))
        assert bands == [(1.0, 1.0)]


class TestFindExtrema:
    def test_single_record(self):
        t = make_table("L")
        e = find_extrema(t)
        r = t.records[0]
        assert e.min_re_n == r.n_index.real
        assert e.max_abs_im_n == abs(r.n_index.imag)
        assert e.min_re_eps == r.eps_r.real
        assert e.min_re_mu == r.mu_r.real

    def test_planted_minimum_is_found(self):
        records = (make_record(0.0, n=-1 + 0.5j),
                   make_record(1.0, n=-7 + 0.25j, eps=-9 + 1j, mu=-5 + 1j),
                   make_record(2.0, n=-2 + 3.5j))
        t = SweepTable(axis=SweepAxis.DETUNING, grid=(0.0, 1.0, 2.0),
                       records=records, bands=(), failures=())
        e = find_extrema(t)
        assert (e.min_re_n, e.min_re_n_at) == (-7.0, 1.0)
        assert (e.max_abs_im_n, e.max_abs_im_n_at) == (3.5, 2.0)
        assert (e.min_re_eps, e.min_re_eps_at) == (-9.0, 1.0)
        assert (e.min_re_mu, e.min_re_mu_at) == (-5.0, 1.0)

    def test_failed_points_are_skipped(self):
        e = find_extrema(make_table("LFR"))
        assert e.min_re_n == -1.0

    def test_empty_table_rejected(self):
        with pytest.raises(EmptyTable):
            find_extrema(make_table("FF"))


class TestSweepDetuning:
    def test_degenerate_single_point_grid(self):
        params = SystemParams(p_align=0.5)
        t = sweep_detuning(params, -3.0, 10.0, 1)
        assert t.grid == (-3.0,)
        assert t.records[0] == response_at(replace(params, delta_p=-3.0))

    def test_grid_is_uniform_inclusive(self):
        t = sweep_detuning(SystemParams(), -1.0, 1.0, 5)
        assert t.grid == (-1.0, -0.5, 0.0, 0.5, 1.0)

    def test_invalid_inputs(self):
        with pytest.raises(ValidationError):
            sweep_detuning(SystemParams(), -1.0, 1.0, 0)
        with pytest.raises(ValidationError):
            sweep_detuning(SystemParams(), 2.0, 1.0, 10)

    def test_base_delta_does_not_leak_into_grid(self):
        t = sweep_detuning(SystemParams(delta_p=7.0), -1.0, 1.0, 3)
        assert all(r.delta_p == g for g, r in zip(t.grid, t.records))

    def test_bands_match_record_classification(self, calibrated_base):
        t = sweep_detuning(replace(calibrated_base, p_align=0.5), -20.0, 20.0, 101)
        in_band = set()
        for lo, hi in t.bands:
            in_band.update(g for g in t.grid if lo <= g <= hi)
        for g, r in zip(t.grid, t.records):
            assert (r is not None
                    and r.handedness is Handedness.LEFT_HANDED) == (g in in_band)

    def test_band_edges_stable_under_grid_refinement(self, calibrated_base):
        params = replace(calibrated_base, p_align=0.5)
        coarse = sweep_detuning(params, -20.0, 20.0, 101)
        fine = sweep_detuning(params, -20.0, 20.0, 201)
        spacing = 40.0 / 100
        assert len(coarse.bands) == len(fine.bands)
        for (a, b), (c, d) in zip(coarse.bands, fine.bands):
            assert abs(a - c) <= spacing and abs(b - d) <= spacing


class TestSweepAlignment:
    def test_single_point_interference_free(self):
        t = sweep_alignment(SystemParams(), 0.0, 0.5, 1)
        assert t.grid == (0.0,)
        rec = t.records[0]
        assert rec.p_align == 0.0
        assert rec.rho32 == 0j        # no interference, no magnetic dipole
        assert rec.mu_r == 1.0 + 0j

    def test_guard_excludes_degenerate_endpoint(self):
        with pytest.raises(ValidationError):
            sweep_alignment(SystemParams(), 0.0, 1.0, 11)
        with pytest.raises(ValidationError):
            sweep_alignment(SystemParams(), -0.1, 0.5, 11)

    def test_failures_collected_not_fatal(self):
        params = SystemParams(equation_variant=EquationVariant.PAPER_LITERAL)
        t = sweep_alignment(params, 0.3, 0.7, 5)
        assert len(t.failures) > 0
        assert all(f.kind == "NonPhysicalState" for f in t.failures)
        assert len(t.records) == len(t.grid)
        failed_at = {f.axis_value for f in t.failures}
        for g, r in zip(t.grid, t.records):
            assert (r is None) == (g in failed_at)

    def test_monotone_interference_ordering_of_index_minima(self, calibrated_base):
        # the strongest claim of the model: deeper interference makes the
        # index minimum over the detuning window strictly more negative
        # (401 points: the p=0.99 dip near delta ~ 0.1 is a tenth of a
        # linewidth wide and slips through coarser grids)
        minima = []
        for p in (0.2, 0.5, 0.99):
            t = sweep_detuning(replace(calibrated_base, p_align=p), -20.0, 20.0, 401)
            minima.append(find_extrema(t).min_re_n)
        assert minima[0] > minima[1] > minima[2]
