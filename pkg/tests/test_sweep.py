import math

import numpy as np
import pytest

from qgame.games import builtin_bayesian, builtin_da, builtin_pd
from qgame.serialize import result_to_json_text
from qgame.sweep import (
    SweepSpec,
    effective_workers,
    gamma_grid,
    p_grid,
    run_sweep,
    summarize_regions,
    value_grid,
)

PI = math.pi


@pytest.fixture(scope="module")
def bayes_result():
    spec = SweepSpec(
        game=builtin_bayesian(), gamma_values=gamma_grid(), p_values=p_grid()
    )
    return run_sweep(spec)


@pytest.fixture(scope="module")
def pd_result():
    return run_sweep(SweepSpec(game=builtin_pd(), gamma_values=gamma_grid()))


@pytest.fixture(scope="module")
def da_result():
    return run_sweep(SweepSpec(game=builtin_da(), gamma_values=gamma_grid()))


class TestGrids:
    def test_p_grid(self):
        grid = p_grid()
        assert len(grid) == 21
        assert grid[0] == 0.0 and grid[-1] == 1.0

    def test_gamma_grid_clamps_endpoint(self):
        grid = gamma_grid()
        assert len(grid) == 32
        assert grid[-1] == PI / 2
        assert grid[-2] == pytest.approx(1.5)

    def test_value_grid_rejects_bad_input(self):
        with pytest.raises(ValueError):
            value_grid(1.0, 0.0)


class TestRunSweep:
    def test_cell_count_and_order(self, bayes_result):
        assert len(bayes_result.cells) == 21 * 32
        keys = [(c.p, c.gamma) for c in bayes_result.cells]
        assert keys == sorted(keys)

    def test_two_player_cells_have_no_p(self, pd_result):
        assert len(pd_result.cells) == 32
        assert all(c.p is None for c in pd_result.cells)

    def test_boundary_column_p1_matches_pd_sweep(self, bayes_result, pd_result):
        # Project (A, B1) out of the p = 1 column and compare classes.
        for gamma in gamma_grid():
            bayes = bayes_result.cell(1.0, gamma)
            pd = pd_result.cell(None, gamma)
            projected = {
                (
                    round(c.theta_profile[0], 9),
                    round(c.theta_profile[1], 9),
                    round(c.payoffs[0], 9),
                    round(c.payoffs[1], 9),
                )
                for c in bayes.classes
            }
            direct = {
                (
                    round(c.theta_profile[0], 9),
                    round(c.theta_profile[1], 9),
                    round(c.payoffs[0], 9),
                    round(c.payoffs[1], 9),
                )
                for c in pd.classes
            }
            assert projected == direct

    def test_boundary_column_p0_matches_da_sweep(self, bayes_result, da_result):
        for gamma in gamma_grid():
            bayes = bayes_result.cell(0.0, gamma)
            da = da_result.cell(None, gamma)
            projected = {
                (
                    round(c.theta_profile[0], 9),
                    round(c.theta_profile[2], 9),
                    round(c.payoffs[0], 9),
                    round(c.payoffs[2], 9),
                )
                for c in bayes.classes
            }
            direct = {
                (
                    round(c.theta_profile[0], 9),
                    round(c.theta_profile[1], 9),
                    round(c.payoffs[0], 9),
                    round(c.payoffs[1], 9),
                )
                for c in da.classes
            }
            assert projected == direct

    def test_cooperate_class_payoff_structure(self, bayes_result):
        # Along the low-p band: B1 sits at 10, B2 at 9, A decreases linearly
        # in p from 11.
        cells = [
            (c.p, cls)
            for c in bayes_result.cells
            for cls in c.classes
            if cls.theta_profile == (0.0, PI, 0.0)
        ]
        assert cells
        for p, cls in cells:
            assert cls.payoffs[1] == pytest.approx(10.0, abs=1e-9)
            assert cls.payoffs[2] == pytest.approx(9.0, abs=1e-9)
            assert cls.payoffs[0] == pytest.approx(11.0 - 10.0 * p, abs=1e-9)

    def test_high_p_class_payoff_structure(self, bayes_result):
        # B payoffs constant along p at fixed gamma; A affine in p.
        by_gamma: dict[float, list] = {}
        for c in bayes_result.cells:
            for cls in c.classes:
                if cls.theta_profile == (PI, PI, 0.0) and c.gamma > 0:
                    by_gamma.setdefault(round(c.gamma, 9), []).append((c.p, cls.payoffs))
        assert by_gamma
        for gamma, entries in by_gamma.items():
            entries.sort()
            b1 = {round(pay[1], 9) for _, pay in entries}
            b2 = {round(pay[2], 9) for _, pay in entries}
            assert len(b1) == 1 and len(b2) == 1
            if len(entries) >= 3:
                (p0, y0), (p1, y1) = entries[0], entries[-1]
                slope = (y1[0] - y0[0]) / (p1 - p0)
                for p, pay in entries:
                    assert pay[0] == pytest.approx(y0[0] + slope * (p - p0), abs=1e-9)


class TestDeterminism:
    def test_parallel_run_is_byte_identical(self):
        spec = SweepSpec(
            game=builtin_bayesian(),
            gamma_values=gamma_grid(0.4),
            p_values=p_grid(0.25),
        )
        serial = result_to_json_text(run_sweep(spec, workers=1))
        parallel = result_to_json_text(run_sweep(spec, workers=2))
        assert serial == parallel

    def test_workers_capped_by_env(self, monkeypatch):
        monkeypatch.setenv("QGAME_THREADS", "2")
        assert effective_workers(8) == 2
        monkeypatch.setenv("QGAME_THREADS", "junk")
        with pytest.raises(ValueError, match="QGAME_THREADS"):
            effective_workers(8)
        monkeypatch.delenv("QGAME_THREADS")
        assert effective_workers(None) == 1


class TestSummarizeRegions:
    def test_defect_defect_defect_region(self, bayes_result):
        summaries = summarize_regions(bayes_result)
        (e3,) = [s for s in summaries if s.theta_profile == (PI, PI, PI)]
        assert e3.p_range == (0.0, 1.0)
        assert e3.gamma_range[0] == pytest.approx(0.55)
        assert e3.gamma_range[1] == pytest.approx(1.15)

    def test_cooperate_region_spans_all_gamma(self, bayes_result):
        summaries = summarize_regions(bayes_result)
        (e2,) = [s for s in summaries if s.theta_profile == (0.0, PI, 0.0)]
        assert e2.gamma_range == (0.0, PI / 2)
        assert e2.p_range[0] == 0.0
        assert e2.p_range[1] == pytest.approx(0.15)

    def test_cells_cover_exactly_the_occupied_set(self, bayes_result):
        summaries = summarize_regions(bayes_result)
        for s in summaries:
            expected = {
                (c.p, c.gamma)
                for c in bayes_result.cells
                for cls in c.classes
                if cls.signature()
                == (tuple(round(t, 9) for t in s.theta_profile), s.operator_label)
            }
            assert set(s.cells) == expected

    def test_empty_result_gives_empty_summary(self):
        spec = SweepSpec(game=builtin_pd(), gamma_values=(1.3, 1.4, 1.5))
        result = run_sweep(spec)
        assert all(not c.classes for c in result.cells)
        assert summarize_regions(result) == []
