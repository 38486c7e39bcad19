import math

import numpy as np
import pytest

from sequd_opt.augud import AugudConfig
from sequd_opt.benchmarks import lookup
from sequd_opt.sequd import (
    History,
    SequdConfig,
    SubspaceGrid,
    Trial,
    default_stage_size,
    run_seqrand,
    run_sequd,
    shift_into_bounds,
    snap_existing,
    zoom_levels,
)
from sequd_opt.space import SearchSpace


def sphere(cfg):
    x = np.array(list(cfg.values()))
    return -float(np.sum((x - 0.5) ** 2))


class TestStageGeometry:
    def test_default_stage_size(self):
        assert default_stage_size(2) == (15, 15)
        assert default_stage_size(5) == (15, 15)
        assert default_stage_size(6) == (25, 25)

    def test_initial_grid_midpoints(self):
        g = SubspaceGrid.initial(2, 4)
        assert g.levels.shape == (2, 4)
        assert np.allclose(g.levels[0], [0.125, 0.375, 0.625, 0.875])

    def test_zoom_levels_halve_spacing(self):
        lv1 = zoom_levels(0.5, 2, 4)
        assert np.allclose(np.diff(lv1), 1.0 / 8.0)
        lv2 = zoom_levels(0.5, 3, 4)
        assert np.allclose(np.diff(lv2), 1.0 / 16.0)

    def test_zoom_centered_on_incumbent(self):
        for q in (4, 5, 15):
            lv = zoom_levels(0.5, 2, q)
            assert 0.5 in lv
            # the incumbent sits within one spacing of the middle
            mid = lv[len(lv) // 2]
            assert abs(mid - 0.5) <= 1.0 / (2.0 * q) + 1e-12

    def test_shift_into_bounds_translates(self):
        lv = np.array([-0.1, 0.0, 0.1, 0.2])
        out = shift_into_bounds(lv)
        assert out.min() >= 0.0
        assert np.allclose(np.diff(out), np.diff(lv))

    def test_shift_upper_edge(self):
        lv = np.array([0.85, 0.95, 1.05])
        out = shift_into_bounds(lv)
        assert out.max() <= 1.0
        assert np.allclose(np.diff(out), 0.1)

    def test_grid_box_brackets_levels(self):
        g = SubspaceGrid.around(np.array([0.3, 0.7]), 2, 4)
        lo, hi = g.box()
        assert (lo <= g.levels.min(axis=1) + 1e-12).all()
        assert (hi >= g.levels.max(axis=1) - 1e-12).all()

    def test_snap_picks_nearest_level(self):
        g = SubspaceGrid.initial(1, 4)
        pts = np.array([[0.126], [0.874], [0.5]])
        snapped = g.snap(pts)
        # levels sit at 0.125/0.375/0.625/0.875; 0.5 ties down to 0.375
        assert snapped[:, 0].tolist() == [1, 4, 2]


class TestHistory:
    def test_incumbent_maximize(self):
        h = History("maximize")
        h.append(Trial(0, 1, (0.1,), {"x": 0.1}, 1.0, "ok"))
        h.append(Trial(1, 1, (0.2,), {"x": 0.2}, 3.0, "ok"))
        h.append(Trial(2, 1, (0.3,), {"x": 0.3}, 2.0, "ok"))
        assert h.incumbent().index == 1
        assert h.best_value() == 3.0

    def test_incumbent_minimize(self):
        h = History("minimize")
        h.append(Trial(0, 1, (0.1,), {"x": 0.1}, 1.0, "ok"))
        h.append(Trial(1, 1, (0.2,), {"x": 0.2}, -3.0, "ok"))
        assert h.best_value() == -3.0

    def test_failed_trials_never_win(self):
        h = History("maximize")
        h.append(Trial(0, 1, (0.1,), {"x": 0.1}, math.nan, "failed"))
        h.append(Trial(1, 1, (0.2,), {"x": 0.2}, -5.0, "ok"))
        assert h.incumbent().index == 1

    def test_earliest_wins_ties(self):
        h = History("maximize")
        h.append(Trial(0, 1, (0.1,), {"x": 0.1}, 2.0, "ok"))
        h.append(Trial(1, 1, (0.2,), {"x": 0.2}, 2.0, "ok"))
        assert h.incumbent().index == 0

    def test_indices_strictly_increasing(self):
        h = History()
        h.append(Trial(0, 1, (0.1,), {}, 1.0, "ok"))
        with pytest.raises(ValueError):
            h.append(Trial(0, 1, (0.2,), {}, 1.0, "ok"))


class TestSnapExisting:
    def test_snapped_points_reused(self):
        h = History("maximize")
        h.append(Trial(0, 1, (0.31, 0.69), {}, 1.0, "ok"))
        h.append(Trial(1, 1, (0.95, 0.95), {}, 0.0, "ok"))
        g = SubspaceGrid.around(np.array([0.3, 0.7]), 2, 4)
        fixed, n_e = snap_existing(h, g)
        lo, hi = g.box()
        inside = ((np.array([[0.31, 0.69], [0.95, 0.95]]) >= lo)
                  & (np.array([[0.31, 0.69], [0.95, 0.95]]) <= hi)).all(axis=1)
        assert n_e == int(inside.sum())

    def test_empty_history(self):
        g = SubspaceGrid.initial(2, 4)
        fixed, n_e = snap_existing(History(), g)
        assert n_e == 0 and fixed.n == 0


class TestConfig:
    def test_resolve_stage_defaults(self):
        cfg = SequdConfig(t_max=100)
        assert cfg.resolve_stage(2) == (15, 15)
        assert cfg.resolve_stage(7) == (25, 25)

    def test_resolve_stage_overrides(self):
        cfg = SequdConfig(t_max=100, n_per_stage=20, q_levels=10)
        assert cfg.resolve_stage(2) == (20, 10)

    def test_rejects_indivisible(self):
        with pytest.raises(ValueError):
            SequdConfig(t_max=100, n_per_stage=20, q_levels=15).resolve_stage(2)

    def test_rejects_budget_below_one_stage(self):
        with pytest.raises(ValueError):
            SequdConfig(t_max=10).resolve_stage(2)


class TestRunSequd:
    def test_budget_never_exceeded(self):
        space = SearchSpace.unit_box(2)
        for t_max in (15, 37, 60):
            cfg = SequdConfig(t_max=t_max, seed=0)
            h = run_sequd(space, sphere, cfg)
            assert len(h) <= t_max

    def test_stages_recorded(self):
        space = SearchSpace.unit_box(2)
        h = run_sequd(space, sphere, SequdConfig(t_max=45, seed=0))
        stages = sorted({t.stage for t in h.trials})
        assert stages == [1, 2, 3]

    def test_converges_on_sphere(self):
        space = SearchSpace.unit_box(2)
        h = run_sequd(space, sphere, SequdConfig(t_max=90, seed=0))
        assert h.best_value() > -1e-3

    def test_later_stages_shrink(self):
        space = SearchSpace.unit_box(2)
        h = run_sequd(space, sphere, SequdConfig(t_max=90, seed=1))
        spans = {}
        for t in h.trials:
            spans.setdefault(t.stage, []).append(t.unit)
        for stage, units in spans.items():
            pts = np.array(units)
            width = (pts.max(axis=0) - pts.min(axis=0)).max()
            # stage j samples a box of side about 2^(1-j)
            assert width <= 0.5 ** (stage - 1) + 1e-9

    def test_minimize_direction(self):
        space = SearchSpace.unit_box(2)
        cfg = SequdConfig(t_max=45, seed=0, direction="minimize")
        h = run_sequd(space, lambda c: -sphere(c), cfg)
        assert h.best_value() < 1e-2

    def test_deterministic_given_seed(self):
        space = SearchSpace.unit_box(2)
        a = run_sequd(space, sphere, SequdConfig(t_max=45, seed=9))
        b = run_sequd(space, sphere, SequdConfig(t_max=45, seed=9))
        assert [t.unit for t in a.trials] == [t.unit for t in b.trials]
        assert [t.value for t in a.trials] == [t.value for t in b.trials]

    def test_parallelism_matches_serial(self):
        space = SearchSpace.unit_box(2)
        a = run_sequd(space, sphere, SequdConfig(t_max=45, seed=9,
                                                 parallelism=1))
        b = run_sequd(space, sphere, SequdConfig(t_max=45, seed=9,
                                                 parallelism=4))
        assert [t.unit for t in a.trials] == [t.unit for t in b.trials]
        assert [t.value for t in a.trials] == [t.value for t in b.trials]

    def test_failed_objective_recorded_not_fatal(self):
        space = SearchSpace.unit_box(2)
        calls = {"n": 0}

        def flaky(cfg):
            calls["n"] += 1
            if calls["n"] % 7 == 0:
                raise RuntimeError("boom")
            return sphere(cfg)

        h = run_sequd(space, flaky, SequdConfig(t_max=45, seed=0))
        statuses = {t.status for t in h.trials}
        assert "failed" in statuses and "ok" in statuses
        assert h.incumbent().status == "ok"

    def test_no_duplicate_evaluations_within_run(self):
        space = SearchSpace.unit_box(2)
        h = run_sequd(space, sphere, SequdConfig(t_max=60, seed=2))
        units = [t.unit for t in h.trials]
        assert len(set(units)) == len(units)

    def test_octopus_reaches_good_region(self):
        fn = lookup("octopus")
        space = SearchSpace.from_bounds(fn.domain)
        cfg = SequdConfig(t_max=100, seed=4,
                          augud=AugudConfig(restarts=3))
        h = run_sequd(space, lambda c: fn(np.array(list(c.values()))), cfg)
        assert h.best_value() > 2.0


class TestRunSeqrand:
    def test_budget_and_convergence(self):
        space = SearchSpace.unit_box(2)
        h = run_seqrand(space, sphere, SequdConfig(t_max=90, seed=0))
        assert len(h) <= 90
        assert h.best_value() > -1e-2

    def test_deterministic(self):
        space = SearchSpace.unit_box(2)
        a = run_seqrand(space, sphere, SequdConfig(t_max=45, seed=3))
        b = run_seqrand(space, sphere, SequdConfig(t_max=45, seed=3))
        assert [t.unit for t in a.trials] == [t.unit for t in b.trials]
