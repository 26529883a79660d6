"""Replicator integration and basin-of-attraction values."""

from dataclasses import replace

import numpy as np
import pytest

from helpers import (
    BG_GRID_BASE,
    IPGG_BISTABLE,
    IPGG_STRONG,
    IPGG_WEAK,
    draw_bistable_instance,
)

from pgg_bribery import (
    KnifeEdgeError,
    RngSeed,
    basin_of_cooperation,
    integrate,
    interior_root,
    thresholds,
    with_parameter,
)
from pgg_bribery.montecarlo import generator


class TestIntegrate:
    def test_stays_on_the_empty_boundary(self):
        trajectory = integrate(IPGG_BISTABLE, 0.0)
        assert np.all(trajectory.states == 0.0)
        assert trajectory.converged_to == 0.0

    def test_above_the_separatrix_reaches_full_cooperation(self):
        trajectory = integrate(IPGG_BISTABLE, 0.9)
        assert trajectory.converged_to == 1.0

    def test_below_the_separatrix_reaches_full_defection(self):
        trajectory = integrate(IPGG_BISTABLE, 0.5)
        assert trajectory.converged_to == 0.0

    def test_started_at_the_interior_equilibrium_stays(self):
        x_star = interior_root(IPGG_BISTABLE)
        trajectory = integrate(IPGG_BISTABLE, x_star)
        assert trajectory.converged_to == pytest.approx(x_star, abs=1e-9)
        assert len(trajectory.states) == 1

    def test_trajectories_are_monotone_and_respect_the_separatrix(self):
        rng = generator(RngSeed(314, 0))
        for case in range(20):
            model, x_star = draw_bistable_instance(rng, bribery=case % 2 == 1)
            up = integrate(model, x_star + 0.01, step=0.05, t_max=2e4, record_every=20)
            down = integrate(model, x_star - 0.01, step=0.05, t_max=2e4, record_every=20)
            assert up.converged_to == 1.0
            assert down.converged_to == 0.0
            assert np.all(np.diff(up.states) >= 0)
            assert np.all(np.diff(down.states) <= 0)
            assert np.all(up.states > x_star)
            assert np.all(down.states < x_star)

    def test_record_every_thins_without_changing_the_endpoint(self):
        dense = integrate(IPGG_BISTABLE, 0.9)
        thin = integrate(IPGG_BISTABLE, 0.9, record_every=50)
        assert len(thin.states) < len(dense.states)
        assert thin.final_state == pytest.approx(dense.final_state, abs=1e-12)
        assert thin.converged_to == dense.converged_to

    def test_times_strictly_increase(self):
        trajectory = integrate(IPGG_BISTABLE, 0.9, record_every=7)
        assert np.all(np.diff(trajectory.times) > 0)

    def test_unconverged_run_has_no_label(self):
        trajectory = integrate(IPGG_BISTABLE, 0.5, t_max=0.1)
        assert trajectory.converged_to is None

    @pytest.mark.parametrize(
        "kwargs",
        [dict(x0=1.5), dict(x0=0.5, step=0.0), dict(x0=0.5, t_max=-1), dict(x0=0.5, conv_tol=0.0)],
    )
    def test_precondition_errors(self, kwargs):
        with pytest.raises(ValueError):
            integrate(IPGG_BISTABLE, **kwargs)


class TestBasin:
    def test_defection_dominant_basin_is_empty(self):
        assert basin_of_cooperation(IPGG_WEAK) == 0.0

    def test_bistable_basin_complements_the_root(self):
        basin = basin_of_cooperation(IPGG_BISTABLE)
        assert 0.21 < basin < 0.22
        assert basin == pytest.approx(1.0 - interior_root(IPGG_BISTABLE), abs=1e-15)

    def test_cooperation_dominant_basin_is_everything(self):
        assert basin_of_cooperation(IPGG_STRONG) == 1.0

    def test_degenerate_models_still_report(self):
        inert = replace(IPGG_WEAK, beta=0.0)
        assert basin_of_cooperation(inert) == 0.0
        assert basin_of_cooperation(replace(inert, f=6.0)) == 1.0

    def test_knife_edge_propagates(self):
        edge = with_parameter(BG_GRID_BASE, "f", thresholds(BG_GRID_BASE).f_min)
        with pytest.raises(KnifeEdgeError):
            basin_of_cooperation(edge)
