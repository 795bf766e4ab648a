# SPDX-License-Identifier: Apache-2.0
#
# mcnoma - resource allocation and scheduling for downlink multicarrier NOMA
# Copyright (C) 2026 The mcnoma authors

import math

import numpy as np
import pytest

import mcnoma


def test_two_user_split_matches_grid():
    s = mcnoma.two_user_split(w_psi=2.0, eta_psi=4.0, w_phi=1.0, eta_phi=1.0, bandwidth=1.0, p_bar=10.0)
    assert s.regime == mcnoma.SplitRegime.Interior
    assert s.p_phi == pytest.approx(2.0)
    assert s.p_psi == pytest.approx(8.0)
    assert s.value == pytest.approx(4.029747343394051, rel=1e-12)
    _, grid_value = mcnoma.oracle.two_user(2.0, 1.0, 4.0, 1.0, 1.0, 10.0)
    assert s.value == pytest.approx(grid_value, rel=1e-6)


def test_contradictory_split_has_no_value():
    s = mcnoma.two_user_split(1.0, 4.0, 0.2, 1.0, 1.0, 10.0)
    assert s.regime == mcnoma.SplitRegime.Contradictory
    assert s.value is None


def test_precondition_maps_to_value_error():
    with pytest.raises(mcnoma.PreconditionError):
        mcnoma.two_user_split(1.0, 1.0, 1.0, 2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        mcnoma.two_user_split(1.0, 4.0, 1.0, 1.0, 1.0, -1.0)


def test_hata_reference_values():
    assert mcnoma.hata_path_loss_db(0.3) == pytest.approx(106.95539324749629, rel=1e-12)
    assert mcnoma.hata_path_loss_db(0.03) == pytest.approx(71.73053746591009, rel=1e-12)


def test_joint_solution_is_feasible_and_consistent():
    cfg = mcnoma.SystemConfig.uniform(10, 10, 5e6, 10 ** 1.3)
    fading = mcnoma.FadingConfig()
    placement = mcnoma.UserPlacement.uniform_annulus(10, fading, seed=7)
    snap = mcnoma.draw_snapshot(cfg, fading, placement, seed=8)
    w = np.linspace(0.5, 2.0, 10)
    sol = mcnoma.joint_sapa_lcc(cfg, snap, w)

    assert mcnoma.validate_allocation(cfg, sol.allocation) == []
    assert sol.p_bars.sum() == pytest.approx(cfg.p_max_watts, rel=1e-9)
    assert len(sol.trace) == sol.iterations + 1
    assert all(b >= a - 1e-9 * cfg.total_bandwidth_hz for a, b in zip(sol.trace, sol.trace[1:]))
    rates = mcnoma.compute_rates(cfg, snap, sol.allocation, w)
    assert rates.weighted_sum == pytest.approx(sol.weighted_sum_rate, rel=1e-9)
    assert (sol.allocation.assigned.sum(axis=1) <= cfg.sic_capacity).all()


def test_joint_close_to_oracle_on_small_instance():
    cfg = mcnoma.SystemConfig.uniform(3, 2, 5e6, 10 ** 1.3)
    fading = mcnoma.FadingConfig()
    placement = mcnoma.UserPlacement.uniform_annulus(3, fading, seed=1)
    snap = mcnoma.draw_snapshot(cfg, fading, placement, seed=2)
    w = np.array([1.0, 1.5, 0.7])
    ours = mcnoma.joint_sapa_lcc(cfg, snap, w).weighted_sum_rate
    best, budgets = mcnoma.oracle.joint(cfg, snap, w, power_levels=50)
    assert ours >= 0.95 * best
    assert sum(budgets) == pytest.approx(cfg.p_max_watts)


def test_master_spends_budget():
    snap = mcnoma.ChannelSnapshot.from_ncr(np.array([[4.0, 1.0], [0.5, 2.0], [1.0, 3.0]]))
    cfg = mcnoma.SystemConfig.uniform(2, 3, 3.0, 6.0)
    w = np.array([2.0, 1.0])
    vfs = [
        mcnoma.build_value_function(mcnoma.solve_subchannel(cfg, snap, w, k, 2.0), 1.0)
        for k in range(3)
    ]
    m = mcnoma.solve_master(vfs, 6.0, cfg.p_max_per_subchannel_watts)
    assert m.p_bars.sum() == pytest.approx(6.0, rel=1e-9)
    assert (m.p_bars >= 0).all() and (m.p_bars <= cfg.p_max_per_subchannel_watts + 1e-9).all()


def test_qos_schedule_meets_targets():
    cfg = mcnoma.SystemConfig.uniform(10, 10, 5e6, 10 ** 1.3)
    cfg.qos_min_rate = np.full(10, 2.0)
    fading = mcnoma.FadingConfig()
    fading.seed = 3
    placement = mcnoma.UserPlacement.fixed_spacing(10, 30.0)
    res = mcnoma.schedule(cfg, fading, placement, mode="qos", slots=3000, keep_trace=True)
    assert res.completed and res.slots_run == 3000
    assert len(res.trace) == 3000
    assert (res.average_rates >= 0.9 * 2.0).all()


def test_replay_multiplier_drains_for_user_with_slack():
    cfg = mcnoma.SystemConfig.uniform(2, 1, 1.0, 10.0)
    cfg.qos_min_rate = np.array([0.5, 3.6])
    snap = mcnoma.ChannelSnapshot.from_ncr(np.array([[0.01, 1.0]]))
    res = mcnoma.schedule_replay(cfg, [snap], mode="qos", slots=2000, initial_lambdas=np.array([2.0, 0.0]))
    assert res.final_state.lambdas[0] <= 1e-3
    assert res.final_state.lambdas[1] > 0.0


def test_bad_mode_rejected():
    cfg = mcnoma.SystemConfig.uniform(2, 1, 1.0, 1.0)
    snap = mcnoma.ChannelSnapshot.from_ncr(np.array([[0.5, 1.0]]))
    with pytest.raises(ValueError):
        mcnoma.schedule_replay(cfg, [snap], mode="fastest")
    assert not math.isnan(mcnoma.subchannel_noise_power(cfg))
