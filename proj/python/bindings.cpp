// SPDX-License-Identifier: Apache-2.0
//
// mcnoma - resource allocation and scheduling for downlink multicarrier NOMA
// Copyright (C) 2026 The mcnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "mcnoma/channel_sim.hpp"
#include "mcnoma/core_model.hpp"
#include "mcnoma/errors.hpp"
#include "mcnoma/joint_sapa.hpp"
#include "mcnoma/oracle.hpp"
#include "mcnoma/pairwise_power.hpp"
#include "mcnoma/scheduler.hpp"
#include "mcnoma/subchannel_assign.hpp"
#include "mcnoma/subchannel_power.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mcnoma;

namespace
{

Allocation make_allocation(const MatrixXd &power, const BoolMatrix &assigned)
{
    return Allocation{power, assigned};
}

HorizonResult run_schedule(const SystemConfig &config, ChannelSource &source, const std::string &mode,
                           std::int64_t slots, double pf_tau, bool keep_trace, const std::optional<VectorXd> &lambdas)
{
    SchedulerState state = SchedulerState::initial(config, pf_tau);
    if (lambdas)
        state.lambdas = *lambdas;
    SchedulerOptions options;
    options.mode = parse_scheduling_mode(mode);
    py::gil_scoped_release release;
    return run_horizon(config, source, state, options, slots, keep_trace);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Resource allocation and scheduling for downlink multicarrier NOMA";

    static py::exception<PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
    static py::exception<StructuralError> structural(m, "StructuralError", PyExc_ValueError);
    static py::exception<InfeasibleConfigError> infeasible(m, "InfeasibleConfigError", PyExc_ValueError);
    static py::exception<StateError> state_error(m, "StateError", PyExc_RuntimeError);
    static py::exception<InternalError> internal(m, "InternalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const PreconditionError &e)
        {
            PyErr_SetString(precondition.ptr(), e.what());
        }
        catch (const StructuralError &e)
        {
            PyErr_SetString(structural.ptr(), e.what());
        }
        catch (const InfeasibleConfigError &e)
        {
            PyErr_SetString(infeasible.ptr(), e.what());
        }
        catch (const StateError &e)
        {
            PyErr_SetString(state_error.ptr(), e.what());
        }
        catch (const InternalError &e)
        {
            PyErr_SetString(internal.ptr(), e.what());
        }
    });

    py::enum_<RateUnit>(m, "RateUnit")
        .value("BitsPerSecond", RateUnit::BitsPerSecond)
        .value("BitsPerSecondPerHz", RateUnit::BitsPerSecondPerHz);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_static("uniform", &SystemConfig::uniform, py::arg("n_users"), py::arg("n_subchannels"),
                    py::arg("total_bandwidth_hz"), py::arg("p_max_watts"), py::arg("cap_factor") = 1.15,
                    py::arg("sic_capacity") = 2)
        .def_readwrite("n_users", &SystemConfig::n_users)
        .def_readwrite("n_subchannels", &SystemConfig::n_subchannels)
        .def_readwrite("total_bandwidth_hz", &SystemConfig::total_bandwidth_hz)
        .def_readwrite("subchannel_bandwidth_hz", &SystemConfig::subchannel_bandwidth_hz)
        .def_readwrite("p_max_watts", &SystemConfig::p_max_watts)
        .def_readwrite("p_max_per_subchannel_watts", &SystemConfig::p_max_per_subchannel_watts)
        .def_readwrite("sic_capacity", &SystemConfig::sic_capacity)
        .def_readwrite("weights", &SystemConfig::weights)
        .def_readwrite("qos_min_rate", &SystemConfig::qos_min_rate)
        .def_readwrite("qos_unit", &SystemConfig::qos_unit)
        .def("validate", &SystemConfig::validate);

    py::class_<ChannelSnapshot>(m, "ChannelSnapshot")
        .def(py::init<MatrixXcd, MatrixXd>(), py::arg("gains"), py::arg("noise_power"))
        .def_static("from_ncr", &ChannelSnapshot::from_ncr, py::arg("ncr"))
        .def_property_readonly("gains", &ChannelSnapshot::gains)
        .def_property_readonly("noise_power", &ChannelSnapshot::noise_power)
        .def_property_readonly("ncr", &ChannelSnapshot::ncr)
        .def_property_readonly("n_subchannels", &ChannelSnapshot::n_subchannels)
        .def_property_readonly("n_users", &ChannelSnapshot::n_users);

    py::class_<Allocation>(m, "Allocation")
        .def(py::init(&make_allocation), py::arg("power"), py::arg("assigned"))
        .def_static("zeros", &Allocation::zeros)
        .def_readwrite("power", &Allocation::power)
        .def_readwrite("assigned", &Allocation::assigned);

    py::class_<RateReport>(m, "RateReport")
        .def_readonly("per_user_rate", &RateReport::per_user_rate)
        .def_readonly("per_subchannel_per_user", &RateReport::per_subchannel_per_user)
        .def_readonly("weighted_sum", &RateReport::weighted_sum);

    m.def("compute_rates", &compute_rates, py::arg("config"), py::arg("snapshot"), py::arg("allocation"),
          py::arg("weights") = std::nullopt);
    m.def(
        "validate_allocation",
        [](const SystemConfig &config, const Allocation &alloc) {
            std::vector<std::string> out;
            for (const Violation &v : validate_allocation(config, alloc))
                out.push_back(v.describe());
            return out;
        },
        py::arg("config"), py::arg("allocation"));

    py::enum_<SplitRegime>(m, "SplitRegime")
        .value("Contradictory", SplitRegime::Contradictory)
        .value("BoundaryAllToPhi", SplitRegime::BoundaryAllToPhi)
        .value("Interior", SplitRegime::Interior);

    py::class_<PairSplit>(m, "PairSplit")
        .def_readonly("p_phi", &PairSplit::p_phi)
        .def_readonly("p_psi", &PairSplit::p_psi)
        .def_readonly("value", &PairSplit::value)
        .def_readonly("regime", &PairSplit::regime);

    m.def(
        "two_user_split",
        [](double w_psi, double eta_psi, double w_phi, double eta_phi, double bandwidth, double p_bar) {
            return two_user_split({w_psi, eta_psi}, {w_phi, eta_phi}, bandwidth, p_bar);
        },
        py::arg("w_psi"), py::arg("eta_psi"), py::arg("w_phi"), py::arg("eta_phi"), py::arg("bandwidth"),
        py::arg("p_bar"));

    py::class_<SubchannelSolution>(m, "SubchannelSolution")
        .def_property_readonly("last_sic_user", &SubchannelSolution::last_sic_user)
        .def_property_readonly("companion", &SubchannelSolution::companion)
        .def_readonly("p_phi", &SubchannelSolution::p_phi)
        .def_readonly("p_psi", &SubchannelSolution::p_psi)
        .def_readonly("value", &SubchannelSolution::value)
        .def_readonly("regime", &SubchannelSolution::regime)
        .def_readonly("power", &SubchannelSolution::power)
        .def_readonly("assigned", &SubchannelSolution::assigned);

    m.def("solve_subchannel", &solve_subchannel, py::arg("config"), py::arg("snapshot"), py::arg("weights"),
          py::arg("k"), py::arg("p_bar"));

    py::class_<ValueFunction>(m, "ValueFunction")
        .def_readonly("w_psi", &ValueFunction::w_psi)
        .def_readonly("w_phi", &ValueFunction::w_phi)
        .def_readonly("eta_psi", &ValueFunction::eta_psi)
        .def_readonly("eta_phi", &ValueFunction::eta_phi)
        .def_readonly("bandwidth", &ValueFunction::bandwidth)
        .def_readonly("c3", &ValueFunction::c3)
        .def_readonly("c4", &ValueFunction::c4)
        .def_readonly("c5", &ValueFunction::c5)
        .def_readonly("single_user", &ValueFunction::single_user)
        .def("__call__", &evaluate_value, py::arg("p_bar"))
        .def("derivative", &evaluate_derivative, py::arg("p_bar"));

    m.def(
        "build_value_function",
        [](const SubchannelSolution &s, double bandwidth) { return build_value_function(s, bandwidth); },
        py::arg("solution"), py::arg("bandwidth"));

    py::class_<MasterSolution>(m, "MasterSolution")
        .def_readonly("p_bars", &MasterSolution::p_bars)
        .def_readonly("mu_star", &MasterSolution::mu_star)
        .def_readonly("total_value", &MasterSolution::total_value)
        .def_readonly("bisection_steps", &MasterSolution::bisection_steps);

    m.def(
        "solve_master",
        [](const std::vector<ValueFunction> &vfs, double p_max, const VectorXd &caps, double tolerance) {
            return solve_master(vfs, p_max, caps, tolerance);
        },
        py::arg("value_functions"), py::arg("p_max"), py::arg("caps"), py::arg("tolerance") = 1e-9);

    py::class_<JointOptions>(m, "JointOptions")
        .def(py::init<>())
        .def_readwrite("tolerance", &JointOptions::tolerance)
        .def_readwrite("max_iterations", &JointOptions::max_iterations)
        .def_readwrite("master_tolerance", &JointOptions::master_tolerance);

    py::class_<JointSolution>(m, "JointSolution")
        .def_readonly("allocation", &JointSolution::allocation)
        .def_readonly("p_bars", &JointSolution::p_bars)
        .def_readonly("weighted_sum_rate", &JointSolution::weighted_sum_rate)
        .def_readonly("iterations", &JointSolution::iterations)
        .def_readonly("trace", &JointSolution::trace)
        .def_readonly("monotonicity_violations", &JointSolution::monotonicity_violations)
        .def_readonly("subchannels", &JointSolution::subchannels);

    m.def("joint_sapa_lcc", &joint_sapa_lcc, py::arg("config"), py::arg("snapshot"), py::arg("weights"),
          py::arg("options") = JointOptions{});

    py::class_<FadingConfig>(m, "FadingConfig")
        .def(py::init<>())
        .def_readwrite("carrier_freq_mhz", &FadingConfig::carrier_freq_mhz)
        .def_readwrite("bs_antenna_height_m", &FadingConfig::bs_antenna_height_m)
        .def_readwrite("user_antenna_height_m", &FadingConfig::user_antenna_height_m)
        .def_readwrite("bs_antenna_gain_db", &FadingConfig::bs_antenna_gain_db)
        .def_readwrite("user_antenna_gain_db", &FadingConfig::user_antenna_gain_db)
        .def_readwrite("shadowing_std_db", &FadingConfig::shadowing_std_db)
        .def_readwrite("noise_psd_dbm_per_hz", &FadingConfig::noise_psd_dbm_per_hz)
        .def_readwrite("cell_radius_m", &FadingConfig::cell_radius_m)
        .def_readwrite("min_distance_m", &FadingConfig::min_distance_m)
        .def_readwrite("csi_error_variance", &FadingConfig::csi_error_variance)
        .def_readwrite("small_scale_fading", &FadingConfig::small_scale_fading)
        .def_readwrite("redraw_shadowing_per_slot", &FadingConfig::redraw_shadowing_per_slot)
        .def_readwrite("seed", &FadingConfig::seed);

    py::class_<UserPlacement>(m, "UserPlacement")
        .def(py::init([](const VectorXd &d) { return UserPlacement{d}; }), py::arg("distances_m"))
        .def_static("fixed_spacing", &UserPlacement::fixed_spacing, py::arg("n_users"), py::arg("spacing_m"))
        .def_static(
            "uniform_annulus",
            [](int n, const FadingConfig &f, std::uint64_t seed) {
                Rng rng(seed);
                return UserPlacement::uniform_annulus(n, f, rng);
            },
            py::arg("n_users"), py::arg("fading"), py::arg("seed"))
        .def_readwrite("distances_m", &UserPlacement::distances_m);

    m.def("hata_path_loss_db", &hata_path_loss_db, py::arg("distance_km"), py::arg("fading") = FadingConfig{});
    m.def("mean_channel_gain", &mean_channel_gain, py::arg("distance_m"), py::arg("fading") = FadingConfig{});
    m.def("subchannel_noise_power", &subchannel_noise_power, py::arg("config"), py::arg("fading") = FadingConfig{});
    m.def(
        "draw_snapshot",
        [](const SystemConfig &c, const FadingConfig &f, const UserPlacement &p, std::uint64_t seed) {
            Rng rng(seed);
            return draw_snapshot(c, f, p, rng);
        },
        py::arg("config"), py::arg("fading"), py::arg("placement"), py::arg("seed"));
    m.def(
        "perturb_csi",
        [](const ChannelSnapshot &s, const UserPlacement &p, const FadingConfig &f, double variance,
           std::uint64_t seed) {
            Rng rng(seed);
            return perturb_csi(s, p, f, variance, rng);
        },
        py::arg("snapshot"), py::arg("placement"), py::arg("fading"), py::arg("csi_error_variance"), py::arg("seed"));

    py::class_<SchedulerState>(m, "SchedulerState")
        .def_readonly("lambdas", &SchedulerState::lambdas)
        .def_readonly("slot", &SchedulerState::slot)
        .def_readonly("pf_ema", &SchedulerState::pf_ema)
        .def("average_rates", &SchedulerState::average_rates);

    py::class_<SlotTrace>(m, "SlotTrace")
        .def_readonly("slot", &SlotTrace::slot)
        .def_readonly("rates", &SlotTrace::rates)
        .def_readonly("lambdas", &SlotTrace::lambdas)
        .def_readonly("effective_weights", &SlotTrace::effective_weights);

    py::class_<HorizonResult>(m, "HorizonResult")
        .def_readonly("slots_run", &HorizonResult::slots_run)
        .def_readonly("completed", &HorizonResult::completed)
        .def_readonly("average_rates", &HorizonResult::average_rates)
        .def_readonly("final_state", &HorizonResult::final_state)
        .def_readonly("max_lambda", &HorizonResult::max_lambda)
        .def_readonly("trace", &HorizonResult::trace);

    m.def(
        "schedule",
        [](const SystemConfig &config, const FadingConfig &fading, const UserPlacement &placement,
           const std::string &mode, std::int64_t slots, double pf_tau, bool keep_trace,
           const std::optional<VectorXd> &lambdas) {
            FadingChannelSource source(config, fading, placement);
            return run_schedule(config, source, mode, slots, pf_tau, keep_trace, lambdas);
        },
        py::arg("config"), py::arg("fading"), py::arg("placement"), py::arg("mode") = "qos", py::arg("slots") = 1000,
        py::arg("pf_tau") = 1000.0, py::arg("keep_trace") = false, py::arg("initial_lambdas") = std::nullopt);
    m.def(
        "schedule_replay",
        [](const SystemConfig &config, const std::vector<ChannelSnapshot> &snapshots, const std::string &mode,
           std::int64_t slots, double pf_tau, bool keep_trace, const std::optional<VectorXd> &lambdas) {
            ReplayChannelSource source(snapshots, true);
            return run_schedule(config, source, mode, slots, pf_tau, keep_trace, lambdas);
        },
        py::arg("config"), py::arg("snapshots"), py::arg("mode") = "qos", py::arg("slots") = 1000,
        py::arg("pf_tau") = 1000.0, py::arg("keep_trace") = false, py::arg("initial_lambdas") = std::nullopt);

    py::module_ orc = m.def_submodule("oracle", "Brute-force reference solvers for small instances");
    orc.def(
        "two_user",
        [](double w_psi, double w_phi, double eta_psi, double eta_phi, double bandwidth, double p_bar, int steps) {
            const auto best = oracle::two_user(w_psi, w_phi, eta_psi, eta_phi, bandwidth, p_bar, steps);
            return py::make_tuple(best.p_phi, best.value);
        },
        py::arg("w_psi"), py::arg("w_phi"), py::arg("eta_psi"), py::arg("eta_phi"), py::arg("bandwidth"),
        py::arg("p_bar"), py::arg("grid_steps") = 10000);
    orc.def(
        "joint",
        [](const SystemConfig &config, const ChannelSnapshot &snapshot, const VectorXd &weights, int pair_limit,
           int power_levels, int split_steps) {
            const auto best = oracle::joint(config, snapshot, weights, {pair_limit, power_levels, split_steps});
            return py::make_tuple(best.weighted_sum_rate, best.budgets);
        },
        py::arg("config"), py::arg("snapshot"), py::arg("weights"), py::arg("pair_limit") = 2,
        py::arg("power_levels") = 200, py::arg("split_steps") = 1000);
}
