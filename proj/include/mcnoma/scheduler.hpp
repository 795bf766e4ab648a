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


#ifndef MCNOMA_SCHEDULER_HPP
#define MCNOMA_SCHEDULER_HPP

#include "mcnoma/channel_sim.hpp"
#include "mcnoma/core_model.hpp"
#include "mcnoma/joint_sapa.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mcnoma
{

enum class SchedulingMode
{
    Qos,              // weights w_i + lambda_i, subgradient multiplier update
    ProportionalFair, // weights 1 / R_EMA
    NoQos,            // weights w_i, multipliers frozen at zero
};

// Parses "qos", "pf" and "no_qos"; throws PreconditionError otherwise.
SchedulingMode parse_scheduling_mode(const std::string &name);
const char *to_string(SchedulingMode mode);

// Rates, averages and multipliers are all expressed in config.qos_unit.
struct SchedulerState
{
    VectorXd lambdas;
    std::int64_t slot = 1; // index of the next slot to be scheduled
    VectorXd cumulative_rates;
    VectorXd pf_ema;
    double pf_tau = 1000.0;
    bool pf_initialized = false; // EMA is bootstrapped from the first PF slot

    static SchedulerState initial(const SystemConfig &config, double pf_tau = 1000.0);

    // Running per-user averages over the slots scheduled so far.
    VectorXd average_rates() const;

    // Throws StructuralError when the vectors do not have length n_users.
    void check(const SystemConfig &config) const;
};

using StepSize = std::function<double(std::int64_t)>;

struct SchedulerOptions
{
    SchedulingMode mode = SchedulingMode::Qos;
    StepSize step_size = [](std::int64_t t) { return 1.0 / static_cast<double>(t); };
    JointOptions joint;
    double pf_floor = 1e-6;
};

struct SlotResult
{
    std::int64_t slot = 0;
    Allocation allocation;
    RateReport rates;        // on the true channel, bits/s
    VectorXd rates_qos_unit; // the same rates in config.qos_unit
    VectorXd effective_weights;
    VectorXd lambdas; // after the update
    double weighted_sum_rate = 0.0; // planned, with the effective weights
};

// One step of the online scheduler: plan on channel.planning, score on
// channel.actual, update multipliers or EMA, advance the slot counter.
std::pair<SlotResult, SchedulerState> schedule_slot(const SystemConfig &config, const SlotChannel &channel,
                                                    const SchedulerState &state, const SchedulerOptions &options);

// Projected subgradient step [lambda - zeta (rate - target)]^+.
VectorXd multiplier_update(const VectorXd &lambdas, double zeta, const VectorXd &rates, const VectorXd &targets);

// R_EMA' = (1 - 1/tau) R_EMA + (1/tau) R.
VectorXd ema_update(const VectorXd &ema, double tau, const VectorXd &rates);

struct SlotTrace
{
    std::int64_t slot = 0;
    VectorXd rates;
    VectorXd lambdas;
    VectorXd effective_weights;
};

struct HorizonResult
{
    std::int64_t slots_run = 0;
    bool completed = false; // false when the channel source ran out first
    VectorXd average_rates;  // qos unit, cumulative / slots_run
    SchedulerState final_state;
    double max_lambda = 0.0; // largest multiplier seen, grows without bound for infeasible targets
    std::vector<SlotTrace> trace;
};

using SlotObserver = std::function<void(const SlotResult &)>;

HorizonResult run_horizon(const SystemConfig &config, ChannelSource &source, const SchedulerState &state,
                          const SchedulerOptions &options, std::int64_t n_slots, bool keep_trace = false,
                          const SlotObserver &observer = {});

} // namespace mcnoma

#endif
