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


#include "mcnoma/scheduler.hpp"
#include "mcnoma/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mcnoma
{

SchedulingMode parse_scheduling_mode(const std::string &name)
{
    if (name == "qos")
        return SchedulingMode::Qos;
    if (name == "pf")
        return SchedulingMode::ProportionalFair;
    if (name == "no_qos")
        return SchedulingMode::NoQos;
    throw PreconditionError("unknown scheduling mode '" + name + "', expected qos, pf or no_qos");
}

const char *to_string(SchedulingMode mode)
{
    switch (mode)
    {
    case SchedulingMode::Qos:
        return "qos";
    case SchedulingMode::ProportionalFair:
        return "pf";
    case SchedulingMode::NoQos:
        return "no_qos";
    }
    return "unknown";
}

SchedulerState SchedulerState::initial(const SystemConfig &config, double pf_tau)
{
    if (!(pf_tau >= 1.0))
        throw PreconditionError("PF time constant must be at least 1");
    SchedulerState s;
    s.lambdas = VectorXd::Zero(config.n_users);
    s.cumulative_rates = VectorXd::Zero(config.n_users);
    s.pf_ema = VectorXd::Ones(config.n_users);
    s.pf_tau = pf_tau;
    return s;
}

VectorXd SchedulerState::average_rates() const
{
    const auto done = static_cast<double>(slot - 1);
    if (done <= 0.0)
        return VectorXd::Zero(cumulative_rates.size());
    return cumulative_rates / done;
}

void SchedulerState::check(const SystemConfig &config) const
{
    const Eigen::Index n = config.n_users;
    if (lambdas.size() != n || cumulative_rates.size() != n || pf_ema.size() != n)
        throw StructuralError("scheduler state does not match the number of users");
    if (slot < 1)
        throw StateError("scheduler slot counter must be positive");
    if ((lambdas.array() < 0.0).any())
        throw StateError("Lagrange multipliers must be nonnegative");
}

VectorXd multiplier_update(const VectorXd &lambdas, double zeta, const VectorXd &rates, const VectorXd &targets)
{
    return (lambdas - zeta * (rates - targets)).cwiseMax(0.0);
}

VectorXd ema_update(const VectorXd &ema, double tau, const VectorXd &rates)
{
    const double a = 1.0 / tau;
    return (1.0 - a) * ema + a * rates;
}

std::pair<SlotResult, SchedulerState> schedule_slot(const SystemConfig &config, const SlotChannel &channel,
                                                    const SchedulerState &state, const SchedulerOptions &options)
{
    state.check(config);
    const Eigen::Index n = config.n_users;
    const VectorXd targets = config.qos_min_rate.size() == n ? config.qos_min_rate : VectorXd::Zero(n);

    SlotResult result;
    result.slot = state.slot;
    switch (options.mode)
    {
    case SchedulingMode::Qos:
        result.effective_weights = config.weights + state.lambdas;
        break;
    case SchedulingMode::NoQos:
        result.effective_weights = config.weights;
        break;
    case SchedulingMode::ProportionalFair:
        if (!state.pf_initialized)
        {
            result.effective_weights = config.weights;
        }
        else
        {
            if (!(state.pf_ema.array() > 0.0).all())
                throw StateError("PF moving average must be strictly positive");
            result.effective_weights = state.pf_ema.cwiseInverse();
        }
        break;
    }

    const JointSolution plan = joint_sapa_lcc(config, channel.planning, result.effective_weights, options.joint);
    result.allocation = plan.allocation;
    result.weighted_sum_rate = plan.weighted_sum_rate;
    result.rates = compute_rates(config, channel.actual, result.allocation, result.effective_weights);
    result.rates_qos_unit = result.rates.per_user_rate.unaryExpr([&](double r) { return config.to_qos_unit(r); });

    SchedulerState next = state;
    next.cumulative_rates += result.rates_qos_unit;
    switch (options.mode)
    {
    case SchedulingMode::Qos: {
        const double zeta = options.step_size(state.slot);
        if (!(zeta >= 0.0) || !std::isfinite(zeta))
            throw PreconditionError("step size must be finite and nonnegative");
        next.lambdas = multiplier_update(state.lambdas, zeta, result.rates_qos_unit, targets);
        break;
    }
    case SchedulingMode::NoQos:
        next.lambdas.setZero();
        break;
    case SchedulingMode::ProportionalFair:
        if (!state.pf_initialized)
        {
            next.pf_ema = result.rates_qos_unit.cwiseMax(options.pf_floor);
            next.pf_initialized = true;
        }
        else
        {
            next.pf_ema = ema_update(state.pf_ema, state.pf_tau, result.rates_qos_unit).cwiseMax(options.pf_floor);
        }
        break;
    }
    ++next.slot;
    result.lambdas = next.lambdas;
    return {std::move(result), std::move(next)};
}

HorizonResult run_horizon(const SystemConfig &config, ChannelSource &source, const SchedulerState &state,
                          const SchedulerOptions &options, std::int64_t n_slots, bool keep_trace,
                          const SlotObserver &observer)
{
    if (n_slots < 1)
        throw PreconditionError("horizon must contain at least one slot");
    state.check(config);

    HorizonResult out;
    out.final_state = state;
    VectorXd horizon_sum = VectorXd::Zero(config.n_users);
    out.max_lambda = state.lambdas.size() > 0 ? state.lambdas.maxCoeff() : 0.0;
    for (std::int64_t t = 0; t < n_slots; ++t)
    {
        std::optional<SlotChannel> channel = source.next();
        if (!channel)
            break;
        auto [slot, next] = schedule_slot(config, *channel, out.final_state, options);
        out.final_state = std::move(next);
        horizon_sum += slot.rates_qos_unit;
        ++out.slots_run;
        if (slot.lambdas.size() > 0)
            out.max_lambda = std::max(out.max_lambda, slot.lambdas.maxCoeff());
        if (keep_trace)
            out.trace.push_back({slot.slot, slot.rates_qos_unit, slot.lambdas, slot.effective_weights});
        if (observer)
            observer(slot);
    }
    out.completed = out.slots_run == n_slots;
    out.average_rates = out.slots_run > 0 ? VectorXd(horizon_sum / static_cast<double>(out.slots_run))
                                          : VectorXd::Zero(config.n_users);
    return out;
}

} // namespace mcnoma
