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

#include "mcnoma/joint_sapa.hpp"
#include "mcnoma/errors.hpp"
#include "mcnoma/subchannel_power.hpp"

#include <cmath>

namespace mcnoma
{

namespace
{

struct Pass
{
    std::vector<SubchannelSolution> solutions;
    double value = 0.0;
};

Pass solve_all(const SystemConfig &config, const ChannelSnapshot &snapshot, const VectorXd &weights,
               const VectorXd &p_bars)
{
    Pass pass;
    pass.solutions.reserve(static_cast<std::size_t>(config.n_subchannels));
    for (int k = 0; k < config.n_subchannels; ++k)
    {
        pass.solutions.push_back(solve_subchannel(config, snapshot, weights, k, p_bars(k)));
        pass.value += pass.solutions.back().value;
    }
    return pass;
}

bool same_candidates(const Pass &a, const Pass &b)
{
    for (std::size_t k = 0; k < a.solutions.size(); ++k)
    {
        if (!(a.solutions[k].candidates == b.solutions[k].candidates))
            return false;
    }
    return true;
}

} // namespace

JointSolution joint_sapa_lcc(const SystemConfig &config, const ChannelSnapshot &snapshot,
                             const VectorXd &effective_weights, const JointOptions &options)
{
    config.validate();
    if (snapshot.n_subchannels() != config.n_subchannels || snapshot.n_users() != config.n_users)
        throw StructuralError("snapshot dimensions do not match the configuration");
    if (effective_weights.size() != config.n_users)
        throw StructuralError("effective weight vector must have length n_users");
    if (!(effective_weights.array() > 0.0).all() || !effective_weights.allFinite())
        throw PreconditionError("effective weights must be finite and strictly positive");

    const int kk = config.n_subchannels;
    JointSolution out;
    out.p_bars = VectorXd::Constant(kk, config.p_max_watts / kk);

    Pass pass = solve_all(config, snapshot, effective_weights, out.p_bars);
    out.trace.push_back(pass.value);

    std::vector<ValueFunction> vfs(static_cast<std::size_t>(kk));
    while (out.iterations < options.max_iterations)
    {
        for (int k = 0; k < kk; ++k)
            vfs[static_cast<std::size_t>(k)] =
                build_value_function(pass.solutions[static_cast<std::size_t>(k)], config.subchannel_bandwidth_hz(k));
        const MasterSolution master =
            solve_master(vfs, config.p_max_watts, config.p_max_per_subchannel_watts, options.master_tolerance);
        out.p_bars = master.p_bars;
        ++out.iterations;

        Pass next = solve_all(config, snapshot, effective_weights, out.p_bars);
        const double previous = pass.value;
        out.trace.push_back(next.value);
        if (next.value < previous - 1e-9 * std::max(1.0, std::abs(previous)))
            ++out.monotonicity_violations;

        // Unchanged pairs rebuild identical value functions, so the budgets are a fixed point.
        const bool fixed_point = same_candidates(pass, next);
        const bool stalled = next.value - previous <= options.tolerance * std::abs(previous);
        pass = std::move(next);
        if (fixed_point || stalled)
            break;
    }

    out.allocation = Allocation::zeros(kk, config.n_users);
    for (int k = 0; k < kk; ++k)
    {
        const SubchannelSolution &s = pass.solutions[static_cast<std::size_t>(k)];
        out.allocation.power.row(k) = s.power.transpose();
        for (int i = 0; i < config.n_users; ++i)
            out.allocation.assigned(k, i) = s.assigned[static_cast<std::size_t>(i)];
    }
    out.weighted_sum_rate = pass.value;
    out.subchannels = std::move(pass.solutions);
    return out;
}

} // namespace mcnoma
