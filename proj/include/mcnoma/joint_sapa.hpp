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

#ifndef MCNOMA_JOINT_SAPA_HPP
#define MCNOMA_JOINT_SAPA_HPP

#include "mcnoma/core_model.hpp"
#include "mcnoma/subchannel_assign.hpp"

#include <vector>

namespace mcnoma
{

struct JointOptions
{
    double tolerance = 1e-9; // relative WSR improvement below which the loop stops
    int max_iterations = 50;
    double master_tolerance = 1e-13; // budget residual, relative to P_max
};

struct JointSolution
{
    Allocation allocation;
    VectorXd p_bars;
    double weighted_sum_rate = 0.0; // with the effective weights, bits/s
    int iterations = 0;             // master updates performed
    std::vector<double> trace;      // weighted sum rate after every subchannel pass
    int monotonicity_violations = 0;
    std::vector<SubchannelSolution> subchannels;
};

// Low-complexity joint subchannel assignment and power allocation.
//
// Starts from an equal split of P_max, then alternates per-subchannel user
// selection with the water-filling budget update until the candidate pairs
// stop changing or the weighted sum rate stalls. The returned allocation
// comes from a final per-subchannel pass at the converged budgets.
JointSolution joint_sapa_lcc(const SystemConfig &config, const ChannelSnapshot &snapshot,
                             const VectorXd &effective_weights, const JointOptions &options = {});

} // namespace mcnoma

#endif
