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


#ifndef MCNOMA_ORACLE_HPP
#define MCNOMA_ORACLE_HPP

// Brute-force references for small instances. Nothing here calls into the
// solver; the only shared pieces are the configuration and snapshot types.

#include "mcnoma/core_model.hpp"

#include <functional>
#include <vector>

namespace mcnoma::oracle
{

struct TwoUserBest
{
    double p_phi = 0.0;
    double value = 0.0;
};

// Grid search of the two-user weighted rate over p_phi in {0, P/steps, ..., P}.
// phi decodes last; psi is interfered by phi. Requires grid_steps >= 100.
TwoUserBest two_user(double w_psi, double w_phi, double eta_psi, double eta_phi, double bandwidth, double p_bar,
                     int grid_steps = 10000);

// Weighted SIC rate of an explicit power vector on one subchannel, users
// decoded from the largest NCR to the smallest.
double subchannel_weighted_rate(const std::vector<double> &weights, const std::vector<double> &ncr,
                                const std::vector<double> &power, double bandwidth);

// Best total of sum_k f(k, P_k) over the grid P_k = j_k * P_max / levels with
// sum_k j_k = levels and P_k <= cap_k.
struct SimplexBest
{
    std::vector<double> budgets;
    double value = 0.0;
};

SimplexBest simplex_max(int n_subchannels, double p_max, const VectorXd &caps, int levels,
                        const std::function<double(int, double)> &f);

struct JointOptions
{
    int pair_limit = 2;       // largest user subset tried per subchannel
    int power_levels = 200;   // simplex grid P_max / levels
    int split_steps = 1000;   // grid for the split inside a subset, refined locally for pairs
};

struct JointBest
{
    double weighted_sum_rate = 0.0;
    std::vector<double> budgets;
};

// Exhaustive user subsets per subchannel with gridded power. Refuses
// instances with more than 5 users, 3 subchannels or 200 power levels.
JointBest joint(const SystemConfig &config, const ChannelSnapshot &snapshot, const VectorXd &effective_weights,
                const JointOptions &options = {});

} // namespace mcnoma::oracle

#endif
