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

#ifndef MCNOMA_SUBCHANNEL_ASSIGN_HPP
#define MCNOMA_SUBCHANNEL_ASSIGN_HPP

#include "mcnoma/core_model.hpp"
#include "mcnoma/pairwise_power.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mcnoma
{

// The (last-SIC user, companion) pair a subchannel value is built from.
struct CandidatePair
{
    int last_sic_user = 0;
    std::optional<int> companion;
    WeightedLink last_sic;
    std::optional<WeightedLink> companion_link;

    bool operator==(const CandidatePair &o) const
    {
        return last_sic_user == o.last_sic_user && companion == o.companion;
    }
};

struct SubchannelSolution
{
    CandidatePair candidates;
    double p_phi = 0.0;
    double p_psi = 0.0;
    double value = 0.0; // weighted rate on this subchannel, bits/s
    SplitRegime regime = SplitRegime::BoundaryAllToPhi;
    VectorXd power;          // length N
    std::vector<bool> assigned; // length N, true exactly for positive-power users

    int last_sic_user() const { return candidates.last_sic_user; }
    std::optional<int> companion() const { return candidates.companion; }
};

// Users of subchannel k sorted by NCR descending (weakest first). Exact ties
// keep the lower user index first.
std::vector<int> ncr_descending_order(const ChannelSnapshot &snapshot, int k);

// Highest-weight user among those strictly before phi_position in ncr_order,
// lowest user index on ties; empty when phi_position is 0.
std::optional<int> select_companion(std::span<const double> effective_weights, std::span<const int> ncr_order,
                                    int phi_position);

// Per-subchannel user selection and power split. Each user is tried as the
// last-SIC user with its best companion; the highest finite value wins, with
// ties going to the smaller last-SIC index. p_bar == 0 yields the zero
// allocation with value 0.
SubchannelSolution solve_subchannel(const SystemConfig &config, const ChannelSnapshot &snapshot,
                                    const VectorXd &effective_weights, int k, double p_bar);

} // namespace mcnoma

#endif
