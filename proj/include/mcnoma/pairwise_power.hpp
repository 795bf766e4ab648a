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

#ifndef MCNOMA_PAIRWISE_POWER_HPP
#define MCNOMA_PAIRWISE_POWER_HPP

#include <optional>

namespace mcnoma
{

// A user as seen by one subchannel: effective weight and noise-to-channel ratio.
struct WeightedLink
{
    double weight = 1.0;
    double ncr = 1.0;
};

enum class SplitRegime
{
    Contradictory,    // last-SIC user would get zero power; hypothesis rejected
    BoundaryAllToPhi, // companion starved, whole budget on the last-SIC user
    Interior,
};

// Optimal split of a subchannel budget between the last-SIC user (phi) and its
// companion (psi). value is empty in the contradictory regime.
struct PairSplit
{
    double p_phi = 0.0;
    double p_psi = 0.0;
    std::optional<double> value;
    SplitRegime regime = SplitRegime::Contradictory;
};

// Closed-form two-user power split. The last-SIC user must have the strictly
// smaller NCR (it decodes last, interference free). The weight ratio
// w_phi / w_psi is compared against
//   C1 = eta_phi / eta_psi                 (ratio <= C1: contradictory)
//   C2 = (P + eta_phi) / (P + eta_psi)     (ratio >  C2: all power to phi)
// and in between phi receives (w_psi eta_phi - w_phi eta_psi) / (w_phi - w_psi).
// Throws PreconditionError if eta_phi >= eta_psi or p_bar < 0.
PairSplit two_user_split(const WeightedLink &companion, const WeightedLink &last_sic, double bandwidth, double p_bar);

// Weighted rate of a lone last-SIC user holding the whole budget.
double single_user_value(const WeightedLink &last_sic, double bandwidth, double p_bar);

// Weighted two-user rate for an explicit split; the companion is interfered by phi.
double pair_objective(const WeightedLink &companion, const WeightedLink &last_sic, double bandwidth, double p_psi,
                      double p_phi);

} // namespace mcnoma

#endif
