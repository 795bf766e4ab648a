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

#include "mcnoma/pairwise_power.hpp"
#include "mcnoma/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mcnoma
{

double pair_objective(const WeightedLink &companion, const WeightedLink &last_sic, double bandwidth, double p_psi,
                      double p_phi)
{
    return companion.weight * bandwidth * std::log2(1.0 + p_psi / (p_phi + companion.ncr)) +
           last_sic.weight * bandwidth * std::log2(1.0 + p_phi / last_sic.ncr);
}

PairSplit two_user_split(const WeightedLink &companion, const WeightedLink &last_sic, double bandwidth, double p_bar)
{
    if (!(last_sic.ncr < companion.ncr))
        throw PreconditionError("last-SIC user must have a strictly smaller NCR than its companion");
    if (!(p_bar >= 0.0))
        throw PreconditionError("subchannel budget must be nonnegative");

    const double ratio = last_sic.weight / companion.weight;
    const double c1 = last_sic.ncr / companion.ncr;
    const double c2 = (p_bar + last_sic.ncr) / (p_bar + companion.ncr);

    PairSplit split;
    if (ratio <= c1)
    {
        split.regime = SplitRegime::Contradictory;
        split.p_phi = 0.0;
        split.p_psi = p_bar;
        return split;
    }

    if (ratio > c2)
    {
        split.regime = SplitRegime::BoundaryAllToPhi;
        split.p_phi = p_bar;
    }
    else
    {
        // ratio <= C2 < 1 here, so the denominator is strictly negative
        split.regime = SplitRegime::Interior;
        const double p = (companion.weight * last_sic.ncr - last_sic.weight * companion.ncr) /
                         (last_sic.weight - companion.weight);
        split.p_phi = std::clamp(p, 0.0, p_bar);
    }
    split.p_psi = p_bar - split.p_phi;
    split.value = pair_objective(companion, last_sic, bandwidth, split.p_psi, split.p_phi);
    return split;
}

double single_user_value(const WeightedLink &last_sic, double bandwidth, double p_bar)
{
    return last_sic.weight * bandwidth * std::log2(1.0 + p_bar / last_sic.ncr);
}

} // namespace mcnoma
