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

#include "mcnoma/subchannel_assign.hpp"
#include "mcnoma/errors.hpp"

#include <algorithm>
#include <numeric>

namespace mcnoma
{

std::vector<int> ncr_descending_order(const ChannelSnapshot &snapshot, int k)
{
    const auto eta = snapshot.ncr().row(k);
    std::vector<int> order(static_cast<std::size_t>(snapshot.n_users()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return eta(a) > eta(b) || (eta(a) == eta(b) && a < b); });
    return order;
}

std::optional<int> select_companion(std::span<const double> effective_weights, std::span<const int> ncr_order,
                                    int phi_position)
{
    std::optional<int> best;
    for (int pos = 0; pos < phi_position; ++pos)
    {
        const int user = ncr_order[pos];
        if (!best || effective_weights[user] > effective_weights[*best] ||
            (effective_weights[user] == effective_weights[*best] && user < *best))
            best = user;
    }
    return best;
}

namespace
{

struct Hypothesis
{
    std::optional<double> value;
    double p_phi = 0.0;
    double p_psi = 0.0;
    SplitRegime regime = SplitRegime::BoundaryAllToPhi;
};

Hypothesis evaluate(const WeightedLink &last_sic, const std::optional<WeightedLink> &companion, double bandwidth,
                    double p_bar)
{
    if (!companion)
        return {single_user_value(last_sic, bandwidth, p_bar), p_bar, 0.0, SplitRegime::BoundaryAllToPhi};

    if (companion->ncr == last_sic.ncr)
    {
        // Limit of the closed form as the two NCRs merge: C1 = C2 = 1.
        if (last_sic.weight <= companion->weight)
            return {std::nullopt, 0.0, p_bar, SplitRegime::Contradictory};
        return {single_user_value(last_sic, bandwidth, p_bar), p_bar, 0.0, SplitRegime::BoundaryAllToPhi};
    }

    const PairSplit split = two_user_split(*companion, last_sic, bandwidth, p_bar);
    return {split.value, split.p_phi, split.p_psi, split.regime};
}

} // namespace

SubchannelSolution solve_subchannel(const SystemConfig &config, const ChannelSnapshot &snapshot,
                                    const VectorXd &effective_weights, int k, double p_bar)
{
    if (!(p_bar >= 0.0))
        throw PreconditionError("subchannel budget must be nonnegative");
    if (k < 0 || k >= snapshot.n_subchannels() || k >= config.subchannel_bandwidth_hz.size())
        throw StructuralError("subchannel index out of range");
    const int n = snapshot.n_users();
    if (effective_weights.size() != n)
        throw StructuralError("effective weight vector must have length n_users");

    const auto eta = snapshot.ncr().row(k);
    const double bandwidth = config.subchannel_bandwidth_hz(k);
    const std::vector<int> order = ncr_descending_order(snapshot, k);
    const std::span<const double> weights(effective_weights.data(), static_cast<std::size_t>(n));

    std::optional<SubchannelSolution> best;
    for (int pos = 0; pos < n; ++pos)
    {
        const int phi = order[static_cast<std::size_t>(pos)];
        CandidatePair pair;
        pair.last_sic_user = phi;
        pair.last_sic = {effective_weights(phi), eta(phi)};
        pair.companion = select_companion(weights, order, pos);
        if (pair.companion)
            pair.companion_link = WeightedLink{effective_weights(*pair.companion), eta(*pair.companion)};

        const Hypothesis h = evaluate(pair.last_sic, pair.companion_link, bandwidth, p_bar);
        if (!h.value)
            continue;
        if (best && !(*h.value > best->value || (*h.value == best->value && phi < best->last_sic_user())))
            continue;

        best.emplace();
        best->candidates = pair;
        best->value = *h.value;
        best->p_phi = h.p_phi;
        best->p_psi = h.p_psi;
        best->regime = h.regime;
    }

    if (!best)
    {
        // Unreachable for p_bar >= 0: the weakest user never has a companion.
        throw InternalError("no admissible last-SIC hypothesis on subchannel " + std::to_string(k));
    }

    best->power = VectorXd::Zero(n);
    best->assigned.assign(static_cast<std::size_t>(n), false);
    best->power(best->last_sic_user()) = best->p_phi;
    if (best->companion())
        best->power(*best->companion()) = best->p_psi;
    for (int i = 0; i < n; ++i)
        best->assigned[static_cast<std::size_t>(i)] = best->power(i) > 0.0;
    if (p_bar == 0.0)
        best->value = 0.0;
    return *std::move(best);
}

} // namespace mcnoma
