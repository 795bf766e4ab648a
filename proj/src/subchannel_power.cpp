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

#include "mcnoma/subchannel_power.hpp"
#include "mcnoma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mcnoma
{

ValueFunction build_value_function(const CandidatePair &pair, double bandwidth)
{
    ValueFunction vf;
    vf.bandwidth = bandwidth;
    vf.w_phi = pair.last_sic.weight;
    vf.eta_phi = pair.last_sic.ncr;
    vf.single_user = !pair.companion_link.has_value();
    if (vf.single_user)
        return vf;

    vf.w_psi = pair.companion_link->weight;
    vf.eta_psi = pair.companion_link->ncr;
    if (!vf.has_breakpoint())
        return vf;

    // w_phi < w_psi and, for any admissible pair, eta_phi < eta_psi
    const double dw = vf.w_phi - vf.w_psi;
    const double deta = vf.eta_phi - vf.eta_psi;
    vf.c3 = vf.w_psi * bandwidth * std::log2(dw / deta * vf.eta_psi / vf.w_psi) +
            vf.w_phi * bandwidth * std::log2(deta / dw * vf.w_phi / vf.eta_phi);
    vf.c4 = (vf.w_psi * vf.eta_phi - vf.w_phi * vf.eta_psi) / dw;
    vf.c5 = deta / (bandwidth * dw);
    return vf;
}

ValueFunction build_value_function(const SubchannelSolution &solution, double bandwidth)
{
    return build_value_function(solution.candidates, bandwidth);
}

double evaluate_branch(const ValueFunction &vf, ValueBranch branch, double p_bar)
{
    if (branch == ValueBranch::Shared)
    {
        if (!vf.has_breakpoint())
            throw PreconditionError("value function has no shared branch");
        return vf.w_psi * vf.bandwidth * std::log2(1.0 + p_bar / vf.eta_psi) + vf.c3;
    }
    return vf.w_phi * vf.bandwidth * std::log2(1.0 + p_bar / vf.eta_phi);
}

double evaluate_branch_derivative(const ValueFunction &vf, ValueBranch branch, double p_bar)
{
    if (branch == ValueBranch::Shared)
    {
        if (!vf.has_breakpoint())
            throw PreconditionError("value function has no shared branch");
        return vf.w_psi * vf.bandwidth / ((vf.eta_psi + p_bar) * std::numbers::ln2);
    }
    return vf.w_phi * vf.bandwidth / ((vf.eta_phi + p_bar) * std::numbers::ln2);
}

namespace
{

ValueBranch active_branch(const ValueFunction &vf, double p_bar)
{
    return vf.has_breakpoint() && p_bar >= vf.c4 ? ValueBranch::Shared : ValueBranch::LastSicOnly;
}

} // namespace

double evaluate_value(const ValueFunction &vf, double p_bar)
{
    if (!(p_bar >= 0.0))
        throw PreconditionError("subchannel budget must be nonnegative");
    return evaluate_branch(vf, active_branch(vf, p_bar), p_bar);
}

double evaluate_derivative(const ValueFunction &vf, double p_bar)
{
    if (!(p_bar >= 0.0))
        throw PreconditionError("subchannel budget must be nonnegative");
    return evaluate_branch_derivative(vf, active_branch(vf, p_bar), p_bar);
}

VectorXd waterfill_at(std::span<const ValueFunction> vfs, double mu, const VectorXd &p_max_per_subchannel)
{
    if (static_cast<Eigen::Index>(vfs.size()) != p_max_per_subchannel.size())
        throw StructuralError("one cap per value function is required");

    VectorXd p(static_cast<Eigen::Index>(vfs.size()));
    for (std::size_t k = 0; k < vfs.size(); ++k)
    {
        const ValueFunction &vf = vfs[k];
        const double level = vf.has_breakpoint() && mu > vf.c5 ? mu * vf.w_psi * vf.bandwidth - vf.eta_psi
                                                               : mu * vf.w_phi * vf.bandwidth - vf.eta_phi;
        const auto idx = static_cast<Eigen::Index>(k);
        p(idx) = std::clamp(level, 0.0, p_max_per_subchannel(idx));
    }
    return p;
}

MasterSolution solve_master(std::span<const ValueFunction> vfs, double p_max, const VectorXd &p_max_per_subchannel,
                            double tolerance)
{
    if (vfs.empty())
        throw StructuralError("at least one subchannel is required");
    if (static_cast<Eigen::Index>(vfs.size()) != p_max_per_subchannel.size())
        throw StructuralError("one cap per value function is required");
    if (!(p_max >= 0.0))
        throw PreconditionError("total budget must be nonnegative");
    if (p_max_per_subchannel.sum() < p_max)
        throw PreconditionError("sum of per-subchannel caps is below the total budget");

    MasterSolution sol;
    auto finish = [&](double mu) {
        sol.mu_star = mu;
        sol.p_bars = waterfill_at(vfs, mu, p_max_per_subchannel);
        sol.total_value = 0.0;
        for (std::size_t k = 0; k < vfs.size(); ++k)
            sol.total_value += evaluate_value(vfs[k], sol.p_bars(static_cast<Eigen::Index>(k)));
        return sol;
    };

    if (p_max == 0.0)
        return finish(0.0);

    auto excess = [&](double mu) { return waterfill_at(vfs, mu, p_max_per_subchannel).sum() - p_max; };

    // Any mu at which every active branch reaches min(cap_k, P_max) brackets the root.
    double min_slope = std::numeric_limits<double>::infinity();
    double max_eta = 0.0;
    for (const ValueFunction &vf : vfs)
    {
        double w = vf.w_phi;
        double eta = vf.eta_phi;
        if (!vf.single_user)
        {
            w = std::min(w, vf.w_psi);
            eta = std::max(eta, vf.eta_psi);
        }
        min_slope = std::min(min_slope, w * vf.bandwidth);
        max_eta = std::max(max_eta, eta);
    }
    double mu_hi = (p_max + max_eta) / min_slope;
    int doublings = 0;
    while (excess(mu_hi) < 0.0)
    {
        if (++doublings > 200 || !std::isfinite(mu_hi))
            throw InternalError("could not bracket the water level");
        mu_hi *= 2.0;
    }

    double mu_lo = 0.0;
    const double residual_tol = tolerance * p_max;
    for (int step = 0; step < 200; ++step)
    {
        const double mid = 0.5 * (mu_lo + mu_hi);
        const double f = excess(mid);
        sol.bisection_steps = step + 1;
        if (std::abs(f) <= residual_tol)
            return finish(mid);
        if (f < 0.0)
            mu_lo = mid;
        else
            mu_hi = mid;
        if (mu_hi - mu_lo <= 1e-12 * mu_hi)
            break;
    }
    return finish(0.5 * (mu_lo + mu_hi));
}

} // namespace mcnoma
