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

#ifndef MCNOMA_SUBCHANNEL_POWER_HPP
#define MCNOMA_SUBCHANNEL_POWER_HPP

#include "mcnoma/core_model.hpp"
#include "mcnoma/subchannel_assign.hpp"

#include <span>

namespace mcnoma
{

// Closed-form optimal weighted rate of one subchannel as a function of its
// budget P, for a fixed candidate pair:
//
//   w_psi B log2(1 + P / eta_psi) + c3    if w_phi < w_psi and P >= c4
//   w_phi B log2(1 + P / eta_phi)         otherwise
//
// The function is concave and continuously differentiable; the two branches
// meet with equal value and slope at P = c4, which is where the companion
// starts receiving power.
struct ValueFunction
{
    double w_psi = 0.0;
    double w_phi = 1.0;
    double eta_psi = 0.0;
    double eta_phi = 1.0;
    double bandwidth = 1.0;
    double c3 = 0.0; // offset of the shared branch
    double c4 = 0.0; // breakpoint in P
    double c5 = 0.0; // breakpoint in the water level mu
    bool single_user = true;

    // Two-branch form applies only with a companion of larger weight.
    bool has_breakpoint() const { return !single_user && w_phi < w_psi; }
};

enum class ValueBranch
{
    LastSicOnly, // w_phi branch
    Shared,      // w_psi branch plus c3
};

ValueFunction build_value_function(const CandidatePair &pair, double bandwidth);
ValueFunction build_value_function(const SubchannelSolution &solution, double bandwidth);

// Throws PreconditionError for negative p_bar.
double evaluate_value(const ValueFunction &vf, double p_bar);
double evaluate_derivative(const ValueFunction &vf, double p_bar);

// Evaluates one branch regardless of where p_bar lies; Shared requires a breakpoint.
double evaluate_branch(const ValueFunction &vf, ValueBranch branch, double p_bar);
double evaluate_branch_derivative(const ValueFunction &vf, ValueBranch branch, double p_bar);

// Per-subchannel budgets at water level mu, each clamped to [0, cap_k].
VectorXd waterfill_at(std::span<const ValueFunction> vfs, double mu, const VectorXd &p_max_per_subchannel);

struct MasterSolution
{
    VectorXd p_bars;
    double mu_star = 0.0;
    double total_value = 0.0;
    int bisection_steps = 0;
};

// Splits p_max across subchannels by bisection on the water level so that the
// budgets sum to p_max. Stops when the bracket is within 1e-12 relative or the
// budget residual is within tolerance * p_max.
MasterSolution solve_master(std::span<const ValueFunction> vfs, double p_max, const VectorXd &p_max_per_subchannel,
                            double tolerance = 1e-9);

} // namespace mcnoma

#endif
