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

#ifndef MCNOMA_CORE_MODEL_HPP
#define MCNOMA_CORE_MODEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace mcnoma
{

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Unit in which QoS targets (and the scheduler's per-user rates) are expressed
enum class RateUnit
{
    BitsPerSecond,
    BitsPerSecondPerHz, // normalized by the total system bandwidth
};

// Static problem data shared by every slot.
//
// Powers are in watts, bandwidths in Hz. Vectors indexed by subchannel have
// length n_subchannels, vectors indexed by user have length n_users.
struct SystemConfig
{
    int n_users = 0;
    int n_subchannels = 0;
    double total_bandwidth_hz = 0.0;
    VectorXd subchannel_bandwidth_hz;    // B_k
    double p_max_watts = 0.0;            // total BS budget
    VectorXd p_max_per_subchannel_watts; // per-subchannel caps
    int sic_capacity = 2;                // max users multiplexed per subchannel
    VectorXd weights;                    // long-run weights w_i
    VectorXd qos_min_rate;               // minimum average rates, in qos_unit
    RateUnit qos_unit = RateUnit::BitsPerSecondPerHz;

    // Equal subchannel split of the band, per-subchannel cap gamma * P_max / K,
    // unit weights and zero QoS targets.
    static SystemConfig uniform(int n_users, int n_subchannels, double total_bandwidth_hz, double p_max_watts,
                                double cap_factor = 1.15, int sic_capacity = 2);

    // Throws StructuralError on shape problems and InfeasibleConfigError when an
    // invariant (M >= 2, sum of caps >= P_max, positive weights/bandwidths) fails.
    void validate() const;

    // Absolute slack used for every power comparison.
    double power_tolerance() const { return 1e-9 * p_max_watts; }

    // Converts a rate in bits/s to qos_unit.
    double to_qos_unit(double rate_bps) const;
};

// Channel state of one slot. Immutable once built; NCR is derived here.
class ChannelSnapshot
{
public:
    ChannelSnapshot() = default;

    // gains and noise_power are K x N. Throws StructuralError on mismatched
    // shapes, zero gains or nonpositive noise.
    ChannelSnapshot(MatrixXcd gains, MatrixXd noise_power);

    // Snapshot with unit gains and noise equal to the given NCR matrix, so that
    // ncr() reproduces the input exactly. Mostly for tests and replay.
    static ChannelSnapshot from_ncr(const MatrixXd &ncr);

    const MatrixXcd &gains() const { return gains_; }
    const MatrixXd &noise_power() const { return noise_power_; }
    const MatrixXd &ncr() const { return ncr_; }

    int n_subchannels() const { return static_cast<int>(ncr_.rows()); }
    int n_users() const { return static_cast<int>(ncr_.cols()); }

private:
    MatrixXcd gains_;
    MatrixXd noise_power_;
    MatrixXd ncr_;
};

// Per-slot decision: power p_{k,i} and assignment q_{k,i}, both K x N.
struct Allocation
{
    MatrixXd power;
    BoolMatrix assigned;

    static Allocation zeros(int n_subchannels, int n_users);
};

struct RateReport
{
    VectorXd per_user_rate;          // R_i in bits/s
    MatrixXd per_subchannel_per_user; // R_{k,i} in bits/s, K x N
    double weighted_sum = 0.0;
};

struct Violation
{
    enum class Kind
    {
        TotalPower,
        SubchannelPower,
        SicCapacity,
        NegativePower,
        PowerWithoutAssignment,
        Shape,
    };

    Kind kind;
    int subchannel = -1; // -1 when not tied to a subchannel
    int user = -1;       // -1 when not tied to a user
    double slack = 0.0;  // amount by which the constraint is exceeded

    std::string describe() const;
};

// True when user a decodes after user b on a subchannel, i.e. a is interfered by b.
// Smaller NCR is stronger; exact ties put the higher index on the stronger side.
inline bool is_stronger(double ncr_b, int b, double ncr_a, int a)
{
    return ncr_b < ncr_a || (ncr_b == ncr_a && b > a);
}

// Achievable rate of every user on subchannel k under SIC, in bits/s.
VectorXd compute_subchannel_rate(const SystemConfig &config, const ChannelSnapshot &snapshot, const Allocation &alloc,
                                 int k);

// Rates over all subchannels. weights defaults to config.weights.
RateReport compute_rates(const SystemConfig &config, const ChannelSnapshot &snapshot, const Allocation &alloc,
                         const std::optional<VectorXd> &weights = std::nullopt);

// Every violated power/assignment constraint with its slack; empty when feasible.
std::vector<Violation> validate_allocation(const SystemConfig &config, const Allocation &alloc);

} // namespace mcnoma

#endif
