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

#include "mcnoma/core_model.hpp"
#include "mcnoma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mcnoma
{

SystemConfig SystemConfig::uniform(int n_users, int n_subchannels, double total_bandwidth_hz, double p_max_watts,
                                   double cap_factor, int sic_capacity)
{
    if (n_users <= 0 || n_subchannels <= 0)
        throw StructuralError("user and subchannel counts must be positive");

    SystemConfig cfg;
    cfg.n_users = n_users;
    cfg.n_subchannels = n_subchannels;
    cfg.total_bandwidth_hz = total_bandwidth_hz;
    cfg.subchannel_bandwidth_hz = VectorXd::Constant(n_subchannels, total_bandwidth_hz / n_subchannels);
    cfg.p_max_watts = p_max_watts;
    cfg.p_max_per_subchannel_watts = VectorXd::Constant(n_subchannels, cap_factor * p_max_watts / n_subchannels);
    cfg.sic_capacity = sic_capacity;
    cfg.weights = VectorXd::Ones(n_users);
    cfg.qos_min_rate = VectorXd::Zero(n_users);
    return cfg;
}

void SystemConfig::validate() const
{
    if (n_users <= 0 || n_subchannels <= 0)
        throw StructuralError("n_users and n_subchannels must be positive");
    if (subchannel_bandwidth_hz.size() != n_subchannels || p_max_per_subchannel_watts.size() != n_subchannels)
        throw StructuralError("per-subchannel vectors must have length n_subchannels");
    if (weights.size() != n_users || qos_min_rate.size() != n_users)
        throw StructuralError("per-user vectors must have length n_users");

    if (!(total_bandwidth_hz > 0.0) || !(subchannel_bandwidth_hz.array() > 0.0).all())
        throw InfeasibleConfigError("bandwidths must be strictly positive");
    if (!(p_max_watts > 0.0) || !(p_max_per_subchannel_watts.array() > 0.0).all())
        throw InfeasibleConfigError("power budgets must be strictly positive");
    if (sic_capacity < 2)
        throw InfeasibleConfigError("sic_capacity must be at least 2, got " + std::to_string(sic_capacity));
    if (!(weights.array() > 0.0).all())
        throw InfeasibleConfigError("weights must be strictly positive");
    if (!(qos_min_rate.array() >= 0.0).all())
        throw InfeasibleConfigError("QoS targets must be nonnegative");
    if (p_max_per_subchannel_watts.sum() < p_max_watts)
    {
        std::ostringstream os;
        os << "sum of per-subchannel caps (" << p_max_per_subchannel_watts.sum() << " W) is below P_max ("
           << p_max_watts << " W)";
        throw InfeasibleConfigError(os.str());
    }
}

double SystemConfig::to_qos_unit(double rate_bps) const
{
    return qos_unit == RateUnit::BitsPerSecondPerHz ? rate_bps / total_bandwidth_hz : rate_bps;
}

ChannelSnapshot::ChannelSnapshot(MatrixXcd gains, MatrixXd noise_power)
    : gains_(std::move(gains)), noise_power_(std::move(noise_power))
{
    if (gains_.rows() != noise_power_.rows() || gains_.cols() != noise_power_.cols())
        throw StructuralError("gains and noise_power must have the same K x N shape");
    if (gains_.size() == 0)
        throw StructuralError("snapshot must have at least one subchannel and one user");

    ncr_.resize(gains_.rows(), gains_.cols());
    for (Eigen::Index k = 0; k < gains_.rows(); ++k)
    {
        for (Eigen::Index i = 0; i < gains_.cols(); ++i)
        {
            const double g2 = std::norm(gains_(k, i));
            const double noise = noise_power_(k, i);
            if (!(noise > 0.0) || !std::isfinite(noise))
                throw StructuralError("noise power must be finite and positive");
            if (!(g2 > 0.0) || !std::isfinite(g2))
                throw StructuralError("channel gains must be finite and nonzero");
            const double eta = noise / g2;
            if (!(eta > 0.0) || !std::isfinite(eta))
                throw StructuralError("noise-to-channel ratio is not finite and positive");
            ncr_(k, i) = eta;
        }
    }
}

ChannelSnapshot ChannelSnapshot::from_ncr(const MatrixXd &ncr)
{
    return ChannelSnapshot(MatrixXcd::Ones(ncr.rows(), ncr.cols()), ncr);
}

Allocation Allocation::zeros(int n_subchannels, int n_users)
{
    return {MatrixXd::Zero(n_subchannels, n_users), BoolMatrix::Constant(n_subchannels, n_users, false)};
}

std::string Violation::describe() const
{
    std::ostringstream os;
    switch (kind)
    {
    case Kind::TotalPower:
        os << "total power exceeds P_max";
        break;
    case Kind::SubchannelPower:
        os << "subchannel " << subchannel << " power exceeds its cap";
        break;
    case Kind::SicCapacity:
        os << "subchannel " << subchannel << " has more assigned users than the SIC capacity";
        break;
    case Kind::NegativePower:
        os << "negative power on subchannel " << subchannel << " for user " << user;
        break;
    case Kind::PowerWithoutAssignment:
        os << "user " << user << " has power on subchannel " << subchannel << " without being assigned";
        break;
    case Kind::Shape:
        os << "allocation shape does not match the configuration";
        break;
    }
    os << " (slack " << slack << ")";
    return os.str();
}

namespace
{

void check_shapes(const SystemConfig &config, const ChannelSnapshot &snapshot, const Allocation &alloc)
{
    const auto k = config.n_subchannels;
    const auto n = config.n_users;
    if (snapshot.n_subchannels() != k || snapshot.n_users() != n)
        throw StructuralError("snapshot dimensions do not match the configuration");
    if (alloc.power.rows() != k || alloc.power.cols() != n || alloc.assigned.rows() != k || alloc.assigned.cols() != n)
        throw StructuralError("allocation dimensions do not match the configuration");
    if (config.subchannel_bandwidth_hz.size() != k)
        throw StructuralError("configuration has no bandwidth for every subchannel");
}

} // namespace

VectorXd compute_subchannel_rate(const SystemConfig &config, const ChannelSnapshot &snapshot, const Allocation &alloc,
                                 int k)
{
    check_shapes(config, snapshot, alloc);
    if (k < 0 || k >= config.n_subchannels)
        throw StructuralError("subchannel index out of range");

    const int n = config.n_users;
    const auto eta = snapshot.ncr().row(k);
    for (int i = 0; i < n; ++i)
    {
        if (!(eta(i) > 0.0))
            throw StructuralError("nonpositive noise-to-channel ratio");
    }

    // Strongest first: every user sees interference from the users placed before it.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return is_stronger(eta(a), a, eta(b), b); });

    const double bandwidth = config.subchannel_bandwidth_hz(k);
    VectorXd rate = VectorXd::Zero(n);
    double interference = 0.0;
    for (const int i : order)
    {
        const double p = alloc.assigned(k, i) ? alloc.power(k, i) : 0.0;
        if (p > 0.0)
        {
            rate(i) = bandwidth * std::log2(1.0 + p / (interference + eta(i)));
            interference += p;
        }
    }
    return rate;
}

RateReport compute_rates(const SystemConfig &config, const ChannelSnapshot &snapshot, const Allocation &alloc,
                         const std::optional<VectorXd> &weights)
{
    const VectorXd &w = weights ? *weights : config.weights;
    if (w.size() != config.n_users)
        throw StructuralError("weight vector must have length n_users");

    RateReport report;
    report.per_subchannel_per_user.resize(config.n_subchannels, config.n_users);
    for (int k = 0; k < config.n_subchannels; ++k)
        report.per_subchannel_per_user.row(k) = compute_subchannel_rate(config, snapshot, alloc, k).transpose();
    report.per_user_rate = report.per_subchannel_per_user.colwise().sum().transpose();
    report.weighted_sum = w.dot(report.per_user_rate);
    return report;
}

std::vector<Violation> validate_allocation(const SystemConfig &config, const Allocation &alloc)
{
    using Kind = Violation::Kind;
    std::vector<Violation> out;

    const int kk = config.n_subchannels;
    const int n = config.n_users;
    if (alloc.power.rows() != kk || alloc.power.cols() != n || alloc.assigned.rows() != kk ||
        alloc.assigned.cols() != n)
    {
        out.push_back({Kind::Shape, -1, -1, 0.0});
        return out;
    }

    const double tol = config.power_tolerance();
    double total = 0.0;
    for (int k = 0; k < kk; ++k)
    {
        double row = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i)
        {
            const double p = alloc.power(k, i);
            if (p < -tol)
                out.push_back({Kind::NegativePower, k, i, -p});
            if (p > tol && !alloc.assigned(k, i))
                out.push_back({Kind::PowerWithoutAssignment, k, i, p});
            row += p;
            count += alloc.assigned(k, i) ? 1 : 0;
        }
        const double cap = config.p_max_per_subchannel_watts(k);
        if (row > cap + tol)
            out.push_back({Kind::SubchannelPower, k, -1, row - cap});
        if (count > config.sic_capacity)
            out.push_back({Kind::SicCapacity, k, -1, static_cast<double>(count - config.sic_capacity)});
        total += row;
    }
    if (total > config.p_max_watts + tol)
        out.push_back({Kind::TotalPower, -1, -1, total - config.p_max_watts});
    return out;
}

} // namespace mcnoma
