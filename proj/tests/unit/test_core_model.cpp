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

#include <doctest.h>

#include <cmath>

using namespace mcnoma;

namespace
{

bool has_kind(const std::vector<Violation> &v, Violation::Kind kind)
{
    for (const auto &x : v)
        if (x.kind == kind)
            return true;
    return false;
}

} // namespace

TEST_CASE("uniform config splits bandwidth and caps evenly")
{
    const SystemConfig c = SystemConfig::uniform(3, 4, 8e6, 20.0);
    CHECK(c.subchannel_bandwidth_hz.size() == 4);
    CHECK(c.subchannel_bandwidth_hz(2) == doctest::Approx(2e6));
    CHECK(c.p_max_per_subchannel_watts(0) == doctest::Approx(1.15 * 20.0 / 4));
    CHECK(c.weights.isOnes());
    CHECK(c.qos_min_rate.isZero());
    CHECK_NOTHROW(c.validate());
    CHECK(c.power_tolerance() == doctest::Approx(2e-8));
}

TEST_CASE("config validation separates shape problems from infeasibility")
{
    SystemConfig c = SystemConfig::uniform(3, 2, 1e6, 10.0);
    SUBCASE("sic capacity below two")
    {
        c.sic_capacity = 1;
        CHECK_THROWS_AS(c.validate(), InfeasibleConfigError);
    }
    SUBCASE("caps below the total budget")
    {
        c.p_max_per_subchannel_watts.setConstant(4.0);
        CHECK_THROWS_AS(c.validate(), InfeasibleConfigError);
    }
    SUBCASE("nonpositive weight")
    {
        c.weights(1) = 0.0;
        CHECK_THROWS_AS(c.validate(), InfeasibleConfigError);
    }
    SUBCASE("wrong weight length")
    {
        c.weights = VectorXd::Ones(2);
        CHECK_THROWS_AS(c.validate(), StructuralError);
    }
    SUBCASE("wrong cap length")
    {
        c.p_max_per_subchannel_watts = VectorXd::Ones(3);
        CHECK_THROWS_AS(c.validate(), StructuralError);
    }
    CHECK_THROWS_AS(SystemConfig::uniform(0, 2, 1e6, 1.0), StructuralError);
}

TEST_CASE("rate unit conversion")
{
    SystemConfig c = SystemConfig::uniform(2, 2, 5e6, 1.0);
    CHECK(c.to_qos_unit(1e7) == doctest::Approx(2.0));
    c.qos_unit = RateUnit::BitsPerSecond;
    CHECK(c.to_qos_unit(1e7) == doctest::Approx(1e7));
}

TEST_CASE("snapshot computes noise-to-channel ratios")
{
    MatrixXcd g(1, 2);
    g << std::complex<double>(0.0, 2.0), std::complex<double>(1.0, 1.0);
    MatrixXd noise(1, 2);
    noise << 8.0, 1.0;
    const ChannelSnapshot s(g, noise);
    CHECK(s.ncr()(0, 0) == doctest::Approx(2.0));
    CHECK(s.ncr()(0, 1) == doctest::Approx(0.5));
    CHECK(s.n_users() == 2);
    CHECK(s.n_subchannels() == 1);

    MatrixXd ncr(2, 2);
    ncr << 0.25, 3.0, 1.0, 7.5;
    CHECK(ChannelSnapshot::from_ncr(ncr).ncr() == ncr);
}

TEST_CASE("snapshot rejects degenerate channels")
{
    MatrixXcd g = MatrixXcd::Ones(1, 2);
    CHECK_THROWS_AS(ChannelSnapshot(g, MatrixXd::Ones(2, 2)), StructuralError);
    g(0, 1) = 0.0;
    CHECK_THROWS_AS(ChannelSnapshot(g, MatrixXd::Ones(1, 2)), StructuralError);
    CHECK_THROWS_AS(ChannelSnapshot(MatrixXcd::Ones(1, 2), MatrixXd::Zero(1, 2)), StructuralError);
    CHECK_THROWS_AS(ChannelSnapshot(MatrixXcd(0, 0), MatrixXd(0, 0)), StructuralError);
}

TEST_CASE("stronger ordering breaks NCR ties toward the higher index")
{
    CHECK(is_stronger(0.5, 0, 1.0, 1));
    CHECK_FALSE(is_stronger(1.0, 0, 0.5, 1));
    CHECK(is_stronger(1.0, 3, 1.0, 2));
    CHECK_FALSE(is_stronger(1.0, 2, 1.0, 3));
}

TEST_CASE("two-user SIC rates")
{
    SystemConfig c = SystemConfig::uniform(2, 1, 1.0, 10.0, 1.0);
    MatrixXd ncr(1, 2);
    ncr << 4.0, 1.0;
    const ChannelSnapshot s = ChannelSnapshot::from_ncr(ncr);
    Allocation a = Allocation::zeros(1, 2);
    a.power << 8.0, 2.0;
    a.assigned.setConstant(true);

    const VectorXd r = compute_subchannel_rate(c, s, a, 0);
    // user 0 is weaker and decodes with user 1 as interference
    CHECK(r(0) == doctest::Approx(std::log2(1.0 + 8.0 / 6.0)).epsilon(1e-14));
    CHECK(r(1) == doctest::Approx(std::log2(3.0)).epsilon(1e-14));

    VectorXd w(2);
    w << 2.0, 1.0;
    const RateReport rep = compute_rates(c, s, a, w);
    CHECK(rep.weighted_sum == doctest::Approx(2.0 * r(0) + r(1)).epsilon(1e-14));
    CHECK(rep.per_user_rate(1) == doctest::Approx(r(1)));
    CHECK(compute_rates(c, s, a).weighted_sum == doctest::Approx(r(0) + r(1)));
}

TEST_CASE("three-user SIC chain accumulates interference")
{
    SystemConfig c = SystemConfig::uniform(3, 1, 2.0, 6.0, 1.0, 3);
    MatrixXd ncr(1, 3);
    ncr << 1.0, 0.1, 0.5;
    Allocation a = Allocation::zeros(1, 3);
    a.power << 3.0, 1.0, 2.0;
    a.assigned.setConstant(true);
    const VectorXd r = compute_subchannel_rate(c, ChannelSnapshot::from_ncr(ncr), a, 0);
    CHECK(r(1) == doctest::Approx(2.0 * std::log2(1.0 + 1.0 / 0.1)));
    CHECK(r(2) == doctest::Approx(2.0 * std::log2(1.0 + 2.0 / (1.0 + 0.5))));
    CHECK(r(0) == doctest::Approx(2.0 * std::log2(1.0 + 3.0 / (3.0 + 1.0))));
}

TEST_CASE("assigned user with zero power is inert")
{
    SystemConfig c = SystemConfig::uniform(2, 1, 1.0, 1.0, 1.0);
    Allocation a = Allocation::zeros(1, 2);
    a.assigned.setConstant(true);
    a.power(0, 1) = 1.0;
    const VectorXd r = compute_subchannel_rate(c, ChannelSnapshot::from_ncr(MatrixXd::Ones(1, 2)), a, 0);
    CHECK(r(0) == 0.0);
    CHECK(r(1) == doctest::Approx(1.0));
    CHECK(validate_allocation(c, a).empty());
}

TEST_CASE("power on an unassigned user is ignored by the rate model and flagged")
{
    SystemConfig c = SystemConfig::uniform(2, 1, 1.0, 1.0, 1.0);
    Allocation a = Allocation::zeros(1, 2);
    a.power(0, 0) = 0.5;
    const VectorXd r = compute_subchannel_rate(c, ChannelSnapshot::from_ncr(MatrixXd::Ones(1, 2)), a, 0);
    CHECK(r.isZero());
    CHECK(has_kind(validate_allocation(c, a), Violation::Kind::PowerWithoutAssignment));
}

TEST_CASE("allocation validation reports every broken constraint")
{
    SystemConfig c = SystemConfig::uniform(3, 2, 1.0, 10.0, 0.6);
    Allocation a = Allocation::zeros(2, 3);
    a.assigned.row(0).setConstant(true);
    a.power.row(0) << 2.0, 2.0, 3.0;
    a.assigned(1, 0) = true;
    a.power(1, 0) = -1.0;

    const auto v = validate_allocation(c, a);
    CHECK(has_kind(v, Violation::Kind::SicCapacity));
    CHECK(has_kind(v, Violation::Kind::SubchannelPower));
    CHECK(has_kind(v, Violation::Kind::NegativePower));
    CHECK_FALSE(has_kind(v, Violation::Kind::TotalPower));
    for (const auto &x : v)
        CHECK_FALSE(x.describe().empty());

    a.power(1, 0) = 5.0;
    CHECK(has_kind(validate_allocation(c, a), Violation::Kind::TotalPower));

    const auto shape = validate_allocation(c, Allocation::zeros(1, 3));
    REQUIRE(shape.size() == 1);
    CHECK(shape[0].kind == Violation::Kind::Shape);
}

TEST_CASE("rate evaluation rejects mismatched shapes")
{
    SystemConfig c = SystemConfig::uniform(2, 2, 1.0, 1.0);
    const ChannelSnapshot s = ChannelSnapshot::from_ncr(MatrixXd::Ones(2, 2));
    CHECK_THROWS_AS(compute_rates(c, s, Allocation::zeros(1, 2)), StructuralError);
    CHECK_THROWS_AS(compute_subchannel_rate(c, s, Allocation::zeros(2, 2), 2), StructuralError);
    CHECK_THROWS_AS(compute_rates(c, s, Allocation::zeros(2, 2), VectorXd::Ones(3)), StructuralError);
}
