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


#include "mcnoma/errors.hpp"
#include "mcnoma/subchannel_assign.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace mcnoma;

namespace
{

SystemConfig unit_config(int n, double p_max = 10.0)
{
    return SystemConfig::uniform(n, 1, 1.0, p_max, 1.0);
}

// Enumerates every last-SIC user and every companion that carries the largest
// weight among the users decoded before it.
double enumerate_hypotheses(const VectorXd &w, const VectorXd &eta, double p_bar, int &best_phi)
{
    const int n = static_cast<int>(w.size());
    double best = -std::numeric_limits<double>::infinity();
    best_phi = -1;
    for (int phi = 0; phi < n; ++phi)
    {
        double w_max = -1.0;
        for (int j = 0; j < n; ++j)
            if (eta(j) > eta(phi) || (eta(j) == eta(phi) && j < phi))
                w_max = std::max(w_max, w(j));
        double value = 0.0;
        if (w_max < 0.0)
        {
            value = single_user_value({w(phi), eta(phi)}, 1.0, p_bar);
        }
        else
        {
            int psi = -1;
            for (int j = 0; j < n && psi < 0; ++j)
                if ((eta(j) > eta(phi) || (eta(j) == eta(phi) && j < phi)) && w(j) == w_max)
                    psi = j;
            const PairSplit s = two_user_split({w(psi), eta(psi)}, {w(phi), eta(phi)}, 1.0, p_bar);
            if (!s.value)
                continue;
            value = *s.value;
        }
        if (value > best)
        {
            best = value;
            best_phi = phi;
        }
    }
    return best;
}

} // namespace

TEST_CASE("companion is the heaviest earlier user")
{
    const std::vector<double> w{0.3, 0.9, 0.5};
    const std::vector<int> order{0, 1, 2};
    CHECK(select_companion(w, order, 2) == 1);
    CHECK_FALSE(select_companion(w, order, 0).has_value());
    CHECK(select_companion(w, order, 1) == 0);

    const std::vector<double> tied{0.5, 0.5, 0.2};
    CHECK(select_companion(tied, order, 2) == 0);

    const std::vector<int> reversed{2, 1, 0};
    CHECK(select_companion(tied, reversed, 2) == 1);
}

TEST_CASE("users sorted weakest first with index tie-break")
{
    MatrixXd ncr(1, 4);
    ncr << 1.0, 3.0, 1.0, 0.5;
    const auto order = ncr_descending_order(ChannelSnapshot::from_ncr(ncr), 0);
    CHECK(order == std::vector<int>{1, 0, 2, 3});
}

TEST_CASE("pairing beats the strong user alone")
{
    MatrixXd ncr(1, 2);
    ncr << 4.0, 1.0;
    VectorXd w(2);
    w << 2.0, 1.0;
    const SubchannelSolution s = solve_subchannel(unit_config(2), ChannelSnapshot::from_ncr(ncr), w, 0, 10.0);
    CHECK(s.last_sic_user() == 1);
    REQUIRE(s.companion().has_value());
    CHECK(*s.companion() == 0);
    CHECK(s.power(0) == doctest::Approx(8.0));
    CHECK(s.power(1) == doctest::Approx(2.0));
    CHECK(s.value == doctest::Approx(4.029747343394051).epsilon(1e-12));
    CHECK(s.regime == SplitRegime::Interior);
    CHECK(s.assigned == std::vector<bool>{true, true});
}

TEST_CASE("zero budget gives the zero allocation")
{
    MatrixXd ncr(1, 3);
    ncr << 4.0, 1.0, 2.0;
    const SubchannelSolution s =
        solve_subchannel(unit_config(3), ChannelSnapshot::from_ncr(ncr), VectorXd::Ones(3), 0, 0.0);
    CHECK(s.value == 0.0);
    CHECK(s.power.isZero());
    CHECK(s.assigned == std::vector<bool>(3, false));
}

TEST_CASE("single user system")
{
    const SubchannelSolution s =
        solve_subchannel(unit_config(1), ChannelSnapshot::from_ncr(MatrixXd::Constant(1, 1, 0.5)), VectorXd::Ones(1),
                         0, 3.0);
    CHECK(s.last_sic_user() == 0);
    CHECK_FALSE(s.companion().has_value());
    CHECK(s.p_phi == 3.0);
    CHECK(s.value == doctest::Approx(std::log2(7.0)));
}

TEST_CASE("equal weights put everything on the strongest user")
{
    MatrixXd ncr(1, 4);
    ncr << 2.0, 0.3, 5.0, 0.7;
    const SubchannelSolution s =
        solve_subchannel(unit_config(4), ChannelSnapshot::from_ncr(ncr), VectorXd::Ones(4), 0, 4.0);
    CHECK(s.last_sic_user() == 1);
    CHECK(s.power(1) == 4.0);
    CHECK(s.power.sum() == 4.0);
    CHECK(s.value == doctest::Approx(std::log2(1.0 + 4.0 / 0.3)));
}

TEST_CASE("identical users resolve deterministically")
{
    const SubchannelSolution s =
        solve_subchannel(unit_config(3), ChannelSnapshot::from_ncr(MatrixXd::Ones(1, 3)), VectorXd::Ones(3), 0, 1.0);
    CHECK(s.last_sic_user() == 0);
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.power.sum() == doctest::Approx(1.0));
    const SubchannelSolution again =
        solve_subchannel(unit_config(3), ChannelSnapshot::from_ncr(MatrixXd::Ones(1, 3)), VectorXd::Ones(3), 0, 1.0);
    CHECK(again.last_sic_user() == s.last_sic_user());
}

TEST_CASE("preconditions")
{
    const ChannelSnapshot snap = ChannelSnapshot::from_ncr(MatrixXd::Ones(1, 2));
    CHECK_THROWS_AS(solve_subchannel(unit_config(2), snap, VectorXd::Ones(2), 0, -1.0), PreconditionError);
    CHECK_THROWS_AS(solve_subchannel(unit_config(2), snap, VectorXd::Ones(3), 0, 1.0), StructuralError);
    CHECK_THROWS_AS(solve_subchannel(unit_config(2), snap, VectorXd::Ones(2), 1, 1.0), StructuralError);
}

TEST_CASE("random subchannels: enumeration, structure and rate consistency")
{
    testing::Rng rng(11);
    for (int t = 0; t < 500; ++t)
    {
        const int n = 1 + static_cast<int>(rng() % 5);
        const SystemConfig cfg = unit_config(n);
        const MatrixXd ncr = testing::random_ncr(rng, 1, n);
        const VectorXd w = testing::random_weights(rng, n);
        const double p = testing::uniform(rng, 0.01, 20.0);
        const ChannelSnapshot snap = ChannelSnapshot::from_ncr(ncr);
        const SubchannelSolution s = solve_subchannel(cfg, snap, w, 0, p);

        int phi = -1;
        const double expected = enumerate_hypotheses(w, ncr.row(0).transpose(), p, phi);
        CHECK(s.value == expected);
        CHECK(s.last_sic_user() == phi);

        int active = 0;
        for (int i = 0; i < n; ++i)
            active += s.assigned[static_cast<std::size_t>(i)] ? 1 : 0;
        CHECK(active <= 2);
        CHECK(s.power.sum() == doctest::Approx(p).epsilon(1e-12));
        CHECK((s.power.array() >= 0.0).all());
        if (s.companion() && s.power(*s.companion()) > 0.0)
            CHECK(ncr(0, *s.companion()) > ncr(0, s.last_sic_user()));

        Allocation a = Allocation::zeros(1, n);
        a.power.row(0) = s.power.transpose();
        for (int i = 0; i < n; ++i)
            a.assigned(0, i) = s.assigned[static_cast<std::size_t>(i)];
        CHECK(compute_rates(cfg, snap, a, w).weighted_sum == doctest::Approx(s.value).epsilon(1e-9));
    }
}
