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
#include "mcnoma/oracle.hpp"
#include "mcnoma/pairwise_power.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mcnoma;

TEST_CASE("interior split")
{
    const PairSplit s = two_user_split({2.0, 4.0}, {1.0, 1.0}, 1.0, 10.0);
    CHECK(s.regime == SplitRegime::Interior);
    CHECK(s.p_phi == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.p_psi == doctest::Approx(8.0).epsilon(1e-14));
    REQUIRE(s.value.has_value());
    // grid search over p_phi with step 1e-4
    CHECK(*s.value == doctest::Approx(4.029747343394051).epsilon(1e-12));
    CHECK(*s.value > single_user_value({1.0, 1.0}, 1.0, 10.0));
}

TEST_CASE("contradictory split has no value")
{
    const PairSplit s = two_user_split({1.0, 4.0}, {0.2, 1.0}, 1.0, 10.0);
    CHECK(s.regime == SplitRegime::Contradictory);
    CHECK(s.p_phi == 0.0);
    CHECK_FALSE(s.value.has_value());
}

TEST_CASE("ratio exactly at the lower threshold is contradictory")
{
    const PairSplit s = two_user_split({1.0, 4.0}, {0.25, 1.0}, 1.0, 10.0);
    CHECK(s.regime == SplitRegime::Contradictory);
}

TEST_CASE("companion starved above the upper threshold")
{
    const PairSplit s = two_user_split({1.0, 1.0}, {2.0, 0.5}, 1.0, 10.0);
    CHECK(s.regime == SplitRegime::BoundaryAllToPhi);
    CHECK(s.p_phi == 10.0);
    CHECK(s.p_psi == 0.0);
    CHECK(*s.value == doctest::Approx(2.0 * std::log2(21.0)).epsilon(1e-14));
}

TEST_CASE("interior formula meets the budget at the upper threshold")
{
    // ratio == (P + eta_phi) / (P + eta_psi) puts exactly P on phi
    const double p = 6.0, eta_phi = 0.5, eta_psi = 2.0;
    const double ratio = (p + eta_phi) / (p + eta_psi);
    const PairSplit s = two_user_split({1.0, eta_psi}, {ratio, eta_phi}, 1.0, p);
    CHECK(s.p_phi == doctest::Approx(p).epsilon(1e-12));
    CHECK(s.p_psi == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single user value")
{
    CHECK(single_user_value({2.0, 4.0}, 1.0, 10.0) == doctest::Approx(3.6147098441152083).epsilon(1e-14));
    CHECK(single_user_value({2.0, 4.0}, 1.0, 0.0) == 0.0);
    CHECK(single_user_value({1.0, 1.0}, 1.0, 1.0) == 1.0);
    CHECK(single_user_value({1.0, 1.0}, 3.0, 1.0) == 3.0);
}

TEST_CASE("zero budget")
{
    const PairSplit s = two_user_split({2.0, 4.0}, {1.0, 1.0}, 1.0, 0.0);
    REQUIRE(s.value.has_value());
    CHECK(*s.value == 0.0);
    CHECK(s.p_phi == 0.0);
    CHECK(s.p_psi == 0.0);
}

TEST_CASE("preconditions")
{
    CHECK_THROWS_AS(two_user_split({1.0, 1.0}, {2.0, 1.0}, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(two_user_split({1.0, 1.0}, {2.0, 2.0}, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(two_user_split({1.0, 2.0}, {2.0, 1.0}, 1.0, -1.0), PreconditionError);
}

TEST_CASE("random splits spend the budget and match a grid search")
{
    testing::Rng rng(7);
    for (int t = 0; t < 200; ++t)
    {
        const WeightedLink psi{testing::uniform(rng, 0.2, 3.0), testing::uniform(rng, 1.5, 8.0)};
        const WeightedLink phi{testing::uniform(rng, 0.2, 3.0), testing::uniform(rng, 0.5, 1.4)};
        const double p = testing::uniform(rng, 0.5, 10.0);
        const PairSplit s = two_user_split(psi, phi, 1.0, p);
        CHECK(s.p_phi >= 0.0);
        CHECK(s.p_psi >= 0.0);
        const auto grid = oracle::two_user(psi.weight, phi.weight, psi.ncr, phi.ncr, 1.0, p, 10000);
        if (!s.value)
        {
            CHECK(grid.p_phi == 0.0);
            continue;
        }
        CHECK(s.p_phi + s.p_psi == doctest::Approx(p).epsilon(1e-15));
        CHECK(*s.value >= grid.value - 1e-12);
        CHECK(*s.value == doctest::Approx(grid.value).epsilon(1e-6));
        CHECK(*s.value == doctest::Approx(pair_objective(psi, phi, 1.0, s.p_psi, s.p_phi)));
    }
}
