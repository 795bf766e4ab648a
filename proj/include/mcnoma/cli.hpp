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


#ifndef MCNOMA_CLI_HPP
#define MCNOMA_CLI_HPP

#include "mcnoma/channel_sim.hpp"
#include "mcnoma/core_model.hpp"
#include "mcnoma/scheduler.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mcnoma::cli
{

inline constexpr int schema_version = 1;

enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1,
    exit_malformed_config = 2,
    exit_infeasible_config = 3,
};

// Unreadable or structurally wrong configuration (exit code 2)
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class PlacementMode
{
    FixedSpacing, // user i at spacing * (i + 1)
    UniformAnnulus,
};

struct RunConfig
{
    SystemConfig system;
    FadingConfig fading;
    PlacementMode placement = PlacementMode::FixedSpacing;
    double spacing_m = 30.0;

    SchedulingMode mode = SchedulingMode::Qos;
    double pf_tau = 1000.0;
    JointOptions joint;

    std::uint64_t seed = 1;
    std::int64_t slots = 1000;
    int trials = 10;
    int threads = 0; // 0 picks the hardware concurrency
    int lambda_trace_points = 500;
};

// N = K = 10, 5 MHz, 43 dBm, caps 1.15 P_max / K, M = 2, unit weights,
// 2 b/s/Hz targets and users at 30 i meters.
RunConfig preset_paper_sec5();

// Parses a JSON document with optional "preset" and the sections system,
// fading, scheduler and run. Unknown keys and wrong types raise ConfigError;
// broken invariants raise InfeasibleConfigError.
RunConfig parse_config(const std::string &json_text);
RunConfig load_config(const std::string &path_or_preset);

// Entry point of the mcnoma executable.
int run(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace mcnoma::cli

#endif
