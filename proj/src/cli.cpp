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


#include "mcnoma/cli.hpp"
#include "mcnoma/errors.hpp"
#include "mcnoma/joint_sapa.hpp"
#include "mcnoma/subchannel_assign.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

namespace mcnoma::cli
{

using nlohmann::json;

namespace
{

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

void check_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &where)
{
    if (!j.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (const auto &item : j.items())
    {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char *k) { return item.key() == k; });
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
void read(const json &j, const char *key, T &target, const std::string &where)
{
    if (!j.contains(key))
        return;
    try
    {
        target = j.at(key).get<T>();
    }
    catch (const json::exception &)
    {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

VectorXd read_per_user(const json &j, const char *key, int n_users, double fallback, const std::string &where)
{
    if (!j.contains(key))
        return VectorXd::Constant(n_users, fallback);
    const json &v = j.at(key);
    if (v.is_number())
        return VectorXd::Constant(n_users, v.get<double>());
    if (!v.is_array() || static_cast<int>(v.size()) != n_users)
        throw ConfigError(where + "." + key + " must be a number or an array of length n_users");
    VectorXd out(n_users);
    for (int i = 0; i < n_users; ++i)
    {
        if (!v[static_cast<std::size_t>(i)].is_number())
            throw ConfigError(where + "." + key + " must contain numbers");
        out(i) = v[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
}

json to_json(const VectorXd &v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

json to_json(const MatrixXd &m)
{
    json rows = json::array();
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        rows.push_back(to_json(VectorXd(m.row(k).transpose())));
    return rows;
}

UserPlacement make_placement(const RunConfig &rc, Rng &rng)
{
    if (rc.placement == PlacementMode::FixedSpacing)
        return UserPlacement::fixed_spacing(rc.system.n_users, rc.spacing_m);
    return UserPlacement::uniform_annulus(rc.system.n_users, rc.fading, rng);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<ChannelSnapshot> read_snapshot_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open snapshot file " + path);
    return read_snapshots_csv(in);
}

void write_snapshot_file(const std::string &path, const std::vector<ChannelSnapshot> &snapshots)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write snapshot file " + path);
    write_snapshots_csv(os, snapshots);
}

std::filesystem::path prepare_out_dir(const std::string &dir)
{
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

SchedulerOptions scheduler_options(const RunConfig &rc)
{
    SchedulerOptions opt;
    opt.mode = rc.mode;
    opt.joint = rc.joint;
    return opt;
}

struct CommonFlags
{
    std::string config = "paper-sec5";
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> slots;
    std::optional<int> trials;
    std::optional<std::string> mode;
    std::string out = ".";
    std::optional<double> csi_error;
    std::string snapshot;
    std::string save_snapshot;
    int repetitions = 50;
    std::vector<int> bench_users{10, 20, 30, 40};
    std::vector<int> bench_subchannels{5, 10, 20};
};

RunConfig resolve(const CommonFlags &f)
{
    RunConfig rc = load_config(f.config);
    if (f.seed)
    {
        rc.seed = *f.seed;
        rc.fading.seed = *f.seed;
    }
    if (f.slots)
        rc.slots = *f.slots;
    if (f.trials)
        rc.trials = *f.trials;
    if (f.mode)
    {
        try
        {
            rc.mode = parse_scheduling_mode(*f.mode);
        }
        catch (const PreconditionError &e)
        {
            throw ConfigError(e.what());
        }
    }
    if (f.csi_error)
        rc.fading.csi_error_variance = *f.csi_error;
    if (rc.slots < 1 || rc.trials < 1)
        throw ConfigError("slots and trials must be at least 1");
    rc.system.validate();
    rc.fading.validate();
    return rc;
}

int cmd_solve(const CommonFlags &f, std::ostream &out)
{
    const RunConfig rc = resolve(f);
    Rng rng(rc.fading.seed);
    const UserPlacement placement = make_placement(rc, rng);

    SlotChannel channel;
    if (!f.snapshot.empty())
    {
        const auto snaps = read_snapshot_file(f.snapshot);
        if (snaps.empty())
            throw ConfigError("snapshot file holds no slots");
        channel = {snaps.front(), snaps.front()};
    }
    else
    {
        ChannelSnapshot actual = draw_snapshot(rc.system, rc.fading, placement, rng);
        ChannelSnapshot planning = perturb_csi(actual, placement, rc.fading, rc.fading.csi_error_variance, rng);
        channel = {std::move(planning), std::move(actual)};
    }
    if (channel.actual.n_users() != rc.system.n_users || channel.actual.n_subchannels() != rc.system.n_subchannels)
        throw ConfigError("snapshot dimensions do not match the configuration");
    if (!f.save_snapshot.empty())
        write_snapshot_file(f.save_snapshot, {channel.actual});

    const JointSolution sol = joint_sapa_lcc(rc.system, channel.planning, rc.system.weights, rc.joint);
    const RateReport rates = compute_rates(rc.system, channel.actual, sol.allocation, rc.system.weights);

    json assigned = json::array();
    for (Eigen::Index k = 0; k < sol.allocation.assigned.rows(); ++k)
    {
        json row = json::array();
        for (Eigen::Index i = 0; i < sol.allocation.assigned.cols(); ++i)
            if (sol.allocation.assigned(k, i))
                row.push_back(i);
        assigned.push_back(row);
    }

    json doc;
    doc["schema_version"] = schema_version;
    doc["command"] = "solve";
    doc["n_users"] = rc.system.n_users;
    doc["n_subchannels"] = rc.system.n_subchannels;
    doc["seed"] = rc.seed;
    doc["csi_error_variance"] = rc.fading.csi_error_variance;
    doc["weighted_sum_rate_bps"] = rates.weighted_sum;
    doc["weighted_sum_rate_bps_per_hz"] = rates.weighted_sum / rc.system.total_bandwidth_hz;
    doc["planned_weighted_sum_rate_bps"] = sol.weighted_sum_rate;
    doc["iterations"] = sol.iterations;
    doc["trace_bps"] = sol.trace;
    doc["subchannel_budgets_w"] = to_json(sol.p_bars);
    doc["power_w"] = to_json(sol.allocation.power);
    doc["assigned_users"] = assigned;
    doc["per_user_rate_bps"] = to_json(rates.per_user_rate);
    out << doc.dump(2) << '\n';
    return exit_ok;
}

int cmd_schedule(const CommonFlags &f, std::ostream &out)
{
    const RunConfig rc = resolve(f);
    Rng rng(derive_seed(rc.fading.seed, 0xC0FFEE));
    const UserPlacement placement = make_placement(rc, rng);

    std::unique_ptr<ChannelSource> source;
    if (!f.snapshot.empty())
        source = std::make_unique<ReplayChannelSource>(read_snapshot_file(f.snapshot), true);
    else
        source = std::make_unique<FadingChannelSource>(rc.system, rc.fading, placement);

    const std::filesystem::path dir = prepare_out_dir(f.out);
    std::ofstream csv(dir / "schedule.csv");
    if (!csv)
        throw std::runtime_error("cannot write " + (dir / "schedule.csv").string());
    csv << "slot,user,rate,lambda,effective_weight\n" << std::setprecision(10);

    const std::int64_t stride = std::max<std::int64_t>(1, rc.slots / std::max(1, rc.lambda_trace_points));
    json lambda_slots = json::array();
    json lambda_values = json::array();
    auto observer = [&](const SlotResult &s) {
        for (int i = 0; i < rc.system.n_users; ++i)
            csv << s.slot << ',' << i << ',' << s.rates_qos_unit(i) << ',' << s.lambdas(i) << ','
                << s.effective_weights(i) << '\n';
        if ((s.slot - 1) % stride == 0 || s.slot == rc.slots)
        {
            lambda_slots.push_back(s.slot);
            lambda_values.push_back(to_json(s.lambdas));
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    const HorizonResult h = run_horizon(rc.system, *source, SchedulerState::initial(rc.system, rc.pf_tau),
                                        scheduler_options(rc), rc.slots, false, observer);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json summary;
    summary["schema_version"] = schema_version;
    summary["command"] = "schedule";
    summary["mode"] = to_string(rc.mode);
    summary["n_users"] = rc.system.n_users;
    summary["n_subchannels"] = rc.system.n_subchannels;
    summary["seed"] = rc.seed;
    summary["slots_requested"] = rc.slots;
    summary["slots_run"] = h.slots_run;
    summary["completed"] = h.completed;
    summary["rate_unit"] = rc.system.qos_unit == RateUnit::BitsPerSecondPerHz ? "bps_per_hz" : "bps";
    summary["qos_min_rate"] = to_json(rc.system.qos_min_rate);
    summary["average_rates"] = to_json(h.average_rates);
    summary["final_lambdas"] = to_json(h.final_state.lambdas);
    summary["max_lambda"] = h.max_lambda;
    summary["lambda_trajectory"] = {{"slots", lambda_slots}, {"values", lambda_values}};
    summary["runtime_s"] = seconds;
    std::ofstream js(dir / "schedule_summary.json");
    js << summary.dump(2) << '\n';

    out << "schedule: " << h.slots_run << " slots in " << std::fixed << std::setprecision(2) << seconds
        << " s, min average rate " << h.average_rates.minCoeff() << ", output in " << dir.string() << '\n';
    if (!h.completed)
        out << "schedule: channel source exhausted after " << h.slots_run << " slots\n";
    return exit_ok;
}

int cmd_montecarlo(const CommonFlags &f, std::ostream &out)
{
    const RunConfig rc = resolve(f);
    const int trials = rc.trials;
    std::vector<double> wsr(static_cast<std::size_t>(trials), 0.0);
    std::vector<double> runtime_ms(static_cast<std::size_t>(trials), 0.0);

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    auto worker = [&]() {
        for (int t = next++; t < trials; t = next++)
        {
            try
            {
                Rng rng(derive_seed(rc.seed, static_cast<std::uint64_t>(t)));
                const UserPlacement placement = make_placement(rc, rng);
                const ChannelSnapshot actual = draw_snapshot(rc.system, rc.fading, placement, rng);
                const ChannelSnapshot planning =
                    perturb_csi(actual, placement, rc.fading, rc.fading.csi_error_variance, rng);
                const auto t0 = std::chrono::steady_clock::now();
                const JointSolution sol = joint_sapa_lcc(rc.system, planning, rc.system.weights, rc.joint);
                const auto t1 = std::chrono::steady_clock::now();
                const RateReport r = compute_rates(rc.system, actual, sol.allocation, rc.system.weights);
                wsr[static_cast<std::size_t>(t)] = r.weighted_sum / rc.system.total_bandwidth_hz;
                runtime_ms[static_cast<std::size_t>(t)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int n_threads = std::clamp(rc.threads > 0 ? rc.threads : static_cast<int>(hw), 1, trials);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);

    auto mean_std = [](const std::vector<double> &v) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v)
            ss += (x - m) * (x - m);
        const double s = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        return std::pair{m, s};
    };
    const auto [wm, ws] = mean_std(wsr);
    const auto [rm, rs] = mean_std(runtime_ms);

    const std::filesystem::path dir = prepare_out_dir(f.out);
    std::ofstream csv(dir / "montecarlo.csv");
    if (!csv)
        throw std::runtime_error("cannot write " + (dir / "montecarlo.csv").string());
    csv << "trial,wsr,runtime_ms\n" << std::setprecision(10);
    for (int t = 0; t < trials; ++t)
        csv << t << ',' << wsr[static_cast<std::size_t>(t)] << ',' << runtime_ms[static_cast<std::size_t>(t)] << '\n';
    csv << "mean," << wm << ',' << rm << '\n';
    csv << "std," << ws << ',' << rs << '\n';

    out << "montecarlo: " << trials << " trials, mean WSR " << std::setprecision(6) << wm << " b/s/Hz, output in "
        << dir.string() << '\n';
    return exit_ok;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_bench(const CommonFlags &f, std::ostream &out)
{
    const RunConfig rc = resolve(f);
    if (f.repetitions < 1)
        throw ConfigError("repetitions must be at least 1");
    const std::filesystem::path dir = prepare_out_dir(f.out);
    std::ofstream csv(dir / "bench.csv");
    if (!csv)
        throw std::runtime_error("cannot write " + (dir / "bench.csv").string());
    csv << "algorithm,n_users,n_subchannels,repetitions,median_us\n" << std::setprecision(8);

    auto make = [&](int n, int k) {
        SystemConfig sys = SystemConfig::uniform(n, k, rc.system.total_bandwidth_hz, rc.system.p_max_watts,
                                                 rc.system.p_max_per_subchannel_watts.sum() / rc.system.p_max_watts,
                                                 rc.system.sic_capacity);
        return sys;
    };
    auto instance = [&](const SystemConfig &sys, Rng &rng) {
        FadingConfig fading = rc.fading;
        const UserPlacement placement = UserPlacement::uniform_annulus(sys.n_users, fading, rng);
        return draw_snapshot(sys, fading, placement, rng);
    };

    Rng rng(rc.seed);
    for (int n : f.bench_users)
    {
        const SystemConfig sys = make(n, rc.system.n_subchannels);
        std::vector<double> us;
        for (int r = 0; r < f.repetitions; ++r)
        {
            const ChannelSnapshot snap = instance(sys, rng);
            const auto t0 = std::chrono::steady_clock::now();
            const SubchannelSolution s =
                solve_subchannel(sys, snap, sys.weights, 0, sys.p_max_watts / sys.n_subchannels);
            const auto t1 = std::chrono::steady_clock::now();
            if (!(s.value >= 0.0))
                throw InternalError("bench produced a negative value");
            us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
        }
        csv << "subchannel," << n << ',' << sys.n_subchannels << ',' << f.repetitions << ',' << median(us) << '\n';
    }
    for (int n : f.bench_users)
    {
        for (int k : f.bench_subchannels)
        {
            const SystemConfig sys = make(n, k);
            std::vector<double> us;
            for (int r = 0; r < f.repetitions; ++r)
            {
                const ChannelSnapshot snap = instance(sys, rng);
                const auto t0 = std::chrono::steady_clock::now();
                const JointSolution s = joint_sapa_lcc(sys, snap, sys.weights, rc.joint);
                const auto t1 = std::chrono::steady_clock::now();
                if (!(s.weighted_sum_rate >= 0.0))
                    throw InternalError("bench produced a negative value");
                us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
            }
            csv << "joint," << n << ',' << k << ',' << f.repetitions << ',' << median(us) << '\n';
        }
    }
    out << "bench: output in " << dir.string() << '\n';
    return exit_ok;
}

} // namespace

RunConfig preset_paper_sec5()
{
    RunConfig rc;
    rc.system = SystemConfig::uniform(10, 10, 5e6, dbm_to_watts(43.0), 1.15, 2);
    rc.system.qos_min_rate = VectorXd::Constant(10, 2.0);
    rc.system.qos_unit = RateUnit::BitsPerSecondPerHz;
    rc.fading = FadingConfig{};
    rc.placement = PlacementMode::FixedSpacing;
    rc.spacing_m = 30.0;
    return rc;
}

RunConfig parse_config(const std::string &json_text)
{
    json doc;
    try
    {
        doc = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc, {"schema_version", "preset", "system", "fading", "scheduler", "run"}, "config");
    if (doc.contains("preset") && !(doc["preset"].is_string() && doc["preset"] == "paper-sec5"))
        throw ConfigError("unknown preset, the only preset is paper-sec5");

    RunConfig rc = preset_paper_sec5();
    const json empty = json::object();

    const json &sys = doc.contains("system") ? doc["system"] : empty;
    check_keys(sys,
               {"n_users", "n_subchannels", "total_bandwidth_hz", "p_max_dbm", "p_max_watts", "cap_factor",
                "p_max_per_subchannel_watts", "sic_capacity", "weights", "qos_min_rate", "qos_unit"},
               "system");
    int n = rc.system.n_users;
    int k = rc.system.n_subchannels;
    double btot = rc.system.total_bandwidth_hz;
    double pmax = rc.system.p_max_watts;
    double cap_factor = 1.15;
    int m = rc.system.sic_capacity;
    read(sys, "n_users", n, "system");
    read(sys, "n_subchannels", k, "system");
    read(sys, "total_bandwidth_hz", btot, "system");
    if (sys.contains("p_max_dbm") && sys.contains("p_max_watts"))
        throw ConfigError("give either system.p_max_dbm or system.p_max_watts, not both");
    if (sys.contains("p_max_dbm"))
    {
        double dbm = 0.0;
        read(sys, "p_max_dbm", dbm, "system");
        pmax = dbm_to_watts(dbm);
    }
    read(sys, "p_max_watts", pmax, "system");
    read(sys, "cap_factor", cap_factor, "system");
    read(sys, "sic_capacity", m, "system");
    if (n <= 0 || k <= 0)
        throw ConfigError("system.n_users and system.n_subchannels must be positive");
    rc.system = SystemConfig::uniform(n, k, btot, pmax, cap_factor, m);
    if (sys.contains("p_max_per_subchannel_watts"))
        rc.system.p_max_per_subchannel_watts = read_per_user(sys, "p_max_per_subchannel_watts", k, 0.0, "system");
    rc.system.weights = read_per_user(sys, "weights", n, 1.0, "system");
    rc.system.qos_min_rate = read_per_user(sys, "qos_min_rate", n, 2.0, "system");
    if (sys.contains("qos_unit"))
    {
        std::string unit;
        read(sys, "qos_unit", unit, "system");
        if (unit == "bps_per_hz")
            rc.system.qos_unit = RateUnit::BitsPerSecondPerHz;
        else if (unit == "bps")
            rc.system.qos_unit = RateUnit::BitsPerSecond;
        else
            throw ConfigError("system.qos_unit must be bps_per_hz or bps");
    }

    const json &fad = doc.contains("fading") ? doc["fading"] : empty;
    check_keys(fad,
               {"carrier_freq_mhz", "bs_antenna_height_m", "user_antenna_height_m", "bs_antenna_gain_db",
                "user_antenna_gain_db", "shadowing_std_db", "noise_psd_dbm_per_hz", "cell_radius_m", "min_distance_m",
                "csi_error_variance", "small_scale_fading", "redraw_shadowing_per_slot", "seed", "placement",
                "spacing_m"},
               "fading");
    read(fad, "carrier_freq_mhz", rc.fading.carrier_freq_mhz, "fading");
    read(fad, "bs_antenna_height_m", rc.fading.bs_antenna_height_m, "fading");
    read(fad, "user_antenna_height_m", rc.fading.user_antenna_height_m, "fading");
    read(fad, "bs_antenna_gain_db", rc.fading.bs_antenna_gain_db, "fading");
    read(fad, "user_antenna_gain_db", rc.fading.user_antenna_gain_db, "fading");
    read(fad, "shadowing_std_db", rc.fading.shadowing_std_db, "fading");
    read(fad, "noise_psd_dbm_per_hz", rc.fading.noise_psd_dbm_per_hz, "fading");
    read(fad, "cell_radius_m", rc.fading.cell_radius_m, "fading");
    read(fad, "min_distance_m", rc.fading.min_distance_m, "fading");
    read(fad, "csi_error_variance", rc.fading.csi_error_variance, "fading");
    read(fad, "small_scale_fading", rc.fading.small_scale_fading, "fading");
    read(fad, "redraw_shadowing_per_slot", rc.fading.redraw_shadowing_per_slot, "fading");
    read(fad, "spacing_m", rc.spacing_m, "fading");
    if (fad.contains("placement"))
    {
        std::string placement;
        read(fad, "placement", placement, "fading");
        if (placement == "fixed")
            rc.placement = PlacementMode::FixedSpacing;
        else if (placement == "random")
            rc.placement = PlacementMode::UniformAnnulus;
        else
            throw ConfigError("fading.placement must be fixed or random");
    }

    const json &sch = doc.contains("scheduler") ? doc["scheduler"] : empty;
    check_keys(sch, {"mode", "pf_tau", "tolerance", "max_iterations"}, "scheduler");
    if (sch.contains("mode"))
    {
        std::string mode;
        read(sch, "mode", mode, "scheduler");
        try
        {
            rc.mode = parse_scheduling_mode(mode);
        }
        catch (const PreconditionError &e)
        {
            throw ConfigError(e.what());
        }
    }
    read(sch, "pf_tau", rc.pf_tau, "scheduler");
    read(sch, "tolerance", rc.joint.tolerance, "scheduler");
    read(sch, "max_iterations", rc.joint.max_iterations, "scheduler");

    const json &run = doc.contains("run") ? doc["run"] : empty;
    check_keys(run, {"seed", "slots", "trials", "threads", "lambda_trace_points"}, "run");
    read(run, "seed", rc.seed, "run");
    rc.fading.seed = rc.seed;
    if (fad.contains("seed"))
        read(fad, "seed", rc.fading.seed, "fading");
    read(run, "slots", rc.slots, "run");
    read(run, "trials", rc.trials, "run");
    read(run, "threads", rc.threads, "run");
    read(run, "lambda_trace_points", rc.lambda_trace_points, "run");

    if (!(rc.pf_tau >= 1.0) || rc.joint.max_iterations < 1 || !(rc.joint.tolerance >= 0.0))
        throw InfeasibleConfigError("scheduler.pf_tau must be >= 1, max_iterations >= 1 and tolerance >= 0");
    rc.system.validate();
    rc.fading.validate();
    return rc;
}

RunConfig load_config(const std::string &path_or_preset)
{
    if (path_or_preset == "paper-sec5")
        return preset_paper_sec5();
    std::ifstream in(path_or_preset);
    if (!in)
        throw ConfigError("cannot open config file " + path_or_preset);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

int run(int argc, char **argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"mcnoma - multicarrier NOMA resource allocation and scheduling"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonFlags f;
    std::uint64_t seed = 0;
    std::int64_t slots = 0;
    int trials = 0;
    std::string mode;
    double csi = 0.0;
    app.add_option("--config", f.config, "Config JSON path or preset name")->capture_default_str();
    auto *seed_opt = app.add_option("--seed", seed, "RNG seed");
    auto *slots_opt = app.add_option("--slots", slots, "Number of scheduling slots");
    auto *trials_opt = app.add_option("--trials", trials, "Number of Monte-Carlo trials");
    auto *mode_opt = app.add_option("--mode", mode, "Scheduling mode")->check(CLI::IsMember({"qos", "pf", "no_qos"}));
    app.add_option("--out", f.out, "Output directory")->capture_default_str();
    auto *csi_opt = app.add_option("--csi-error", csi, "CSI error variance");
    app.add_option("--snapshot", f.snapshot, "Replay channel snapshots from a CSV file");
    app.add_option("--save-snapshot", f.save_snapshot, "Write the solved snapshot as CSV (solve)");
    app.add_option("--reps", f.repetitions, "Timing repetitions per point (bench)")->capture_default_str();
    app.add_option("--bench-users", f.bench_users, "User counts (bench)");
    app.add_option("--bench-subchannels", f.bench_subchannels, "Subchannel counts (bench)");

    auto *solve = app.add_subcommand("solve", "Solve one snapshot, JSON to stdout");
    auto *schedule = app.add_subcommand("schedule", "Run the online scheduler over a horizon");
    auto *montecarlo = app.add_subcommand("montecarlo", "Independent single-slot trials");
    auto *bench = app.add_subcommand("bench", "Timing of the subchannel and joint solvers");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_malformed_config;
    }
    if (*seed_opt)
        f.seed = seed;
    if (*slots_opt)
        f.slots = slots;
    if (*trials_opt)
        f.trials = trials;
    if (*mode_opt)
        f.mode = mode;
    if (*csi_opt)
        f.csi_error = csi;

    try
    {
        if (solve->parsed())
            return cmd_solve(f, out);
        if (schedule->parsed())
            return cmd_schedule(f, out);
        if (montecarlo->parsed())
            return cmd_montecarlo(f, out);
        if (bench->parsed())
            return cmd_bench(f, out);
    }
    catch (const ConfigError &e)
    {
        err << "error: malformed config: " << e.what() << '\n';
        return exit_malformed_config;
    }
    catch (const StructuralError &e)
    {
        err << "error: malformed config: " << e.what() << '\n';
        return exit_malformed_config;
    }
    catch (const InfeasibleConfigError &e)
    {
        err << "error: infeasible config: " << e.what() << '\n';
        return exit_infeasible_config;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_failure;
}

} // namespace mcnoma::cli
