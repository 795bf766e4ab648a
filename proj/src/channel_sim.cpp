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

#include "mcnoma/channel_sim.hpp"
#include "mcnoma/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

namespace mcnoma
{

void FadingConfig::validate() const
{
    if (!(min_distance_m > 0.0) || !(cell_radius_m >= min_distance_m))
        throw InfeasibleConfigError("cell radius and minimum distance must satisfy 0 < min_distance <= radius");
    if (!(bs_antenna_height_m > 0.0) || !(user_antenna_height_m > 0.0) || !(carrier_freq_mhz > 0.0))
        throw InfeasibleConfigError("antenna heights and carrier frequency must be positive");
    if (!(shadowing_std_db >= 0.0))
        throw InfeasibleConfigError("shadowing standard deviation must be nonnegative");
    if (!(csi_error_variance >= 0.0))
        throw InfeasibleConfigError("CSI error variance must be nonnegative");
}

UserPlacement UserPlacement::fixed_spacing(int n_users, double spacing_m)
{
    if (n_users <= 0 || !(spacing_m > 0.0))
        throw PreconditionError("fixed spacing needs a positive user count and spacing");
    UserPlacement p;
    p.distances_m = VectorXd::LinSpaced(n_users, spacing_m, spacing_m * n_users);
    return p;
}

UserPlacement UserPlacement::uniform_annulus(int n_users, const FadingConfig &fading, Rng &rng)
{
    if (n_users <= 0)
        throw PreconditionError("user count must be positive");
    const double r0 = fading.min_distance_m;
    const double r1 = fading.cell_radius_m;
    std::uniform_real_distribution<double> area(r0 * r0, r1 * r1);
    UserPlacement p;
    p.distances_m.resize(n_users);
    for (int i = 0; i < n_users; ++i)
        p.distances_m(i) = std::sqrt(area(rng));
    return p;
}

double hata_path_loss_db(double distance_km, const FadingConfig &fading)
{
    if (!(distance_km > 0.0))
        throw PreconditionError("distance must be positive");
    const double hb = fading.bs_antenna_height_m;
    const double hm = fading.user_antenna_height_m;
    const double corr = std::log10(11.75 * hm);
    const double a = 13.82 * std::log10(hb) + 3.2 * corr * corr - 4.97;
    const double b = 44.9 - 6.55 * std::log10(hb);
    return 69.55 + 26.16 * std::log10(fading.carrier_freq_mhz) - a + b * std::log10(distance_km);
}

double mean_channel_gain(double distance_m, const FadingConfig &fading)
{
    const double budget_db =
        fading.bs_antenna_gain_db + fading.user_antenna_gain_db - hata_path_loss_db(distance_m / 1000.0, fading);
    return std::pow(10.0, budget_db / 10.0);
}

double subchannel_noise_power(const SystemConfig &config, const FadingConfig &fading)
{
    const double n0_watts_per_hz = std::pow(10.0, (fading.noise_psd_dbm_per_hz - 30.0) / 10.0);
    return config.total_bandwidth_hz * n0_watts_per_hz / config.n_subchannels;
}

namespace
{

std::complex<double> unit_complex_gaussian(Rng &rng)
{
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    const double re = half(rng);
    const double im = half(rng);
    return {re, im};
}

VectorXd draw_shadowing(int n_users, const FadingConfig &fading, Rng &rng)
{
    VectorXd s = VectorXd::Zero(n_users);
    if (fading.shadowing_std_db > 0.0)
    {
        std::normal_distribution<double> shadow(0.0, fading.shadowing_std_db);
        for (int i = 0; i < n_users; ++i)
            s(i) = shadow(rng);
    }
    return s;
}

} // namespace

ChannelSnapshot draw_snapshot(const SystemConfig &config, const FadingConfig &fading, const UserPlacement &placement,
                              Rng &rng, const std::optional<VectorXd> &shadowing_db)
{
    const int n = config.n_users;
    const int kk = config.n_subchannels;
    if (placement.distances_m.size() != n)
        throw StructuralError("placement must give one distance per user");

    const VectorXd shadow = shadowing_db ? *shadowing_db : draw_shadowing(n, fading, rng);
    if (shadow.size() != n)
        throw StructuralError("shadowing must give one value per user");

    // Large-scale amplitude per user, shared by every subchannel of the slot.
    VectorXd amplitude(n);
    for (int i = 0; i < n; ++i)
        amplitude(i) = std::sqrt(mean_channel_gain(placement.distances_m(i), fading) * std::pow(10.0, -shadow(i) / 10.0));

    MatrixXcd gains(kk, n);
    for (int k = 0; k < kk; ++k)
    {
        for (int i = 0; i < n; ++i)
        {
            const std::complex<double> g = fading.small_scale_fading ? unit_complex_gaussian(rng) : 1.0;
            gains(k, i) = amplitude(i) * g;
        }
    }
    const MatrixXd noise = MatrixXd::Constant(kk, n, subchannel_noise_power(config, fading));
    return ChannelSnapshot(std::move(gains), noise);
}

ChannelSnapshot perturb_csi(const ChannelSnapshot &snapshot, const UserPlacement &placement,
                            const FadingConfig &fading, double csi_error_variance, Rng &rng)
{
    if (!(csi_error_variance >= 0.0))
        throw PreconditionError("CSI error variance must be nonnegative");
    if (csi_error_variance == 0.0)
        return snapshot;
    if (placement.distances_m.size() != snapshot.n_users())
        throw StructuralError("placement must give one distance per user");

    MatrixXcd estimate = snapshot.gains();
    for (int i = 0; i < snapshot.n_users(); ++i)
    {
        const double sigma = std::sqrt(csi_error_variance * mean_channel_gain(placement.distances_m(i), fading));
        for (int k = 0; k < snapshot.n_subchannels(); ++k)
            estimate(k, i) += sigma * unit_complex_gaussian(rng);
    }
    return ChannelSnapshot(std::move(estimate), snapshot.noise_power());
}

FadingChannelSource::FadingChannelSource(SystemConfig config, FadingConfig fading, UserPlacement placement)
    : config_(std::move(config)), fading_(fading), placement_(std::move(placement)), rng_(fading.seed)
{
    fading_.validate();
    if (placement_.distances_m.size() != config_.n_users)
        throw StructuralError("placement must give one distance per user");
    if (!fading_.redraw_shadowing_per_slot)
        shadowing_ = draw_shadowing(config_.n_users, fading_, rng_);
}

std::optional<SlotChannel> FadingChannelSource::next()
{
    ChannelSnapshot actual = draw_snapshot(config_, fading_, placement_, rng_, shadowing_);
    ChannelSnapshot planning = perturb_csi(actual, placement_, fading_, fading_.csi_error_variance, rng_);
    return SlotChannel{std::move(planning), std::move(actual)};
}

ReplayChannelSource::ReplayChannelSource(std::vector<ChannelSnapshot> snapshots, bool loop)
    : snapshots_(std::move(snapshots)), loop_(loop)
{
}

std::optional<SlotChannel> ReplayChannelSource::next()
{
    if (snapshots_.empty())
        return std::nullopt;
    if (cursor_ >= snapshots_.size())
    {
        if (!loop_)
            return std::nullopt;
        cursor_ = 0;
    }
    const ChannelSnapshot &s = snapshots_[cursor_++];
    return SlotChannel{s, s};
}

void write_snapshots_csv(std::ostream &os, const std::vector<ChannelSnapshot> &snapshots)
{
    os << "slot,subchannel,user,gain_re,gain_im,noise_w\n";
    os << std::setprecision(17);
    for (std::size_t t = 0; t < snapshots.size(); ++t)
    {
        const ChannelSnapshot &s = snapshots[t];
        for (int k = 0; k < s.n_subchannels(); ++k)
        {
            for (int i = 0; i < s.n_users(); ++i)
            {
                os << t << ',' << k << ',' << i << ',' << s.gains()(k, i).real() << ',' << s.gains()(k, i).imag()
                   << ',' << s.noise_power()(k, i) << '\n';
            }
        }
    }
}

std::vector<ChannelSnapshot> read_snapshots_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line))
        throw StructuralError("snapshot CSV is empty");
    if (line.rfind("slot,subchannel,user,gain_re,gain_im,noise_w", 0) != 0)
        throw StructuralError("snapshot CSV header must be slot,subchannel,user,gain_re,gain_im,noise_w");

    using Entry = std::tuple<std::complex<double>, double>;
    std::map<long, std::map<std::pair<int, int>, Entry>> slots;
    int max_k = -1;
    int max_i = -1;
    std::size_t line_no = 1;
    while (std::getline(is, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        std::istringstream row(line);
        std::string cell[6];
        for (auto &c : cell)
        {
            if (!std::getline(row, c, ','))
                throw StructuralError("snapshot CSV line " + std::to_string(line_no) + " has fewer than 6 fields");
        }
        try
        {
            const long t = std::stol(cell[0]);
            const int k = std::stoi(cell[1]);
            const int i = std::stoi(cell[2]);
            if (t < 0 || k < 0 || i < 0)
                throw StructuralError("negative index");
            slots[t][{k, i}] = Entry{{std::stod(cell[3]), std::stod(cell[4])}, std::stod(cell[5])};
            max_k = std::max(max_k, k);
            max_i = std::max(max_i, i);
        }
        catch (const std::logic_error &)
        {
            throw StructuralError("snapshot CSV line " + std::to_string(line_no) + " is malformed");
        }
    }

    std::vector<ChannelSnapshot> out;
    long expected = 0;
    for (const auto &[t, entries] : slots)
    {
        if (t != expected++)
            throw StructuralError("snapshot CSV slots must be numbered 0, 1, 2, ...");
        if (entries.size() != static_cast<std::size_t>((max_k + 1) * (max_i + 1)))
            throw StructuralError("snapshot CSV slot " + std::to_string(t) + " does not cover every (subchannel, user)");
        MatrixXcd gains(max_k + 1, max_i + 1);
        MatrixXd noise(max_k + 1, max_i + 1);
        for (const auto &[key, value] : entries)
        {
            gains(key.first, key.second) = std::get<0>(value);
            noise(key.first, key.second) = std::get<1>(value);
        }
        out.emplace_back(std::move(gains), std::move(noise));
    }
    return out;
}

} // namespace mcnoma
