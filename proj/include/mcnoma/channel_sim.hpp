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

#ifndef MCNOMA_CHANNEL_SIM_HPP
#define MCNOMA_CHANNEL_SIM_HPP

#include "mcnoma/core_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace mcnoma
{

using Rng = std::mt19937_64;

// Urban macro-cell link budget and fading statistics.
struct FadingConfig
{
    double carrier_freq_mhz = 900.0;
    double bs_antenna_height_m = 30.0;
    double user_antenna_height_m = 2.0;
    double bs_antenna_gain_db = 15.0;
    double user_antenna_gain_db = 0.0;
    double shadowing_std_db = 8.0;
    double noise_psd_dbm_per_hz = -174.0;
    double cell_radius_m = 300.0;
    double min_distance_m = 30.0;
    double csi_error_variance = 0.0; // 0 means perfect CSI
    bool small_scale_fading = true;  // false replaces Rayleigh fading by its mean
    bool redraw_shadowing_per_slot = true;
    std::uint64_t seed = 1;

    void validate() const;
};

struct UserPlacement
{
    VectorXd distances_m;

    // User i (0-based) at spacing * (i + 1) meters.
    static UserPlacement fixed_spacing(int n_users, double spacing_m);
    // Uniform by area over the annulus [min_distance, cell_radius].
    static UserPlacement uniform_annulus(int n_users, const FadingConfig &fading, Rng &rng);
};

// HATA urban path loss in dB; the BS height enters both the antenna
// correction and the distance slope.
double hata_path_loss_db(double distance_km, const FadingConfig &fading);

// Mean linear channel power gain of a user: antenna gains minus path loss,
// before shadowing and small-scale fading.
double mean_channel_gain(double distance_m, const FadingConfig &fading);

// Noise power per (subchannel, user), B_tot * N0 / K, in watts.
double subchannel_noise_power(const SystemConfig &config, const FadingConfig &fading);

// One block-fading slot. shadowing_db, when given, holds one value per user;
// otherwise it is drawn here.
ChannelSnapshot draw_snapshot(const SystemConfig &config, const FadingConfig &fading, const UserPlacement &placement,
                              Rng &rng, const std::optional<VectorXd> &shadowing_db = std::nullopt);

// Estimated channel h + e with e ~ CN(0, variance * mean_gain_i). Zero variance
// returns the input unchanged without touching rng.
ChannelSnapshot perturb_csi(const ChannelSnapshot &snapshot, const UserPlacement &placement,
                            const FadingConfig &fading, double csi_error_variance, Rng &rng);

// The snapshot the scheduler plans on and the one its rates are scored on.
struct SlotChannel
{
    ChannelSnapshot planning;
    ChannelSnapshot actual;
};

class ChannelSource
{
public:
    virtual ~ChannelSource() = default;
    // Empty once the source is exhausted.
    virtual std::optional<SlotChannel> next() = 0;
};

// Statistical generator: one RNG stream, i.i.d. slots.
class FadingChannelSource : public ChannelSource
{
public:
    FadingChannelSource(SystemConfig config, FadingConfig fading, UserPlacement placement);

    std::optional<SlotChannel> next() override;
    const UserPlacement &placement() const { return placement_; }

private:
    SystemConfig config_;
    FadingConfig fading_;
    UserPlacement placement_;
    Rng rng_;
    std::optional<VectorXd> shadowing_;
};

// Replays a fixed list of snapshots, planning on the true channel.
class ReplayChannelSource : public ChannelSource
{
public:
    explicit ReplayChannelSource(std::vector<ChannelSnapshot> snapshots, bool loop = false);
    std::optional<SlotChannel> next() override;

private:
    std::vector<ChannelSnapshot> snapshots_;
    std::size_t cursor_ = 0;
    bool loop_;
};

// CSV replay format, one row per (slot, subchannel, user):
//   slot,subchannel,user,gain_re,gain_im,noise_w
void write_snapshots_csv(std::ostream &os, const std::vector<ChannelSnapshot> &snapshots);
std::vector<ChannelSnapshot> read_snapshots_csv(std::istream &is);

} // namespace mcnoma

#endif
