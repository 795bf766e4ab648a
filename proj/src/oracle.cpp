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


#include "mcnoma/oracle.hpp"
#include "mcnoma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mcnoma::oracle
{

TwoUserBest two_user(double w_psi, double w_phi, double eta_psi, double eta_phi, double bandwidth, double p_bar,
                     int grid_steps)
{
    if (grid_steps < 100)
        throw PreconditionError("two-user oracle needs at least 100 grid steps");
    TwoUserBest best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= grid_steps; ++j)
    {
        const double p_phi = p_bar * static_cast<double>(j) / grid_steps;
        const double p_psi = p_bar - p_phi;
        const double v = w_psi * bandwidth * std::log2(1.0 + p_psi / (p_phi + eta_psi)) +
                         w_phi * bandwidth * std::log2(1.0 + p_phi / eta_phi);
        if (v > best.value)
            best = {p_phi, v};
    }
    return best;
}

double subchannel_weighted_rate(const std::vector<double> &weights, const std::vector<double> &ncr,
                                const std::vector<double> &power, double bandwidth)
{
    double total = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i)
    {
        if (power[i] <= 0.0)
            continue;
        double interference = 0.0;
        for (std::size_t j = 0; j < power.size(); ++j)
        {
            if (j != i && (ncr[j] < ncr[i] || (ncr[j] == ncr[i] && j > i)))
                interference += power[j];
        }
        total += weights[i] * bandwidth * std::log2(1.0 + power[i] / (interference + ncr[i]));
    }
    return total;
}

namespace
{

void simplex_walk(int k, int remaining, int n, const std::vector<std::vector<double>> &table, std::vector<int> &idx,
                  double partial, SimplexBest &best, double step)
{
    if (k == n - 1)
    {
        const double v = table[static_cast<std::size_t>(k)][static_cast<std::size_t>(remaining)];
        if (std::isfinite(v) && partial + v > best.value)
        {
            idx[static_cast<std::size_t>(k)] = remaining;
            best.value = partial + v;
            best.budgets.assign(idx.size(), 0.0);
            for (std::size_t q = 0; q < idx.size(); ++q)
                best.budgets[q] = idx[q] * step;
        }
        return;
    }
    for (int j = 0; j <= remaining; ++j)
    {
        const double v = table[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        if (!std::isfinite(v))
            continue;
        idx[static_cast<std::size_t>(k)] = j;
        simplex_walk(k + 1, remaining - j, n, table, idx, partial + v, best, step);
    }
}

} // namespace

SimplexBest simplex_max(int n_subchannels, double p_max, const VectorXd &caps, int levels,
                        const std::function<double(int, double)> &f)
{
    if (n_subchannels < 1 || levels < 1 || caps.size() != n_subchannels)
        throw PreconditionError("simplex oracle needs at least one subchannel, one level and one cap per subchannel");
    const double step = p_max / levels;
    std::vector<std::vector<double>> table(static_cast<std::size_t>(n_subchannels));
    for (int k = 0; k < n_subchannels; ++k)
    {
        auto &row = table[static_cast<std::size_t>(k)];
        row.resize(static_cast<std::size_t>(levels) + 1);
        for (int j = 0; j <= levels; ++j)
        {
            const double p = j * step;
            row[static_cast<std::size_t>(j)] =
                p <= caps(k) * (1.0 + 1e-12) ? f(k, p) : -std::numeric_limits<double>::infinity();
        }
    }
    SimplexBest best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(static_cast<std::size_t>(n_subchannels), 0);
    simplex_walk(0, levels, n_subchannels, table, idx, 0.0, best, step);
    if (best.budgets.empty())
        throw PreconditionError("no grid point satisfies the per-subchannel caps");
    return best;
}

namespace
{

double two_user_objective(const std::vector<double> &w, const std::vector<double> &eta, double bandwidth, double p,
                          double p_phi)
{
    return w[0] * bandwidth * std::log2(1.0 + (p - p_phi) / (p_phi + eta[0])) +
           w[1] * bandwidth * std::log2(1.0 + p_phi / eta[1]);
}

// Grid search, then golden-section search on the cells next to the best grid point.
double two_user_refined(const std::vector<double> &w, const std::vector<double> &eta, double bandwidth, double p,
                        int split_steps)
{
    const TwoUserBest grid = two_user(w[0], w[1], eta[0], eta[1], bandwidth, p, split_steps);
    const double step = p / split_steps;
    double lo = std::max(0.0, grid.p_phi - step);
    double hi = std::min(p, grid.p_phi + step);
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - r * (hi - lo);
    double b = lo + r * (hi - lo);
    double fa = two_user_objective(w, eta, bandwidth, p, a);
    double fb = two_user_objective(w, eta, bandwidth, p, b);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * p; ++it)
    {
        if (fa < fb)
        {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = two_user_objective(w, eta, bandwidth, p, b);
        }
        else
        {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = two_user_objective(w, eta, bandwidth, p, a);
        }
    }
    return std::max({grid.value, fa, fb});
}

// Best weighted rate of one user subset at budget p; users ordered weakest first.
double subset_value(const std::vector<double> &w, const std::vector<double> &eta, double bandwidth, double p,
                    int split_steps)
{
    const std::size_t m = w.size();
    if (m == 1)
        return w[0] * bandwidth * std::log2(1.0 + p / eta[0]);
    if (m == 2)
        return two_user_refined(w, eta, bandwidth, p, split_steps);

    // Three users: nested grid on the two weaker users' shares.
    const int s = std::max(100, static_cast<int>(std::cbrt(static_cast<double>(split_steps) * split_steps)));
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> power(3);
    for (int a = 0; a <= s; ++a)
    {
        for (int b = 0; a + b <= s; ++b)
        {
            power[0] = p * a / s;
            power[1] = p * b / s;
            power[2] = p - power[0] - power[1];
            best = std::max(best, subchannel_weighted_rate(w, eta, power, bandwidth));
        }
    }
    return best;
}

void for_each_subset(int n, int max_size, const std::function<void(const std::vector<int> &)> &visit)
{
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (!cur.empty())
            visit(cur);
        if (static_cast<int>(cur.size()) == max_size)
            return;
        for (int i = start; i < n; ++i)
        {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace

JointBest joint(const SystemConfig &config, const ChannelSnapshot &snapshot, const VectorXd &effective_weights,
                const JointOptions &options)
{
    const int n = config.n_users;
    const int kk = config.n_subchannels;
    if (n > 5 || kk > 3 || options.power_levels > 200 || options.power_levels < 1)
        throw PreconditionError("oracle refuses instance: N=" + std::to_string(n) + " (max 5), K=" +
                                std::to_string(kk) + " (max 3), power levels=" +
                                std::to_string(options.power_levels) + " (1..200)");
    if (options.pair_limit < 1 || options.pair_limit > 3 || options.pair_limit > config.sic_capacity)
        throw PreconditionError("oracle subset size must lie in [1, min(3, M)]");
    if (snapshot.n_users() != n || snapshot.n_subchannels() != kk || effective_weights.size() != n)
        throw StructuralError("oracle inputs do not match the configuration");

    const MatrixXd &ncr = snapshot.ncr();
    std::vector<std::vector<std::pair<std::vector<double>, std::vector<double>>>> subsets(
        static_cast<std::size_t>(kk));
    for (int k = 0; k < kk; ++k)
    {
        for_each_subset(n, options.pair_limit, [&](const std::vector<int> &users) {
            std::vector<int> order = users;
            // weakest first; equal NCR puts the lower index first
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return ncr(k, a) > ncr(k, b) || (ncr(k, a) == ncr(k, b) && a < b);
            });
            std::vector<double> w, eta;
            for (int i : order)
            {
                w.push_back(effective_weights(i));
                eta.push_back(ncr(k, i));
            }
            subsets[static_cast<std::size_t>(k)].emplace_back(std::move(w), std::move(eta));
        });
    }

    auto value = [&](int k, double p) {
        if (p <= 0.0)
            return 0.0;
        double best = 0.0;
        for (const auto &[w, eta] : subsets[static_cast<std::size_t>(k)])
            best = std::max(best, subset_value(w, eta, config.subchannel_bandwidth_hz(k), p, options.split_steps));
        return best;
    };
    const SimplexBest s =
        simplex_max(kk, config.p_max_watts, config.p_max_per_subchannel_watts, options.power_levels, value);
    return {s.value, s.budgets};
}

} // namespace mcnoma::oracle
