// fpauth - fingerprint-embedded physical-layer authentication simulator
// Copyright (C) 2026 The fpauth authors
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

#include "fpauth/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fpauth
{
    void SystemConfig::validate() const
    {
        auto fail = [](const std::string &what)
        { throw std::invalid_argument("Invalid system configuration: " + what); };

        if (n_users < 1)
            fail("n_users must be at least 1.");
        if (n_bs_antennas <= n_users)
            fail("n_bs_antennas must exceed n_users.");
        if (n_eve_antennas < 1)
            fail("n_eve_antennas must be at least 1.");
        if (n_an && (*n_an < 1 || *n_an > n_bs_antennas - n_users))
            fail("n_an must lie in [1, n_bs_antennas - n_users].");
        if (n_paths < 1)
            fail("n_paths must be at least 1.");
        if (tag_length < 1)
            fail("tag_length must be at least 1.");
        if (!(p_fa > 0.0 && p_fa < 1.0))
            fail("p_fa must lie in (0, 1).");
        if (key_space_size < 2)
            fail("key_space_size must be at least 2.");
        if (!(angular_spread_deg > 0.0))
            fail("angular_spread_deg must be positive.");
        if (!(carrier_ghz > 0.0) || !(bandwidth_hz > 0.0) || !(spacing_wavelengths > 0.0))
            fail("carrier_ghz, bandwidth_hz and spacing_wavelengths must be positive.");
        if (!(d_h_min >= 0.0 && d_h_max >= d_h_min))
            fail("d_h range must satisfy 0 <= d_h_min <= d_h_max.");
        if (!(d_v > 0.0))
            fail("d_v must be positive.");
        if (!(d_e_min > 0.0 && d_e_max >= d_e_min))
            fail("d_e range must satisfy 0 < d_e_min <= d_e_max.");
        if (rzf_beta && !(*rzf_beta >= 0.0))
            fail("rzf_beta must be non-negative.");
    }

    double Geometry::user_distance(int k) const
    {
        return std::hypot(d_h.at(k), d_v);
    }

    double pathloss_db(double distance_m, double carrier_ghz)
    {
        if (!(distance_m > 0.0) || !(carrier_ghz > 0.0))
            throw std::domain_error("pathloss_db: distance and carrier frequency must be positive.");
        return 32.4 + 21.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_ghz);
    }

    ComplexVector steering_vector(double theta, int n, double spacing_wavelengths)
    {
        if (n < 1)
            throw std::invalid_argument("steering_vector: array size must be at least 1.");
        const double phase = -2.0 * pi * spacing_wavelengths * std::sin(theta);
        const double scale = 1.0 / std::sqrt(double(n));
        ComplexVector a(n);
        for (int i = 0; i < n; ++i)
            a[i] = std::polar(scale, phase * i);
        return a;
    }

    double noise_variance(const SystemConfig &cfg)
    {
        const double dbm = cfg.thermal_noise_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
        return dbm_to_watts(DbValue{dbm, PowerUnit::dBm}).value;
    }

    Geometry sample_geometry(const SystemConfig &cfg, RandomSource &rng)
    {
        Geometry g;
        g.d_v = cfg.d_v;
        g.d_h.resize(cfg.n_users);
        g.theta_los.resize(cfg.n_users);
        for (int k = 0; k < cfg.n_users; ++k)
        {
            g.d_h[k] = rng.uniform(cfg.d_h_min, cfg.d_h_max);
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            g.theta_los[k] = sign * std::atan(g.d_h[k] / cfg.d_v);
        }
        g.d_e = rng.uniform(cfg.d_e_min, cfg.d_e_max);
        g.theta_los_e = rng.uniform(-pi / 3.0, pi / 3.0);
        g.zeta_los_e = rng.uniform(-pi / 3.0, pi / 3.0);
        return g;
    }

    ComplexVector user_channel_from_paths(const std::vector<cdouble> &gains, const std::vector<double> &aod,
                                          double pl_db, int n, double spacing_wavelengths)
    {
        if (gains.size() != aod.size() || gains.empty())
            throw std::invalid_argument("user_channel_from_paths: gains and angles must be non-empty and equal length.");
        const double amplitude = std::pow(10.0, -pl_db / 20.0);
        const double scale = std::sqrt(double(n) / double(gains.size())) * amplitude;
        ComplexVector h = ComplexVector::Zero(n);
        for (std::size_t l = 0; l < gains.size(); ++l)
            h += gains[l] * steering_vector(aod[l], n, spacing_wavelengths);
        return scale * h;
    }

    ComplexMatrix eve_channel_from_paths(const std::vector<cdouble> &gains, const std::vector<double> &aod,
                                         const std::vector<double> &aoa, double pl_db, int n, int m,
                                         double spacing_wavelengths)
    {
        if (gains.size() != aod.size() || gains.size() != aoa.size() || gains.empty())
            throw std::invalid_argument("eve_channel_from_paths: path vectors must be non-empty and equal length.");
        const double amplitude = std::pow(10.0, -pl_db / 20.0);
        const double scale = std::sqrt(double(n) * double(m) / double(gains.size())) * amplitude;
        ComplexMatrix h = ComplexMatrix::Zero(n, m);
        for (std::size_t l = 0; l < gains.size(); ++l)
            h += gains[l] * steering_vector(aod[l], n, spacing_wavelengths) *
                 steering_vector(aoa[l], m, spacing_wavelengths).adjoint();
        return scale * h;
    }

    UserChannel sample_user_channel(const Geometry &geom, int k, const SystemConfig &cfg, RandomSource &rng)
    {
        if (k < 0 || k >= int(geom.d_h.size()))
            throw std::out_of_range("sample_user_channel: user index out of range.");
        UserChannel out;
        const double spread = cfg.angular_spread_rad();
        for (int l = 0; l < cfg.n_paths; ++l)
        {
            out.gains.push_back(rng.complex_normal());
            out.aod.push_back(sample_laplace(rng, geom.theta_los[k], spread));
        }
        out.h = user_channel_from_paths(out.gains, out.aod, pathloss_db(geom.user_distance(k), cfg.carrier_ghz),
                                        cfg.n_bs_antennas, cfg.spacing_wavelengths);
        return out;
    }

    EveChannel sample_eve_channel(const Geometry &geom, const SystemConfig &cfg, RandomSource &rng)
    {
        EveChannel out;
        const double spread = cfg.angular_spread_rad();
        for (int l = 0; l < cfg.n_paths; ++l)
        {
            out.gains.push_back(rng.complex_normal());
            out.aod.push_back(sample_laplace(rng, geom.theta_los_e, spread));
            out.aoa.push_back(sample_laplace(rng, geom.zeta_los_e, spread));
        }
        out.h = eve_channel_from_paths(out.gains, out.aod, out.aoa, pathloss_db(geom.d_e, cfg.carrier_ghz),
                                       cfg.n_bs_antennas, cfg.n_eve_antennas, cfg.spacing_wavelengths);
        return out;
    }

    ChannelRealization sample_realization(const SystemConfig &cfg, const RngStream &stream)
    {
        cfg.validate();
        ChannelRealization r;
        RandomSource geo_rng(stream.substream(0));
        r.geometry = sample_geometry(cfg, geo_rng);

        r.users.resize(cfg.n_bs_antennas, cfg.n_users);
        for (int k = 0; k < cfg.n_users; ++k)
        {
            RandomSource rng(stream.substream(1 + std::uint64_t(k)));
            r.user_paths.push_back(sample_user_channel(r.geometry, k, cfg, rng));
            r.users.col(k) = r.user_paths.back().h;
        }
        RandomSource eve_rng(stream.substream(1 + std::uint64_t(cfg.n_users)));
        r.eve_paths = sample_eve_channel(r.geometry, cfg, eve_rng);
        r.eve = r.eve_paths.h;
        return r;
    }
}
