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

#ifndef FPAUTH_CHANNEL_HPP
#define FPAUTH_CHANNEL_HPP

#include <optional>
#include <vector>

#include "fpauth/numerics.hpp"

namespace fpauth
{
    // Scenario constants. Defaults reproduce the reference mmWave UAV downlink:
    // 16-element BS array, 6 single-antenna users, 6-element eavesdropper, 28 GHz.
    struct SystemConfig
    {
        int n_bs_antennas = 16;       // N
        int n_eve_antennas = 6;       // M
        int n_users = 6;              // K
        std::optional<int> n_an;      // Z, defaults to N - K
        int n_paths = 10;             // L_p
        double angular_spread_deg = 10.0;
        double carrier_ghz = 28.0;
        double bandwidth_hz = 100e6;
        double noise_figure_db = 9.0;
        double thermal_noise_dbm_hz = -174.0;
        double spacing_wavelengths = 0.5;
        int tag_length = 2048;        // L_t
        double p_fa = 0.001;
        std::uint64_t key_space_size = 65536;
        double d_h_min = 10.0, d_h_max = 100.0;
        double d_v = 100.0;
        double d_e_min = 50.0, d_e_max = 100.0;
        std::optional<double> rzf_beta; // defaults to K / rho
        bool tag_in_sinr = false;

        int an_streams() const { return n_an.value_or(n_bs_antennas - n_users); }
        double angular_spread_rad() const { return angular_spread_deg * pi / 180.0; }

        // Throws std::invalid_argument naming the first violated constraint.
        void validate() const;
    };

    // Per-realization placement of users and eavesdropper.
    struct Geometry
    {
        std::vector<double> d_h;       // horizontal distance per user (m)
        double d_v = 100.0;            // common vertical distance (m)
        std::vector<double> theta_los; // LoS departure angle per user (rad)
        double d_e = 0.0;              // BS-Eve distance (m)
        double theta_los_e = 0.0;      // LoS departure angle towards Eve (rad)
        double zeta_los_e = 0.0;       // LoS arrival angle at Eve (rad)

        double user_distance(int k) const;
    };

    struct UserChannel
    {
        ComplexVector h;               // N
        std::vector<cdouble> gains;    // alpha_{k,l}
        std::vector<double> aod;       // theta_{k,l}
    };

    struct EveChannel
    {
        ComplexMatrix h;               // N x M
        std::vector<cdouble> gains;
        std::vector<double> aod;       // theta_{e,l}
        std::vector<double> aoa;       // zeta_{e,l}
    };

    struct ChannelRealization
    {
        ComplexMatrix users;           // N x K, column k is h_k
        ComplexMatrix eve;             // N x M
        Geometry geometry;
        std::vector<UserChannel> user_paths;
        EveChannel eve_paths;

        int n_users() const { return int(users.cols()); }
        auto h(int k) const { return users.col(k); }
    };

    // 3GPP UMi pathloss in dB; d in metres, f_c in GHz.
    double pathloss_db(double distance_m, double carrier_ghz);

    // ULA response with unit Euclidean norm.
    ComplexVector steering_vector(double theta, int n, double spacing_wavelengths);

    // sigma_n^2 in watts: thermal density + 10 log10(B) + noise figure.
    double noise_variance(const SystemConfig &cfg);

    Geometry sample_geometry(const SystemConfig &cfg, RandomSource &rng);

    // sqrt(N / L_p) * sum_l (alpha_l / PL) a_N(theta_l), PL applied as amplitude 10^(PL_dB / 20).
    ComplexVector user_channel_from_paths(const std::vector<cdouble> &gains, const std::vector<double> &aod,
                                          double pathloss_db, int n, double spacing_wavelengths);

    ComplexMatrix eve_channel_from_paths(const std::vector<cdouble> &gains, const std::vector<double> &aod,
                                         const std::vector<double> &aoa, double pathloss_db, int n, int m,
                                         double spacing_wavelengths);

    // k is zero-based.
    UserChannel sample_user_channel(const Geometry &geom, int k, const SystemConfig &cfg, RandomSource &rng);
    EveChannel sample_eve_channel(const Geometry &geom, const SystemConfig &cfg, RandomSource &rng);

    // Geometry, each user and Eve are drawn from separate substreams of `stream`.
    ChannelRealization sample_realization(const SystemConfig &cfg, const RngStream &stream);
}

#endif
