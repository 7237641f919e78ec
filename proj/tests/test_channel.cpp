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

#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "fpauth/channel.hpp"
#include "support.hpp"

using namespace fpauth;
using doctest::Approx;

TEST_SUITE("channel")
{
    TEST_CASE("default configuration matches the reference scenario")
    {
        const SystemConfig c;
        CHECK(c.n_bs_antennas == 16);
        CHECK(c.n_eve_antennas == 6);
        CHECK(c.n_users == 6);
        CHECK(c.an_streams() == 10);
        CHECK(c.n_paths == 10);
        CHECK(c.angular_spread_deg == 10.0);
        CHECK(c.carrier_ghz == 28.0);
        CHECK(c.bandwidth_hz == 1e8);
        CHECK(c.noise_figure_db == 9.0);
        CHECK(c.thermal_noise_dbm_hz == -174.0);
        CHECK(c.spacing_wavelengths == 0.5);
        CHECK(c.tag_length == 2048);
        CHECK(c.p_fa == 0.001);
        CHECK(c.d_h_min == 10.0);
        CHECK(c.d_h_max == 100.0);
        CHECK(c.d_v == 100.0);
        CHECK(c.d_e_min == 50.0);
        CHECK(c.d_e_max == 100.0);
        CHECK_NOTHROW(c.validate());
    }

    TEST_CASE("configuration constraints")
    {
        auto bad = [](auto mutate)
        {
            SystemConfig c;
            mutate(c);
            CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        };
        bad([](SystemConfig &c) { c.n_users = 16; });
        bad([](SystemConfig &c) { c.n_users = 0; });
        bad([](SystemConfig &c) { c.n_an = 11; });
        bad([](SystemConfig &c) { c.n_eve_antennas = 0; });
        bad([](SystemConfig &c) { c.n_paths = 0; });
        bad([](SystemConfig &c) { c.tag_length = 0; });
        bad([](SystemConfig &c) { c.p_fa = 0.0; });
        bad([](SystemConfig &c) { c.p_fa = 1.0; });
        bad([](SystemConfig &c) { c.key_space_size = 1; });
        bad([](SystemConfig &c) { c.d_h_max = 5.0; });

        SystemConfig c;
        c.n_an = 4;
        CHECK_NOTHROW(c.validate());
        CHECK(c.an_streams() == 4);
    }

    TEST_CASE("pathloss")
    {
        CHECK(pathloss_db(1.0, 1.0) == Approx(32.4).epsilon(1e-15));
        CHECK(std::abs(pathloss_db(100.0, 28.0) - (32.4 + 42.0 + 20.0 * std::log10(28.0))) <= 1e-12);
        CHECK(std::abs(pathloss_db(100.0, 28.0) - 103.344) <= 1e-3);
        CHECK(std::abs(pathloss_db(10.0, 28.0) - 82.344) <= 1e-3);
        CHECK(pathloss_db(11.0, 28.0) > pathloss_db(10.0, 28.0));
        CHECK(pathloss_db(10.0, 29.0) > pathloss_db(10.0, 28.0));
        CHECK_THROWS_AS(pathloss_db(0.0, 28.0), std::domain_error);
        CHECK_THROWS_AS(pathloss_db(10.0, -1.0), std::domain_error);
    }

    TEST_CASE("steering vectors")
    {
        const double r = 1.0 / std::sqrt(2.0);
        const auto a0 = steering_vector(0.0, 2, 0.5);
        CHECK(std::abs(a0[0] - cdouble(r, 0)) <= 1e-15);
        CHECK(std::abs(a0[1] - cdouble(r, 0)) <= 1e-15);
        const auto a90 = steering_vector(pi / 2, 2, 0.5);
        CHECK(std::abs(a90[0] - cdouble(r, 0)) <= 1e-15);
        CHECK(std::abs(a90[1] - cdouble(-r, 0)) <= 1e-12);

        const auto p = steering_vector(pi / 6, 4, 0.5);
        const auto m = steering_vector(-pi / 6, 4, 0.5);
        CHECK(std::abs(p.dot(p) - 1.0) <= 1e-12);
        CHECK(std::abs(p.dot(m)) < 1.0);
        // direct formula: element 2 is exp(-j 2 pi 0.5 * 2 sin(pi/6)) / 2
        CHECK(std::abs(p[2] - std::polar(0.5, -2.0 * pi * 0.5 * 2 * 0.5)) <= 1e-12);

        RandomSource rng(RngStream{1, 1});
        for (int i = 0; i < 50; ++i)
            CHECK(std::abs(steering_vector(rng.uniform(-pi / 2, pi / 2), 16, 0.5).norm() - 1.0) <= 1e-12);
        CHECK_THROWS_AS(steering_vector(0.0, 0, 0.5), std::invalid_argument);
    }

    TEST_CASE("noise variance")
    {
        SystemConfig c;
        CHECK(std::abs(noise_variance(c) - std::pow(10.0, -11.5)) <= 1e-15);
        CHECK(std::abs(noise_variance(c) - 3.1623e-12) <= 1e-15);
        c.bandwidth_hz = 1.0;
        c.noise_figure_db = 0.0;
        CHECK(noise_variance(c) == Approx(std::pow(10.0, -20.4)).epsilon(1e-12));
        SystemConfig d;
        d.bandwidth_hz *= 2;
        CHECK(10.0 * std::log10(noise_variance(d) / noise_variance(SystemConfig{})) == Approx(3.0103).epsilon(1e-5));
    }

    TEST_CASE("geometry draws")
    {
        const SystemConfig c;
        RandomSource rng(RngStream{4, 4});
        double sum = 0.0, lo = 1e9, hi = -1e9;
        int n = 0;
        bool angles_ok = true, dist_ok = true;
        for (int i = 0; i < 100000 / c.n_users; ++i)
        {
            const auto g = sample_geometry(c, rng);
            for (int k = 0; k < c.n_users; ++k, ++n)
            {
                sum += g.d_h[k];
                lo = std::min(lo, g.d_h[k]);
                hi = std::max(hi, g.d_h[k]);
                dist_ok = dist_ok && g.user_distance(k) >= 100.0;
                angles_ok = angles_ok && std::abs(g.theta_los[k]) < pi / 2 &&
                            std::abs(std::abs(g.theta_los[k]) - std::atan(g.d_h[k] / g.d_v)) < 1e-15;
            }
            angles_ok = angles_ok && std::abs(g.theta_los_e) < pi / 3 && std::abs(g.zeta_los_e) < pi / 3;
            dist_ok = dist_ok && g.d_e >= 50.0 && g.d_e <= 100.0;
        }
        CHECK(lo >= 10.0);
        CHECK(hi <= 100.0);
        CHECK(std::abs(sum / n - 55.0) <= 1.0);
        CHECK(angles_ok);
        CHECK(dist_ok);

        RandomSource a(RngStream{4, 5}), b(RngStream{4, 5});
        const auto ga = sample_geometry(c, a), gb = sample_geometry(c, b);
        CHECK(ga.d_h == gb.d_h);
        CHECK(ga.theta_los == gb.theta_los);
        CHECK(ga.d_e == gb.d_e);
    }

    TEST_CASE("single-path user channel")
    {
        const double theta = 0.4;
        const auto h = user_channel_from_paths({cdouble(1, 0)}, {theta}, 0.0, 16, 0.5);
        CHECK((h - 4.0 * steering_vector(theta, 16, 0.5)).norm() <= 1e-12);
        CHECK(h.norm() == Approx(4.0).epsilon(1e-12));
    }

    TEST_CASE("user channel power follows the pathloss")
    {
        const SystemConfig c;
        Geometry g;
        g.d_h = {40.0};
        g.d_v = 100.0;
        g.theta_los = {0.38};
        const double pl = pathloss_db(g.user_distance(0), c.carrier_ghz);
        RandomSource rng(RngStream{8, 1});
        double acc = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i)
            acc += sample_user_channel(g, 0, c, rng).h.squaredNorm();
        CHECK(acc / n == Approx(c.n_bs_antennas * std::pow(10.0, -pl / 10.0)).epsilon(0.03));
        CHECK_THROWS_AS(sample_user_channel(g, 1, c, rng), std::out_of_range);
    }

    TEST_CASE("vanishing spread collapses onto the line of sight")
    {
        SystemConfig c;
        c.angular_spread_deg = 1e-6 * 180.0 / pi;
        Geometry g;
        g.d_h = {70.0};
        g.theta_los = {-0.6};
        RandomSource rng(RngStream{8, 2});
        const auto h = sample_user_channel(g, 0, c, rng).h;
        const double align = std::abs(h.dot(steering_vector(-0.6, c.n_bs_antennas, 0.5))) / h.norm();
        CHECK(std::abs(align - 1.0) <= 1e-3);
    }

    TEST_CASE("path angles concentrate around the line of sight")
    {
        const SystemConfig c;
        Geometry g;
        g.d_h = {50.0};
        g.theta_los = {0.2};
        RandomSource rng(RngStream{8, 3});
        int inside = 0, total = 0;
        while (total < 100000)
        {
            const auto ch = sample_user_channel(g, 0, c, rng);
            for (double a : ch.aod)
            {
                inside += std::abs(a - 0.2) <= 3.0 * c.angular_spread_rad();
                ++total;
            }
        }
        CHECK(double(inside) / total >= 0.94);
    }

    TEST_CASE("eavesdropper channel")
    {
        SystemConfig c;
        Geometry g;
        g.d_e = 75.0;
        g.theta_los_e = 0.1;
        g.zeta_los_e = -0.3;

        auto rank = [](const ComplexMatrix &m)
        {
            Eigen::JacobiSVD<ComplexMatrix> svd(m);
            const auto &s = svd.singularValues();
            int r = 0;
            for (Eigen::Index i = 0; i < s.size(); ++i)
                r += s[i] > 1e-10 * s[0];
            return r;
        };

        c.n_paths = 1;
        RandomSource r1(RngStream{3, 1});
        CHECK(rank(sample_eve_channel(g, c, r1).h) == 1);
        c.n_paths = 3;
        CHECK(rank(sample_eve_channel(g, c, r1).h) <= 3);
        c.n_paths = 10;
        const auto e = sample_eve_channel(g, c, r1).h;
        CHECK(e.rows() == 16);
        CHECK(e.cols() == 6);
        CHECK(rank(e) <= 6);

        const double pl = pathloss_db(g.d_e, c.carrier_ghz);
        double acc = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i)
            acc += sample_eve_channel(g, c, r1).h.squaredNorm();
        CHECK(acc / n == Approx(16.0 * 6.0 * std::pow(10.0, -pl / 10.0)).epsilon(0.03));

        RandomSource a(RngStream{3, 2}), b(RngStream{3, 2});
        CHECK(sample_eve_channel(g, c, a).h == sample_eve_channel(g, c, b).h);
    }

    TEST_CASE("realizations are pure functions of the stream")
    {
        const SystemConfig c;
        const auto a = sample_realization(c, RngStream{12, 1}.substream(3));
        const auto b = sample_realization(c, RngStream{12, 1}.substream(3));
        CHECK(a.users == b.users);
        CHECK(a.eve == b.eve);
        CHECK(a.users.cols() == 6);
        CHECK(a.n_users() == 6);
        CHECK(a.users != sample_realization(c, RngStream{12, 1}.substream(4)).users);
        for (int k = 0; k < c.n_users; ++k)
            CHECK(a.h(k) == a.user_paths[std::size_t(k)].h);
    }
}
