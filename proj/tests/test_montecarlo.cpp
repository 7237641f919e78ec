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

#include "fpauth/montecarlo.hpp"
#include "support.hpp"

using namespace fpauth;
using doctest::Approx;
using fpauth::testing::manual_channel;
using fpauth::testing::random_matrix;

namespace
{
    TrialPlan small_plan(int tag_length, int trials)
    {
        TrialPlan plan;
        plan.cfg.tag_length = tag_length;
        for (auto &pt : strategy_splits(Strategy::fixed_psi(0.02), {0.5, 0.8}))
            plan.splits.push_back({"fixed_psi:0.02", pt});
        for (auto &pt : strategy_splits(Strategy::fixed_omega(100.0), {0.6}))
            plan.splits.push_back({"fixed_omega:100", pt});
        plan.ptx_dbm = {0.0, 10.0};
        plan.n_trials = trials;
        plan.seed = 77;
        return plan;
    }

    TransmitBlock random_block(RandomSource &rng, int lt, int k, int z)
    {
        TransmitBlock b;
        b.data.resize(lt, k);
        b.tags.resize(lt, k);
        b.an.resize(lt, z);
        for (int i = 0; i < k; ++i)
        {
            rng.fill_complex_normal(b.data.col(i));
            rng.fill_complex_normal(b.tags.col(i));
        }
        for (int i = 0; i < z; ++i)
            rng.fill_complex_normal(b.an.col(i));
        return b;
    }
}

TEST_SUITE("montecarlo")
{
    TEST_CASE("received block synthesis: degenerate cases")
    {
        SystemConfig cfg;
        const auto ch = sample_realization(cfg, RngStream{1, 1});
        const auto pre = build_precoders(ch.users, 0.0, 0.7, 10);
        const LinkState link{ch, pre, PowerSplit::make(1.0, 0.7, 0.02), 0.0, 32};
        TransmitBlock zero{ComplexMatrix::Zero(32, 6), ComplexMatrix::Zero(32, 6), ComplexMatrix::Zero(32, 10)};
        CHECK(synthesize_received_user(link, zero, ComplexVector::Zero(32), 2).cwiseAbs().maxCoeff() == 0.0);
        CHECK(synthesize_received_eve(link, zero, ComplexMatrix::Zero(6, 32)).cwiseAbs().maxCoeff() == 0.0);
        CHECK_THROWS_AS(synthesize_received_user(link, zero, ComplexVector::Zero(31), 2), std::invalid_argument);
        CHECK_THROWS_AS(synthesize_received_eve(link, zero, ComplexMatrix::Zero(6, 31)), std::invalid_argument);

        // single user, no noise, no AN, P_t = 0
        const auto one = manual_channel(random_matrix(2, 4, 1), random_matrix(3, 4, 2));
        const PrecoderSet p1{normalize_data_precoder(rzf_precoder(one.users, 0.0), 1.0), ComplexMatrix(4, 0), 0.0, 1.0};
        const LinkState l1{one, p1, PowerSplit::make(3.0, 1.0, 0.0), 0.0, 16};
        RandomSource rng(RngStream{1, 2});
        TransmitBlock b{sample_complex_normal(rng, 16), sample_complex_normal(rng, 16), ComplexMatrix(16, 0)};
        const cdouble g = one.h(0).dot(p1.w.col(0));
        const ComplexVector expected = std::sqrt(3.0) * g * b.data.col(0).conjugate();
        CHECK((synthesize_received_user(l1, b, ComplexVector::Zero(16), 0) - expected).cwiseAbs().maxCoeff() <= 1e-15);

        // Eve sees a rank-one block
        const auto ye = synthesize_received_eve(l1, b, ComplexMatrix::Zero(2, 16));
        Eigen::JacobiSVD<ComplexMatrix> svd(ye);
        CHECK(svd.singularValues()[1] <= 1e-12 * svd.singularValues()[0]);
        const ComplexVector dir = one.eve.adjoint() * p1.w.col(0);
        CHECK((ye - std::sqrt(3.0) * dir * b.data.col(0).adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
    }

    TEST_CASE("empirical sinr from long blocks")
    {
        SystemConfig cfg;
        const auto ch = sample_realization(cfg, RngStream{4, 1});
        const double ptx = dbm_to_watts(10.0);
        const double noise = noise_variance(cfg);
        const double beta = 6.0 * noise / ptx;
        const auto pre = build_precoders(ch.users, beta, 0.7, 10);
        const auto split = PowerSplit::make(ptx, 0.7, 0.0);
        const LinkState link{ch, pre, split, noise, 10000};
        RandomSource rng(RngStream{4, 2});
        const auto b = random_block(rng, 10000, 6, 10);
        const ComplexVector n = std::sqrt(noise) * sample_complex_normal(rng, 10000);
        for (int u : {0, 5})
        {
            const auto y = synthesize_received_user(link, b, n, u);
            const cdouble g = ch.h(u).dot(pre.w.col(u));
            const ComplexVector sig = std::sqrt(ptx * split.p_s()) * g * b.data.col(u).conjugate();
            const double ratio = sig.squaredNorm() / (y - sig).squaredNorm();
            CHECK(ratio == Approx(sinr(u, pre.w, pre.v, ch.users, split.p_s(), ptx / noise)).epsilon(0.05));
        }
    }

    TEST_CASE("eavesdropper noise power and determinism")
    {
        TrialPlan plan = small_plan(128, 1);
        plan.with_ml_attack = true;
        plan.cfg.tag_length = 20000;
        const RealizationRunner runner(plan, 0);
        const auto d = runner.draw(3);
        const auto &p = runner.points()[0];
        const auto link = p.link(runner);
        TransmitBlock zero{ComplexMatrix::Zero(20000, 6), ComplexMatrix::Zero(20000, 6), ComplexMatrix::Zero(20000, 10)};
        const ComplexMatrix noise = std::sqrt(runner.noise_var()) * d.eve_noise;
        const auto y = synthesize_received_eve(link, zero, noise);
        CHECK(y.squaredNorm() / double(y.size()) == Approx(runner.noise_var()).epsilon(0.03));
        const auto again = runner.draw(3);
        CHECK(again.block.data == d.block.data);
        CHECK(again.eve_noise == d.eve_noise);
        CHECK(synthesize_received_eve(link, again.block, noise) == synthesize_received_eve(link, d.block, noise));
    }

    TEST_CASE("radiated power matches the budget")
    {
        SystemConfig cfg;
        const auto ch = sample_realization(cfg, RngStream{5, 1});
        const auto pre = build_precoders(ch.users, 1e-3, 0.6, 10);
        const auto split = PowerSplit::make(2.5, 0.6, 0.04);
        RandomSource rng(RngStream{5, 2});
        const auto b = random_block(rng, 20000, 6, 10);
        const auto x = transmit_signal(pre, split, b);
        CHECK(x.rows() == 16);
        CHECK(x.squaredNorm() / 20000.0 == Approx(2.5).epsilon(0.02));
    }

    TEST_CASE("trial draws")
    {
        TrialPlan plan = small_plan(64, 10);
        const RealizationRunner runner(plan, 0);
        const auto d = runner.draw(5);
        CHECK(d.block.data.rows() == 64);
        CHECK(d.block.tags.cols() == 6);
        CHECK(d.block.an.cols() == 10);
        CHECK(d.eve_noise.size() == 0); // attack off
        CHECK(d.eve_target == 5 % 6);
        for (int k = 0; k < 6; ++k)
        {
            CHECK(d.keys[std::size_t(k)] < plan.eve_key_space_mc);
            CHECK(d.wrong_keys[std::size_t(k)] != d.keys[std::size_t(k)]);
            CHECK(d.wrong_keys[std::size_t(k)] < plan.eve_key_space_mc);
            CHECK(d.block.tags.col(k) == generate_tag(d.block.data.col(k), TagKey::from_index(d.keys[std::size_t(k)])));
            CHECK(d.wrong_tags.col(k) ==
                  generate_tag(d.block.data.col(k), TagKey::from_index(d.wrong_keys[std::size_t(k)])));
        }
        CHECK(runner.draw(6).block.data != d.block.data);
    }

    TEST_CASE("expanded statistic agrees with the literal receiver")
    {
        TrialPlan plan = small_plan(256, 5);
        plan.cfg.rzf_beta = 1e-9; // visible multiuser interference
        const RealizationRunner runner(plan, 1);
        REQUIRE(runner.points().size() == 6);
        for (std::uint64_t t = 0; t < 5; ++t)
        {
            const auto d = runner.draw(t);
            const auto inner = runner.user_inner_products(d);
            for (std::size_t p = 0; p < runner.points().size(); ++p)
                for (int u = 0; u < 6; ++u)
                    for (bool wrong : {false, true})
                    {
                        const double lit = runner.user_statistic_literal(d, p, u, wrong);
                        const double fast = runner.user_statistic_fast(inner, p, u, wrong);
                        CHECK(std::abs(lit - fast) <= 1e-9 * (std::abs(lit) + 256.0));
                    }
        }
    }

    TEST_CASE("analytic-only plans carry no empirical fields")
    {
        TrialPlan plan = small_plan(256, 10);
        plan.analytic_only = true;
        plan.n_realizations = 2;
        const auto recs = run_trials(plan);
        CHECK(recs.size() == 2 * 3 * 2);
        for (const auto &r : recs)
        {
            CHECK(r.analytic.has_value());
            CHECK_FALSE(r.empirical.has_value());
            CHECK(r.analytic->p_d >= 0.0);
            CHECK(r.analytic->p_d <= 1.0);
            CHECK(r.analytic->p_d_user.size() == 6);
        }
        CHECK(recs[0].realization == 0);
        CHECK(recs.back().realization == 1);
        CHECK(recs[1].ptx_dbm == 10.0);
        CHECK(recs[2].phi == 0.8);
    }

    TEST_CASE("infeasible splits are reported per record")
    {
        TrialPlan plan = small_plan(64, 20);
        for (auto &pt : strategy_splits(Strategy::fixed_psi(0.02), {0.01}))
            plan.splits.push_back({"fixed_psi:0.02", pt});
        const auto recs = run_trials(plan);
        CHECK(recs.size() == 4 * 2);
        CHECK_FALSE(recs[6].error.empty());
        CHECK_FALSE(recs[6].analytic.has_value());
        CHECK_FALSE(recs[6].empirical.has_value());
        CHECK(recs[0].error.empty());
        CHECK(recs[0].empirical->p_d.trials == 20 * 6);
    }

    TEST_CASE("plan validation")
    {
        TrialPlan plan = small_plan(64, 10);
        CHECK_NOTHROW(plan.validate());
        plan.eve_key_space_mc = 5000;
        CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
        plan = small_plan(64, 0);
        CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
        plan = small_plan(64, 10);
        plan.ptx_dbm.clear();
        CHECK_THROWS_AS(run_trials(plan), std::invalid_argument);
    }

    TEST_CASE("proportions")
    {
        Proportion p{30, 100};
        CHECK(p.rate() == 0.3);
        CHECK(p.ci_half_width() == Approx(1.96 * std::sqrt(0.3 * 0.7 / 100.0)).epsilon(1e-15));
        p += Proportion{10, 100};
        CHECK(p.rate() == 0.2);
        CHECK(Proportion{}.rate() == 0.0);
        CHECK(Proportion{}.ci_half_width() == 0.0);
    }

    TEST_CASE("worker count does not change the results")
    {
        TrialPlan plan = small_plan(128, 40);
        plan.with_ml_attack = true;
        plan.eve_key_space_mc = 16;
        const RealizationRunner runner(plan, 0);
        const auto a = runner.run(1);
        const auto b = runner.run(3);
        for (std::size_t p = 0; p < runner.points().size(); ++p)
            for (int u = 0; u < 6; ++u)
            {
                CHECK(a.detect[p][std::size_t(u)].successes == b.detect[p][std::size_t(u)].successes);
                CHECK(a.false_alarm[p][std::size_t(u)].successes == b.false_alarm[p][std::size_t(u)].successes);
                CHECK(a.key[p][std::size_t(u)].successes == b.key[p][std::size_t(u)].successes);
                CHECK(a.key[p][std::size_t(u)].trials == b.key[p][std::size_t(u)].trials);
            }
        const auto ra = runner.records(&a);
        const auto rb = runner.records(&b);
        for (std::size_t i = 0; i < ra.size(); ++i)
            CHECK(ra[i].empirical->p_k_mc_analytic == rb[i].empirical->p_k_mc_analytic);
    }

    TEST_CASE("empirical detection agrees with the closed form")
    {
        TrialPlan plan = small_plan(256, 10000);
        plan.splits.resize(2);
        plan.ptx_dbm = {-5.0, 0.0};
        const auto recs = run_trials(plan);
        int agree = 0, total = 0;
        for (const auto &r : recs)
        {
            const auto &a = *r.analytic;
            const auto &e = *r.empirical;
            for (std::size_t u = 0; u < 6; ++u)
            {
                CHECK(std::abs(e.p_d_user[u].rate() - a.p_d_user[u]) <= 0.02);
                // half-width from the analytic rate so that empirical 0 or 1 does not collapse it
                const double hw = 1.96 * std::sqrt(a.p_d_user[u] * (1.0 - a.p_d_user[u]) / double(e.p_d_user[u].trials));
                agree += std::abs(e.p_d_user[u].rate() - a.p_d_user[u]) <= 3.0 * hw;
                ++total;
            }
        }
        CHECK(agree >= 0.95 * total);
    }
}
