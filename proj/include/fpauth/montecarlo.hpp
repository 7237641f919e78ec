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

#ifndef FPAUTH_MONTECARLO_HPP
#define FPAUTH_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpauth/authentication.hpp"
#include "fpauth/powerctl.hpp"

namespace fpauth
{
    struct PlannedSplit
    {
        std::string strategy; // label of the generating strategy
        StrategyPoint point;
    };

    struct TrialPlan
    {
        SystemConfig cfg;
        std::vector<PlannedSplit> splits;
        std::vector<double> ptx_dbm;
        int n_realizations = 1;
        int n_trials = 1000;           // per realization
        std::uint64_t seed = 1;
        bool analytic_only = false;
        bool with_ml_attack = false;
        std::uint64_t eve_key_space_mc = 256;

        static constexpr std::uint64_t max_eve_key_space_mc = 4096;

        void validate() const;
    };

    // Binomial counter with a normal-approximation 95% interval.
    struct Proportion
    {
        std::uint64_t successes = 0;
        std::uint64_t trials = 0;

        double rate() const { return trials ? double(successes) / double(trials) : 0.0; }
        double ci_half_width() const;
        Proportion &operator+=(const Proportion &o)
        {
            successes += o.successes;
            trials += o.trials;
            return *this;
        }
    };

    struct AnalyticMetrics
    {
        double p_d = 0.0;            // mean over users
        double p_k = 0.0;            // mean over users, configured key space
        double p_k_asymptotic = 0.0; // noiseless limit, configured key space
        double sum_rate = 0.0;
        std::vector<double> p_d_user;
        std::vector<double> p_k_user;
        std::vector<double> p_k_asymptotic_user;
        std::vector<double> p_k_mc_user; // at the Monte Carlo key space (ML attack only)
    };

    struct EmpiricalMetrics
    {
        Proportion p_d;   // pooled over users
        Proportion p_fa;  // wrong-key trials, pooled over users
        Proportion p_k;   // ML attack (absent when the attack is off)
        std::vector<Proportion> p_d_user;
        std::vector<Proportion> p_fa_user;
        std::vector<Proportion> p_k_user;
        // Analytic P_K at the Monte Carlo key space, weighted by attack attempts per user.
        double p_k_mc_analytic = 0.0;
    };

    struct MetricsRecord
    {
        int realization = 0;
        std::size_t split_index = 0;
        std::string strategy;
        double phi = 0.0;
        std::optional<double> p_t;
        double ptx_dbm = 0.0;
        double beta = 0.0; // RZF regularization in effect at this P_Tx
        std::string error; // non-empty for infeasible splits

        std::optional<AnalyticMetrics> analytic;
        std::optional<EmpiricalMetrics> empirical;
    };

    // Random sequences of one trial. Noise is unit variance and scaled by sigma_n at use.
    struct TrialDraw
    {
        TransmitBlock block;                 // data, tags, AN
        std::vector<std::uint64_t> keys;     // true key per user
        std::vector<std::uint64_t> wrong_keys;
        ComplexMatrix wrong_tags;            // L_t x K
        ComplexMatrix user_noise;            // L_t x K
        ComplexMatrix eve_noise;             // M x L_t (only with the ML attack)
        int eve_target = 0;
    };

    // Transmitted array signal, N x L_t:
    // sum_k sqrt(P_Tx) w_k (sqrt(P_s) s_k + sqrt(P_t) t_k)^T + sum_i sqrt(P_Tx) v_i z_i^T
    ComplexMatrix transmit_signal(const PrecoderSet &precoders, const PowerSplit &split, const TransmitBlock &block);

    // Entries of y_u^H for one block (length L_t). `noise` is n_u with its final variance.
    ComplexVector synthesize_received_user(const LinkState &link, const TransmitBlock &block, const ComplexVector &noise,
                                           int u);

    // Y_e^H as an M x L_t block; `noise` (M x L_t) is added as is.
    ComplexMatrix synthesize_received_eve(const LinkState &link, const TransmitBlock &block, const ComplexMatrix &noise);

    // All (split, P_Tx) evaluations of one channel realization. Trials draw their sequences
    // once and reuse them for every evaluation point.
    class RealizationRunner
    {
      public:
        RealizationRunner(const TrialPlan &plan, int realization);

        struct Point
        {
            std::size_t split_index = 0;
            std::size_t ptx_index = 0;
            PowerSplit split;
            PrecoderSet precoders;
            std::vector<HypothesisStats> user_stats;
            std::vector<HypothesisStats> eve_stats;
            std::vector<double> tau0;
            // Coefficients of the user-side correlation in terms of base-sequence inner products.
            ComplexMatrix gains; // K x K, h_u^H w_k
            ComplexMatrix leak;  // K x Z, h_u^H v_i

            LinkState link(const RealizationRunner &r) const;
        };

        const ChannelRealization &channel() const { return channel_; }
        const std::vector<Point> &points() const { return points_; }
        double noise_var() const { return noise_var_; }

        TrialDraw draw(std::uint64_t trial) const;

        // Correlation statistic of user u at point p against the true (wrong = false) or
        // wrong-key expected tag. The fast form expands the statistic over precomputed inner
        // products; the literal form synthesizes y_u^H and runs the receiver.
        double user_statistic_literal(const TrialDraw &d, std::size_t p, int u, bool wrong) const;

        struct Counts
        {
            std::vector<std::vector<Proportion>> detect; // [point][user]
            std::vector<std::vector<Proportion>> false_alarm;
            std::vector<std::vector<Proportion>> key;
        };

        void accumulate(const TrialDraw &d, Counts &counts) const;
        Counts run(int workers) const;

        std::vector<MetricsRecord> records(const Counts *counts) const;

        // Inner products B^H E of the base sequences [S T Z N] with the expected tags [T T_wrong].
        ComplexMatrix user_inner_products(const TrialDraw &d) const;
        double user_statistic_fast(const ComplexMatrix &inner, std::size_t p, int u, bool wrong) const;

      private:
        const TrialPlan &plan_;
        int realization_;
        ChannelRealization channel_;
        double noise_var_;
        std::vector<Point> points_;
        std::vector<AnalyticMetrics> analytic_;
        std::vector<double> betas_; // per P_Tx
    };

    // Runs every realization; records are ordered by (realization, split, P_Tx) independently
    // of `workers`.
    std::vector<MetricsRecord> run_trials(const TrialPlan &plan, int workers = 1);
}

#endif
