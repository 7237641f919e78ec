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

#include "fpauth/montecarlo.hpp"

#include <cmath>
#include <algorithm>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fpauth/errors.hpp"

namespace fpauth
{
    namespace
    {
        constexpr std::uint64_t channel_stream = 1;
        constexpr std::uint64_t trial_stream = 2;
    }

    void TrialPlan::validate() const
    {
        cfg.validate();
        if (splits.empty())
            throw std::invalid_argument("Trial plan has no power splits.");
        if (ptx_dbm.empty())
            throw std::invalid_argument("Trial plan has no transmit powers.");
        if (n_realizations < 1 || n_trials < 1)
            throw std::invalid_argument("Trial plan needs at least one realization and one trial.");
        if (eve_key_space_mc < 2 || eve_key_space_mc > max_eve_key_space_mc)
            throw std::invalid_argument("eve_key_space_mc must lie in [2, " + std::to_string(max_eve_key_space_mc) + "].");
    }

    double Proportion::ci_half_width() const
    {
        if (trials == 0)
            return 0.0;
        const double p = rate();
        return 1.96 * std::sqrt(p * (1.0 - p) / double(trials));
    }

    // ---------- Received-signal synthesis ----------

    ComplexMatrix transmit_signal(const PrecoderSet &precoders, const PowerSplit &split, const TransmitBlock &block)
    {
        const double a = std::sqrt(split.ptx_watts);
        const ComplexMatrix x = std::sqrt(split.p_s()) * block.data + std::sqrt(split.p_t) * block.tags;
        ComplexMatrix out = a * precoders.w * x.transpose();
        if (precoders.v.cols() > 0)
            out.noalias() += a * precoders.v * block.an.transpose();
        return out;
    }

    ComplexVector synthesize_received_user(const LinkState &link, const TransmitBlock &block, const ComplexVector &noise,
                                           int u)
    {
        const auto lt = block.data.rows();
        if (block.tags.rows() != lt || noise.size() != lt || (block.an.cols() > 0 && block.an.rows() != lt))
            throw std::invalid_argument("synthesize_received_user: sequences differ in length.");
        const auto &sp = link.split;
        const auto hu = link.channel.h(u);
        const double a = std::sqrt(sp.ptx_watts);

        ComplexVector row = noise.conjugate();
        for (Eigen::Index k = 0; k < link.precoders.w.cols(); ++k)
        {
            const cdouble g = hu.dot(link.precoders.w.col(k));
            row += (a * g) * (std::sqrt(sp.p_s()) * block.data.col(k) + std::sqrt(sp.p_t) * block.tags.col(k)).conjugate();
        }
        for (Eigen::Index i = 0; i < link.precoders.v.cols(); ++i)
            row += (a * hu.dot(link.precoders.v.col(i))) * block.an.col(i).conjugate();
        return row;
    }

    ComplexMatrix synthesize_received_eve(const LinkState &link, const TransmitBlock &block, const ComplexMatrix &noise)
    {
        const auto lt = block.data.rows();
        const auto &he = link.channel.eve;
        if (block.tags.rows() != lt || noise.cols() != lt || noise.rows() != he.cols() ||
            (block.an.cols() > 0 && block.an.rows() != lt))
            throw std::invalid_argument("synthesize_received_eve: sequences differ in length.");
        const auto &sp = link.split;
        const double a = std::sqrt(sp.ptx_watts);
        const ComplexMatrix x = std::sqrt(sp.p_s()) * block.data + std::sqrt(sp.p_t) * block.tags;
        ComplexMatrix out = noise;
        out.noalias() += (a * he.adjoint() * link.precoders.w) * x.adjoint();
        if (link.precoders.v.cols() > 0)
            out.noalias() += (a * he.adjoint() * link.precoders.v) * block.an.adjoint();
        return out;
    }

    // ---------- RealizationRunner ----------

    LinkState RealizationRunner::Point::link(const RealizationRunner &r) const
    {
        return LinkState{r.channel_, precoders, split, r.noise_var_, r.plan_.cfg.tag_length};
    }

    RealizationRunner::RealizationRunner(const TrialPlan &plan, int realization)
        : plan_(plan), realization_(realization),
          channel_(sample_realization(plan.cfg, RngStream{plan.seed, channel_stream}.substream(std::uint64_t(realization)))),
          noise_var_(noise_variance(plan.cfg))
    {
        const auto &cfg = plan.cfg;
        const int k_users = cfg.n_users;
        const int z = cfg.an_streams();
        const ComplexMatrix v_dir = an_precoder(channel_.users);

        std::vector<ComplexMatrix> w_dirs;
        for (double dbm : plan.ptx_dbm)
        {
            const double rho = dbm_to_watts(dbm) / noise_var_;
            betas_.push_back(cfg.rzf_beta.value_or(double(k_users) / rho));
            w_dirs.push_back(rzf_precoder(channel_.users, betas_.back()));
        }

        for (std::size_t s = 0; s < plan.splits.size(); ++s)
        {
            const auto &sp = plan.splits[s].point;
            if (!sp.feasible())
                continue;
            for (std::size_t p = 0; p < plan.ptx_dbm.size(); ++p)
            {
                Point pt;
                pt.split_index = s;
                pt.ptx_index = p;
                pt.split = sp.at(dbm_to_watts(plan.ptx_dbm[p]));
                pt.precoders = build_precoders(w_dirs[p], v_dir, betas_[p], pt.split.phi, z);
                pt.gains = channel_.users.adjoint() * pt.precoders.w;
                pt.leak = channel_.users.adjoint() * pt.precoders.v;

                const LinkState link = pt.link(*this);
                AnalyticMetrics am;
                for (int u = 0; u < k_users; ++u)
                {
                    pt.user_stats.push_back(user_hypothesis_stats(link, u));
                    pt.eve_stats.push_back(eve_hypothesis_stats(link, u));
                    pt.tau0.push_back(detection_threshold(cfg.p_fa, std::sqrt(pt.user_stats.back().var0)));
                    am.p_d_user.push_back(detection_probability(pt.user_stats.back(), pt.tau0.back()));
                    am.p_k_user.push_back(key_detection_probability(pt.eve_stats.back(), cfg.key_space_size));
                    am.p_k_asymptotic_user.push_back(asymptotic_key_detection_probability(link, u, cfg.key_space_size));
                    if (plan.with_ml_attack && !plan.analytic_only)
                        am.p_k_mc_user.push_back(key_detection_probability(pt.eve_stats.back(), plan.eve_key_space_mc));
                }
                auto mean = [](const std::vector<double> &v)
                {
                    double s = 0.0;
                    for (double x : v)
                        s += x;
                    return v.empty() ? 0.0 : s / double(v.size());
                };
                am.p_d = mean(am.p_d_user);
                am.p_k = mean(am.p_k_user);
                am.p_k_asymptotic = mean(am.p_k_asymptotic_user);
                am.sum_rate = sum_rate(pt.precoders.w, pt.precoders.v, channel_.users, pt.split.p_s(),
                                       pt.split.ptx_watts / noise_var_, SinrOptions{cfg.tag_in_sinr, pt.split.p_t});
                points_.push_back(std::move(pt));
                analytic_.push_back(std::move(am));
            }
        }
    }

    TrialDraw RealizationRunner::draw(std::uint64_t trial) const
    {
        const auto &cfg = plan_.cfg;
        const int k_users = cfg.n_users;
        const int lt = cfg.tag_length;
        const auto key_space = plan_.eve_key_space_mc;
        RandomSource rng(RngStream{plan_.seed, trial_stream}.substream(std::uint64_t(realization_)).substream(trial));

        TrialDraw d;
        d.block.data.resize(lt, k_users);
        d.block.tags.resize(lt, k_users);
        d.wrong_tags.resize(lt, k_users);
        for (int k = 0; k < k_users; ++k)
            rng.fill_complex_normal(d.block.data.col(k));

        std::vector<TagGenerator> generators;
        generators.reserve(std::size_t(k_users));
        for (int k = 0; k < k_users; ++k)
        {
            generators.emplace_back(d.block.data.col(k));
            d.keys.push_back(rng.uniform_index(key_space));
            generators.back().generate(TagKey::from_index(d.keys.back()), d.block.tags.col(k));
        }

        d.block.an.resize(lt, cfg.an_streams());
        for (int i = 0; i < cfg.an_streams(); ++i)
            rng.fill_complex_normal(d.block.an.col(i));
        d.user_noise.resize(lt, k_users);
        for (int k = 0; k < k_users; ++k)
            rng.fill_complex_normal(d.user_noise.col(k));

        for (int k = 0; k < k_users; ++k)
        {
            d.wrong_keys.push_back((d.keys[k] + 1 + rng.uniform_index(key_space - 1)) % key_space);
            generators[k].generate(TagKey::from_index(d.wrong_keys.back()), d.wrong_tags.col(k));
        }

        d.eve_target = int(trial % std::uint64_t(k_users));
        if (plan_.with_ml_attack)
        {
            d.eve_noise.resize(cfg.n_eve_antennas, lt);
            for (int m = 0; m < cfg.n_eve_antennas; ++m)
            {
                ComplexVector row(lt);
                rng.fill_complex_normal(row);
                d.eve_noise.row(m) = row.transpose();
            }
        }
        return d;
    }

    ComplexMatrix RealizationRunner::user_inner_products(const TrialDraw &d) const
    {
        const int k_users = plan_.cfg.n_users;
        const int z = plan_.cfg.an_streams();
        const auto lt = d.block.data.rows();
        ComplexMatrix base(lt, 3 * k_users + z);
        base << d.block.data, d.block.tags, d.block.an, d.user_noise;
        ComplexMatrix expected(lt, 2 * k_users);
        expected << d.block.tags, d.wrong_tags;
        return base.adjoint() * expected;
    }

    double RealizationRunner::user_statistic_fast(const ComplexMatrix &inner, std::size_t p, int u, bool wrong) const
    {
        const auto &pt = points_[p];
        const int k_users = plan_.cfg.n_users;
        const int z = plan_.cfg.an_streams();
        const Eigen::Index col = wrong ? k_users + u : u;
        const double sqrt_ps = std::sqrt(pt.split.p_s());
        const double sqrt_pt = std::sqrt(pt.split.p_t);
        const cdouble denom = sqrt_pt * pt.gains(u, u);

        cdouble acc = inner(k_users + u, col);
        for (int k = 0; k < k_users; ++k)
            if (k != u)
                acc += pt.gains(u, k) / denom * (sqrt_ps * inner(k, col) + sqrt_pt * inner(k_users + k, col));
        for (int i = 0; i < z; ++i)
            acc += pt.leak(u, i) / denom * inner(2 * k_users + i, col);
        acc += std::sqrt(noise_var_ / pt.split.ptx_watts) / denom * inner(2 * k_users + z + u, col);
        return acc.real();
    }

    double RealizationRunner::user_statistic_literal(const TrialDraw &d, std::size_t p, int u, bool wrong) const
    {
        const auto &pt = points_[p];
        const LinkState link = pt.link(*this);
        const ComplexVector noise = std::sqrt(noise_var_) * d.user_noise.col(u);
        const ComplexVector received = synthesize_received_user(link, d.block, noise, u);
        const ComplexVector estimate = user_tag_estimate(received, link, u, d.block.data.col(u));
        return correlation_statistic(estimate, wrong ? ComplexVector(d.wrong_tags.col(u)) : ComplexVector(d.block.tags.col(u)));
    }

    void RealizationRunner::accumulate(const TrialDraw &d, Counts &counts) const
    {
        const int k_users = plan_.cfg.n_users;
        const ComplexMatrix inner = user_inner_products(d);
        for (std::size_t p = 0; p < points_.size(); ++p)
        {
            for (int u = 0; u < k_users; ++u)
            {
                const double tau0 = points_[p].tau0[u];
                auto &det = counts.detect[p][u];
                auto &fa = counts.false_alarm[p][u];
                det.trials++;
                det.successes += user_statistic_fast(inner, p, u, false) > tau0;
                fa.trials++;
                fa.successes += user_statistic_fast(inner, p, u, true) > tau0;
            }
        }

        if (!plan_.with_ml_attack)
            return;

        const int target = d.eve_target;
        const auto lt = d.block.data.rows();
        const ComplexMatrix eve_noise = std::sqrt(noise_var_) * d.eve_noise;
        // Row p holds t_e-hat^H for point p, so scores = rows * tag gives t_e-hat^H tag.
        ComplexMatrix rows(Eigen::Index(points_.size()), lt);
        for (std::size_t p = 0; p < points_.size(); ++p)
        {
            const LinkState link = points_[p].link(*this);
            const ComplexMatrix received = synthesize_received_eve(link, d.block, eve_noise);
            rows.row(Eigen::Index(p)) = eve_tag_estimate(received, link, target, d.block).adjoint();
        }

        const TagGenerator generator(d.block.data.col(target));
        ComplexVector candidate(lt);
        Eigen::VectorXd best = Eigen::VectorXd::Constant(rows.rows(), -std::numeric_limits<double>::infinity());
        std::vector<std::uint64_t> best_key(points_.size(), 0);
        for (std::uint64_t key = 0; key < plan_.eve_key_space_mc; ++key)
        {
            generator.generate(TagKey::from_index(key), candidate);
            const Eigen::VectorXd scores = (rows * candidate).real();
            for (Eigen::Index p = 0; p < scores.size(); ++p)
                if (scores[p] > best[p])
                {
                    best[p] = scores[p];
                    best_key[std::size_t(p)] = key;
                }
        }
        for (std::size_t p = 0; p < points_.size(); ++p)
        {
            auto &kp = counts.key[p][target];
            kp.trials++;
            kp.successes += best_key[p] == d.keys[target];
        }
    }

    RealizationRunner::Counts RealizationRunner::run(int workers) const
    {
        const std::size_t k_users = std::size_t(plan_.cfg.n_users);
        auto make_counts = [&]
        {
            Counts c;
            c.detect.assign(points_.size(), std::vector<Proportion>(k_users));
            c.false_alarm = c.detect;
            c.key = c.detect;
            return c;
        };
        workers = std::max(1, std::min(workers, plan_.n_trials));
        std::vector<Counts> partial(std::size_t(workers), make_counts());
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));

        auto work = [&](int w)
        {
            try
            {
                for (int t = w; t < plan_.n_trials; t += workers)
                    accumulate(draw(std::uint64_t(t)), partial[std::size_t(w)]);
            }
            catch (...)
            {
                errors[std::size_t(w)] = std::current_exception();
            }
        };

        if (workers == 1)
            work(0);
        else
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back(work, w);
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);

        Counts total = make_counts();
        for (const auto &c : partial)
            for (std::size_t p = 0; p < points_.size(); ++p)
                for (std::size_t u = 0; u < k_users; ++u)
                {
                    total.detect[p][u] += c.detect[p][u];
                    total.false_alarm[p][u] += c.false_alarm[p][u];
                    total.key[p][u] += c.key[p][u];
                }
        return total;
    }

    std::vector<MetricsRecord> RealizationRunner::records(const Counts *counts) const
    {
        std::vector<MetricsRecord> out;
        std::size_t next = 0;
        for (std::size_t s = 0; s < plan_.splits.size(); ++s)
        {
            const auto &planned = plan_.splits[s];
            for (std::size_t p = 0; p < plan_.ptx_dbm.size(); ++p)
            {
                MetricsRecord rec;
                rec.realization = realization_;
                rec.split_index = s;
                rec.strategy = planned.strategy;
                rec.phi = planned.point.phi;
                rec.p_t = planned.point.p_t;
                rec.ptx_dbm = plan_.ptx_dbm[p];
                rec.beta = betas_[p];
                if (!planned.point.feasible())
                {
                    rec.error = planned.point.error;
                    out.push_back(std::move(rec));
                    continue;
                }
                const std::size_t idx = next++;
                rec.analytic = analytic_[idx];
                if (counts)
                {
                    EmpiricalMetrics em;
                    em.p_d_user = counts->detect[idx];
                    em.p_fa_user = counts->false_alarm[idx];
                    double weighted = 0.0;
                    for (std::size_t u = 0; u < em.p_d_user.size(); ++u)
                    {
                        em.p_d += em.p_d_user[u];
                        em.p_fa += em.p_fa_user[u];
                    }
                    if (plan_.with_ml_attack)
                    {
                        em.p_k_user = counts->key[idx];
                        for (std::size_t u = 0; u < em.p_k_user.size(); ++u)
                        {
                            em.p_k += em.p_k_user[u];
                            weighted += double(em.p_k_user[u].trials) * analytic_[idx].p_k_mc_user[u];
                        }
                        em.p_k_mc_analytic = em.p_k.trials ? weighted / double(em.p_k.trials) : 0.0;
                    }
                    rec.empirical = std::move(em);
                }
                out.push_back(std::move(rec));
            }
        }
        return out;
    }

    std::vector<MetricsRecord> run_trials(const TrialPlan &plan, int workers)
    {
        plan.validate();
        std::vector<MetricsRecord> out;
        for (int r = 0; r < plan.n_realizations; ++r)
        {
            const RealizationRunner runner(plan, r);
            std::vector<MetricsRecord> recs;
            if (plan.analytic_only)
                recs = runner.records(nullptr);
            else
            {
                const auto counts = runner.run(workers);
                recs = runner.records(&counts);
            }
            for (auto &rec : recs)
                out.push_back(std::move(rec));
        }
        return out;
    }
}
