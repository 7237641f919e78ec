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

#include "fpauth/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>
#include <variant>

#include <fmt/format.h>
#include "json.hpp"

#include "fpauth/errors.hpp"

namespace fpauth
{
    namespace
    {
        using Cell = std::variant<std::monostate, long long, double, std::string>;

        std::string csv_cell(const Cell &c)
        {
            if (std::holds_alternative<long long>(c))
                return std::to_string(std::get<long long>(c));
            if (std::holds_alternative<double>(c))
                return fmt::format("{:.12g}", std::get<double>(c));
            if (std::holds_alternative<std::string>(c))
            {
                const auto &s = std::get<std::string>(c);
                if (s.find_first_of(",\"\n") == std::string::npos)
                    return s;
                std::string q = "\"";
                for (char ch : s)
                {
                    if (ch == '"')
                        q += '"';
                    q += ch;
                }
                return q + "\"";
            }
            return "";
        }

        nlohmann::ordered_json json_cell(const Cell &c)
        {
            if (std::holds_alternative<long long>(c))
                return std::get<long long>(c);
            if (std::holds_alternative<double>(c))
                return std::get<double>(c);
            if (std::holds_alternative<std::string>(c))
                return std::get<std::string>(c);
            return nullptr;
        }

        class TableWriter
        {
          public:
            TableWriter(std::ostream &out, OutputFormat format, const std::vector<std::string> &columns)
                : out_(out), format_(format), columns_(columns)
            {
            }

            void header(const std::string &kind, const std::vector<std::string> &notes)
            {
                if (format_ == OutputFormat::csv)
                {
                    out_ << "# fpauth " << kind << "\n";
                    for (const auto &n : notes)
                        out_ << "# " << n << "\n";
                    for (std::size_t i = 0; i < columns_.size(); ++i)
                        out_ << (i ? "," : "") << columns_[i];
                    out_ << "\n";
                    return;
                }
                nlohmann::ordered_json h;
                h["fpauth"] = kind;
                h["columns"] = columns_;
                h["notes"] = notes;
                out_ << h.dump() << "\n";
            }

            void row(const std::vector<Cell> &cells)
            {
                if (format_ == OutputFormat::csv)
                {
                    for (std::size_t i = 0; i < cells.size(); ++i)
                        out_ << (i ? "," : "") << csv_cell(cells[i]);
                    out_ << "\n";
                    return;
                }
                nlohmann::ordered_json j;
                for (std::size_t i = 0; i < cells.size(); ++i)
                    j[columns_[i]] = json_cell(cells[i]);
                out_ << j.dump() << "\n";
            }

          private:
            std::ostream &out_;
            OutputFormat format_;
            const std::vector<std::string> &columns_;
        };

        std::string num(double x)
        {
            return fmt::format("{:.12g}", x);
        }

        std::string join(const std::vector<double> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + num(v[i]);
            return s;
        }

        std::vector<std::string> scenario_notes(const Scenario &s)
        {
            const auto &c = s.cfg;
            std::string strategies;
            for (std::size_t i = 0; i < s.strategies.size(); ++i)
                strategies += (i ? "," : "") + s.strategies[i].label();
            return {
                fmt::format("system: n_bs_antennas={} n_eve_antennas={} n_users={} n_an={} n_paths={}", c.n_bs_antennas,
                            c.n_eve_antennas, c.n_users, c.an_streams(), c.n_paths),
                fmt::format("system: angular_spread_deg={} carrier_ghz={} bandwidth_hz={} noise_figure_db={} "
                            "thermal_noise_dbm_hz={} spacing_wavelengths={}",
                            num(c.angular_spread_deg), num(c.carrier_ghz), num(c.bandwidth_hz),
                            num(c.noise_figure_db), num(c.thermal_noise_dbm_hz), num(c.spacing_wavelengths)),
                fmt::format("system: tag_length={} p_fa={} key_space_size={} d_h=[{},{}] d_v={} d_e=[{},{}] "
                            "rzf_beta={} tag_in_sinr={}",
                            c.tag_length, num(c.p_fa), c.key_space_size, num(c.d_h_min), num(c.d_h_max), num(c.d_v),
                            num(c.d_e_min), num(c.d_e_max), c.rzf_beta ? num(*c.rzf_beta) : "auto",
                            c.tag_in_sinr ? "true" : "false"),
                fmt::format("sweep: strategies={} phi_grid={} ptx_dbm={}", strategies, join(s.phi_grid),
                            join(s.ptx_dbm)),
                fmt::format("montecarlo: seed={} trials={} realizations={} analytic_only={} ml_attack={} "
                            "eve_key_space_mc={}",
                            s.seed, s.trials, s.realizations, s.analytic_only ? "true" : "false",
                            s.ml_attack ? "true" : "false", s.eve_key_space_mc),
            };
        }

        Cell opt(const std::optional<double> &x)
        {
            return x ? Cell{*x} : Cell{};
        }

        std::vector<Cell> sweep_row(const Scenario &s, const Cell &realization, const MetricsRecord &r)
        {
            std::vector<Cell> row{realization, r.strategy, r.phi, opt(r.p_t)};
            if (r.p_t)
            {
                row.push_back(1.0 - *r.p_t);
                row.push_back(psi_factor(*r.p_t, r.phi));
                row.push_back(*r.p_t > 0.0 ? Cell{omega_factor(*r.p_t, r.phi)} : Cell{});
            }
            else
                row.insert(row.end(), 3, Cell{});
            row.push_back(r.ptx_dbm);
            row.push_back(r.beta);
            row.push_back((long long)s.seed);

            if (r.analytic)
            {
                const auto &a = *r.analytic;
                row.insert(row.end(), {a.p_d, a.p_k, a.p_k_asymptotic, a.sum_rate});
            }
            else
                row.insert(row.end(), 4, Cell{});

            auto prop = [&](const Proportion &p)
            {
                if (p.trials == 0)
                    row.insert(row.end(), 3, Cell{});
                else
                    row.insert(row.end(), {p.rate(), p.ci_half_width(), (long long)p.trials});
            };
            if (r.empirical)
            {
                const auto &e = *r.empirical;
                prop(e.p_d);
                prop(e.p_fa);
                prop(e.p_k);
                row.push_back(e.p_k.trials ? Cell{e.p_k_mc_analytic} : Cell{});
                row.push_back(e.p_k.trials ? Cell{(long long)s.eve_key_space_mc} : Cell{});
            }
            else
                row.insert(row.end(), 11, Cell{});
            row.push_back(r.error.empty() ? std::string("ok") : r.error);
            return row;
        }

        // Analytic metrics averaged over realizations, empirical counts pooled.
        std::vector<MetricsRecord> mean_records(const std::vector<MetricsRecord> &records, int realizations)
        {
            const std::size_t per = records.size() / std::size_t(realizations);
            std::vector<MetricsRecord> out(records.begin(), records.begin() + long(per));
            for (std::size_t i = 0; i < per; ++i)
            {
                auto &m = out[i];
                m.realization = -1;
                if (!m.error.empty())
                    continue;
                AnalyticMetrics a;
                std::optional<EmpiricalMetrics> e;
                double weighted = 0.0;
                for (int r = 0; r < realizations; ++r)
                {
                    const auto &rec = records[std::size_t(r) * per + i];
                    a.p_d += rec.analytic->p_d / realizations;
                    a.p_k += rec.analytic->p_k / realizations;
                    a.p_k_asymptotic += rec.analytic->p_k_asymptotic / realizations;
                    a.sum_rate += rec.analytic->sum_rate / realizations;
                    if (rec.empirical)
                    {
                        if (!e)
                            e.emplace();
                        e->p_d += rec.empirical->p_d;
                        e->p_fa += rec.empirical->p_fa;
                        e->p_k += rec.empirical->p_k;
                        weighted += double(rec.empirical->p_k.trials) * rec.empirical->p_k_mc_analytic;
                    }
                }
                if (e && e->p_k.trials)
                    e->p_k_mc_analytic = weighted / double(e->p_k.trials);
                m.analytic = a;
                m.empirical = e;
            }
            return out;
        }

        int resolve_workers(int requested)
        {
            if (requested > 0)
                return requested;
            return int(std::max(1u, std::thread::hardware_concurrency()));
        }
    }

    const std::vector<std::string> &sweep_columns()
    {
        static const std::vector<std::string> cols{
            "realization", "strategy",      "phi",           "p_t",           "p_s",     "psi",
            "omega",       "ptx_dbm",       "beta",          "seed",          "pd_analytic",
            "pk_analytic", "pk_asymptotic", "sum_rate",      "pd_mc",         "pd_ci",   "pd_n",
            "pfa_mc",      "pfa_ci",        "pfa_n",         "pk_mc",         "pk_ci",   "pk_n",
            "pk_mc_analytic", "pk_mc_key_space", "status"};
        return cols;
    }

    const std::vector<std::string> &factor_columns()
    {
        static const std::vector<std::string> cols{"psi", "omega", "phi", "p_t", "feasible", "status"};
        return cols;
    }

    TrialPlan make_trial_plan(const Scenario &s)
    {
        TrialPlan plan;
        plan.cfg = s.cfg;
        for (const auto &strategy : s.strategies)
            for (auto &point : strategy_splits(strategy, s.phi_grid))
                plan.splits.push_back({strategy.label(), std::move(point)});
        plan.ptx_dbm = s.ptx_dbm;
        plan.n_realizations = s.realizations;
        plan.n_trials = s.trials;
        plan.seed = s.seed;
        plan.analytic_only = s.analytic_only;
        plan.with_ml_attack = s.ml_attack;
        plan.eve_key_space_mc = s.eve_key_space_mc;
        return plan;
    }

    void write_sweep(const Scenario &s, const std::vector<MetricsRecord> &records, std::ostream &out)
    {
        auto notes = scenario_notes(s);
        notes.insert(notes.begin(),
                     "one row per (realization, strategy, phi, ptx_dbm); realization=mean rows average the "
                     "analytic values and pool the trial counts");
        notes.insert(notes.begin() + 1,
                     "pd/pk analytic: mean over users; *_mc: empirical rate, *_ci: 95% half-width, *_n: trials; "
                     "sum_rate in bit/s/Hz; beta: RZF regularization; status: ok or the infeasibility reason");
        TableWriter table(out, s.format, sweep_columns());
        table.header("sweep", notes);
        for (const auto &r : records)
            table.row(sweep_row(s, (long long)r.realization, r));
        if (s.realizations > 1)
            for (const auto &r : mean_records(records, s.realizations))
                table.row(sweep_row(s, std::string("mean"), r));
    }

    int cmd_sweep(const Scenario &s, std::ostream &out)
    {
        s.validate();
        const auto records = run_trials(make_trial_plan(s), resolve_workers(s.workers));
        write_sweep(s, records, out);
        return exit_code::ok;
    }

    int cmd_factors(const Scenario &s, std::ostream &out)
    {
        s.validate();
        TableWriter table(out, s.format, factor_columns());
        table.header("factors", {"phi = 1 - omega psi, p_t = psi / phi; infeasible pairs carry the violated bound"});
        for (double psi : s.psi_values)
            for (double omega : s.omega_grid)
            {
                try
                {
                    const auto a = allocate_from_factors(psi, omega);
                    table.row({psi, omega, a.phi, a.p_t, std::string("true"), std::string("ok")});
                }
                catch (const InfeasibleSplitError &e)
                {
                    table.row({psi, omega, Cell{}, Cell{}, std::string("false"), std::string(e.what())});
                }
            }
        return exit_code::ok;
    }

    std::vector<InvariantResult> run_invariant_suite(const Scenario &s)
    {
        s.validate();
        const auto &cfg = s.cfg;
        const double noise = noise_variance(cfg);
        const int k_users = cfg.n_users;
        const int z = cfg.an_streams();
        const double half_lt = 0.5 * cfg.tag_length;

        double psi = 0.02, omega = 100.0;
        for (const auto &st : s.strategies)
        {
            if (st.kind == Strategy::Kind::fixed_psi)
                psi = st.value;
            if (st.kind == Strategy::Kind::fixed_omega)
                omega = st.value;
        }
        const std::vector<double> prop_phis{0.5, 0.8, 0.9};

        double max_leak = 0.0, max_norm_err = 0.0;
        long var_gap_failures = 0, var_gap_checks = 0;
        double p1_approx = 0.0, p1_exact = 0.0;
        double p2_asym = 0.0, p2_finite = 0.0;
        bool p2_ran = false;

        for (int r = 0; r < s.realizations; ++r)
        {
            const auto ch = sample_realization(cfg, RngStream{s.seed, 1}.substream(std::uint64_t(r)));
            const ComplexMatrix v_dir = an_precoder(ch.users);

            for (double dbm : s.ptx_dbm)
            {
                const double ptx = dbm_to_watts(dbm);
                const double beta = cfg.rzf_beta.value_or(double(k_users) * noise / ptx);
                const ComplexMatrix w_dir = rzf_precoder(ch.users, beta);
                for (double phi : s.phi_grid)
                {
                    const auto pre = build_precoders(w_dir, v_dir, beta, phi, z);
                    max_norm_err = std::max(max_norm_err, std::abs(pre.w.squaredNorm() + pre.v.squaredNorm() - 1.0));
                    for (int u = 0; u < k_users; ++u)
                        for (Eigen::Index i = 0; i < pre.v.cols(); ++i)
                        {
                            const double nv = pre.v.col(i).norm();
                            if (nv > 0.0)
                                max_leak = std::max(max_leak, std::abs(ch.h(u).dot(pre.v.col(i))) / (ch.h(u).norm() * nv));
                        }
                }
                for (const auto &st : s.strategies)
                    for (const auto &pt : strategy_splits(st, s.phi_grid))
                    {
                        if (!pt.feasible())
                            continue;
                        const auto split = pt.at(ptx);
                        const auto pre = build_precoders(w_dir, v_dir, beta, split.phi, z);
                        const LinkState link{ch, pre, split, noise, cfg.tag_length};
                        for (int u = 0; u < k_users; ++u)
                        {
                            const auto us = user_hypothesis_stats(link, u);
                            const auto es = eve_hypothesis_stats(link, u);
                            var_gap_checks += 2;
                            var_gap_failures += (us.var1 - us.var0 != half_lt) + (es.var1 - es.var0 != half_lt);
                        }
                    }
            }

            // psi / omega invariance with zero forcing
            const ComplexMatrix zf = rzf_precoder(ch.users, 0.0);
            for (double dbm : s.ptx_dbm)
            {
                const double ptx = dbm_to_watts(dbm);
                for (int u = 0; u < k_users; ++u)
                {
                    std::vector<double> approx, exact, asym, finite;
                    for (double phi : prop_phis)
                    {
                        const auto split = PowerSplit::make(ptx, phi, psi / phi);
                        const auto pre = build_precoders(zf, v_dir, 0.0, phi, z);
                        const LinkState link{ch, pre, split, noise, cfg.tag_length};
                        approx.push_back(approx_detection_probability(link, u, cfg.p_fa));
                        const auto us = user_hypothesis_stats(link, u);
                        exact.push_back(detection_probability(us, detection_threshold(cfg.p_fa, std::sqrt(us.var0))));

                        const double pt_w = (1.0 - phi) / (omega * phi);
                        if (pt_w >= 1.0)
                            continue;
                        const auto split_w = PowerSplit::make(ptx, phi, pt_w);
                        const auto pre_w = build_precoders(zf, v_dir, 0.0, phi, z);
                        const LinkState link_w{ch, pre_w, split_w, noise, cfg.tag_length};
                        const double a = asymptotic_key_detection_probability(link_w, u, cfg.key_space_size);
                        asym.push_back(a);
                        if (std::abs(dbm - 50.0) < 1e-9)
                        {
                            p2_ran = true;
                            const double f = key_detection_probability(eve_hypothesis_stats(link_w, u),
                                                                       cfg.key_space_size);
                            finite.push_back(f);
                            p2_finite = std::max(p2_finite, std::abs(f - a));
                        }
                    }
                    auto spread = [](const std::vector<double> &v)
                    {
                        if (v.empty())
                            return 0.0;
                        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
                        return *hi - *lo;
                    };
                    p1_approx = std::max(p1_approx, spread(approx));
                    p1_exact = std::max(p1_exact, spread(exact));
                    p2_asym = std::max(p2_asym, spread(asym));
                    p2_finite = std::max(p2_finite, spread(finite));
                }
            }
        }

        double roundtrip = 0.0;
        long infeasible_accepted = 0;
        for (double p : s.psi_values)
            for (double w : s.omega_grid)
            {
                if (w * p >= 1.0)
                {
                    try
                    {
                        allocate_from_factors(p, w);
                        ++infeasible_accepted;
                    }
                    catch (const InfeasibleSplitError &)
                    {
                    }
                    continue;
                }
                try
                {
                    const auto a = allocate_from_factors(p, w);
                    roundtrip = std::max(roundtrip, std::abs(psi_factor(a.p_t, a.phi) - p));
                    if (w > 0.0)
                        roundtrip = std::max(roundtrip, std::abs(omega_factor(a.p_t, a.phi) - w) / w);
                }
                catch (const InfeasibleSplitError &)
                {
                    // P_t >= 1 for this pair; nothing to round-trip
                }
            }

        std::vector<InvariantResult> out;
        auto add = [&](std::string name, bool ok, std::string detail)
        { out.push_back({std::move(name), ok, std::move(detail)}); };
        add("an_null_space", max_leak <= 1e-10, fmt::format("max normalized leakage {:.3e} (limit 1e-10)", max_leak));
        add("precoder_power", max_norm_err <= 1e-10, fmt::format("max |total power - 1| {:.3e} (limit 1e-10)", max_norm_err));
        add("variance_gap", var_gap_failures == 0,
            fmt::format("{} of {} var1 - var0 checks differ from L_t/2", var_gap_failures, var_gap_checks));
        add("psi_invariance_approx", p1_approx <= 1e-9,
            fmt::format("psi={} max P_D spread {:.3e} (limit 1e-9)", num(psi), p1_approx));
        add("psi_invariance_exact", p1_exact < 0.01,
            fmt::format("psi={} max P_D spread {:.3e} (limit 0.01)", num(psi), p1_exact));
        add("omega_invariance_asymptotic", p2_asym <= 1e-9,
            fmt::format("omega={} max P_K spread {:.3e} (limit 1e-9)", num(omega), p2_asym));
        if (p2_ran)
            add("omega_high_snr", p2_finite <= 0.02,
                fmt::format("omega={} max P_K deviation at 50 dBm {:.3e} (limit 0.02)", num(omega), p2_finite));
        add("factor_round_trip", roundtrip <= 1e-12 && infeasible_accepted == 0,
            fmt::format("max error {:.3e} (limit 1e-12), {} infeasible pairs accepted", roundtrip, infeasible_accepted));
        return out;
    }

    int cmd_validate(const Scenario &s, std::ostream &out)
    {
        bool all = true;
        for (const auto &r : run_invariant_suite(s))
        {
            out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
            all = all && r.passed;
        }
        return all ? exit_code::ok : exit_code::invariant_failure;
    }
}
