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

#include "fpauth/powerctl.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "fpauth/errors.hpp"

namespace fpauth
{
    PowerSplit PowerSplit::make(double ptx_watts, double phi, double p_t)
    {
        if (!(ptx_watts > 0.0))
            throw InfeasibleSplitError("transmit power must be positive");
        if (!(phi > 0.0 && phi <= 1.0))
            throw InfeasibleSplitError(fmt::format("phi = {} outside (0, 1]", phi));
        if (!(p_t >= 0.0 && p_t < 1.0))
            throw InfeasibleSplitError(fmt::format("P_t = {} outside [0, 1)", p_t));
        return PowerSplit{ptx_watts, phi, p_t};
    }

    double psi_factor(double p_t, double phi)
    {
        return p_t * phi;
    }

    double omega_factor(double p_t, double phi)
    {
        if (!(p_t > 0.0) || !(phi > 0.0))
            throw std::domain_error("omega_factor: P_t and phi must be positive.");
        return (1.0 - phi) / (p_t * phi);
    }

    FactorAllocation allocate_from_factors(double psi, double omega)
    {
        if (!(psi > 0.0))
            throw InfeasibleSplitError(fmt::format("psi = {} must be positive", psi));
        if (!(omega >= 0.0))
            throw InfeasibleSplitError(fmt::format("omega = {} must be non-negative", omega));
        if (!(omega * psi < 1.0))
            throw InfeasibleSplitError(fmt::format("omega * psi = {} violates omega * psi < 1", omega * psi));
        const double phi = 1.0 - omega * psi;
        const double p_t = psi / phi;
        if (!(p_t < 1.0))
            throw InfeasibleSplitError(fmt::format("resulting P_t = {} violates P_t < 1", p_t));
        return {phi, p_t};
    }

    std::string Strategy::label() const
    {
        switch (kind)
        {
        case Kind::fixed_psi:
            return fmt::format("fixed_psi:{}", value);
        case Kind::fixed_omega:
            return fmt::format("fixed_omega:{}", value);
        case Kind::conventional:
            return fmt::format("conventional:{}", value);
        }
        return "unknown";
    }

    Strategy Strategy::parse(const std::string &text)
    {
        const auto colon = text.find(':');
        const std::string name = text.substr(0, colon);
        double value = 0.0;
        bool has_value = colon != std::string::npos;
        if (has_value)
        {
            const std::string num = text.substr(colon + 1);
            std::size_t used = 0;
            try
            {
                value = std::stod(num, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used == 0 || used != num.size())
                throw std::invalid_argument("Strategy '" + text + "': cannot parse numeric parameter.");
        }

        if (name == "fixed_psi" && has_value)
        {
            if (!(value > 0.0 && value < 1.0))
                throw std::invalid_argument("Strategy '" + text + "': psi must lie in (0, 1).");
            return fixed_psi(value);
        }
        if (name == "fixed_omega" && has_value)
        {
            if (!(value > 0.0))
                throw std::invalid_argument("Strategy '" + text + "': omega must be positive.");
            return fixed_omega(value);
        }
        if (name == "conventional")
        {
            if (!has_value)
                value = 0.015;
            if (!(value > 0.0 && value < 1.0))
                throw std::invalid_argument("Strategy '" + text + "': P_t must lie in (0, 1).");
            return conventional(value);
        }
        throw std::invalid_argument("Unknown strategy '" + text +
                                    "'; expected fixed_psi:<psi>, fixed_omega:<omega> or conventional[:<P_t>].");
    }

    std::vector<StrategyPoint> strategy_splits(const Strategy &strategy, const std::vector<double> &phi_grid)
    {
        std::vector<StrategyPoint> out;
        out.reserve(phi_grid.size());
        for (double phi : phi_grid)
        {
            StrategyPoint pt;
            pt.phi = phi;
            if (!(phi > 0.0 && phi <= 1.0))
            {
                pt.error = fmt::format("phi = {} outside (0, 1]", phi);
                out.push_back(pt);
                continue;
            }
            double p_t = 0.0;
            switch (strategy.kind)
            {
            case Strategy::Kind::fixed_psi:
                p_t = strategy.value / phi;
                break;
            case Strategy::Kind::fixed_omega:
                p_t = (1.0 - phi) / (strategy.value * phi);
                break;
            case Strategy::Kind::conventional:
                p_t = strategy.value;
                break;
            }
            if (!(p_t > 0.0))
                pt.error = fmt::format("P_t = {} leaves no tag power", p_t);
            else if (!(p_t < 1.0))
                pt.error = fmt::format("P_t = {} violates P_t < 1", p_t);
            else
                pt.p_t = p_t;
            out.push_back(pt);
        }
        return out;
    }

    double approx_user_var0(const LinkState &link, int u)
    {
        const auto &sp = link.split;
        const double own = std::norm(user_effective_gain(link, u));
        return 0.5 * link.tag_length * (1.0 + link.noise_var / (sp.ptx_watts * sp.p_t * own));
    }

    double eve_asymptotic_var0(const LinkState &link, int u)
    {
        const LinkState noiseless{link.channel, link.precoders, link.split, 0.0, link.tag_length};
        return eve_hypothesis_stats(noiseless, u).var0;
    }

    double approx_detection_probability(const LinkState &link, int u, double p_fa)
    {
        const double half = 0.5 * link.tag_length;
        const double var0 = approx_user_var0(link, u);
        const auto stats = HypothesisStats::from_excess(link.tag_length, var0 / half - 1.0);
        return detection_probability(stats, detection_threshold(p_fa, std::sqrt(stats.var0)));
    }

    double asymptotic_key_detection_probability(const LinkState &link, int u, std::uint64_t key_space_size)
    {
        const LinkState noiseless{link.channel, link.precoders, link.split, 0.0, link.tag_length};
        return key_detection_probability(eve_hypothesis_stats(noiseless, u), key_space_size);
    }
}
