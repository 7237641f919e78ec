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

#ifndef FPAUTH_POWERCTL_HPP
#define FPAUTH_POWERCTL_HPP

#include <optional>
#include <string>
#include <vector>

#include "fpauth/authentication.hpp"
#include "fpauth/power_split.hpp"

namespace fpauth
{
    // psi = P_t * phi. Fixes the legitimate user's detection probability.
    double psi_factor(double p_t, double phi);

    // omega = (1 - phi) / (P_t * phi). Fixes Eve's high-SNR key detection probability.
    // Throws std::domain_error for P_t <= 0 or phi <= 0.
    double omega_factor(double p_t, double phi);

    struct FactorAllocation
    {
        double phi = 1.0;
        double p_t = 0.0;
    };

    // Inverts (psi, omega) -> (phi, P_t) via phi = 1 - omega * psi, P_t = psi / phi.
    // Throws InfeasibleSplitError when omega * psi >= 1 or the resulting P_t >= 1.
    FactorAllocation allocate_from_factors(double psi, double omega);

    struct Strategy
    {
        enum class Kind
        {
            fixed_psi,
            fixed_omega,
            conventional
        };

        Kind kind = Kind::conventional;
        double value = 0.015; // psi, omega or P_t depending on kind

        static Strategy fixed_psi(double psi) { return {Kind::fixed_psi, psi}; }
        static Strategy fixed_omega(double omega) { return {Kind::fixed_omega, omega}; }
        static Strategy conventional(double p_t = 0.015) { return {Kind::conventional, p_t}; }

        // "fixed_psi:0.02", "fixed_omega:100", "conventional:0.015"
        std::string label() const;
        static Strategy parse(const std::string &text);
    };

    // One grid point of a strategy. Either p_t is set or error names why the point is infeasible.
    struct StrategyPoint
    {
        double phi = 1.0;
        std::optional<double> p_t;
        std::string error;

        bool feasible() const { return p_t.has_value(); }
        PowerSplit at(double ptx_watts) const { return PowerSplit::make(ptx_watts, phi, p_t.value()); }
    };

    // fixed_psi: P_t = psi / phi; fixed_omega: P_t = (1 - phi) / (omega phi); conventional: constant P_t.
    std::vector<StrategyPoint> strategy_splits(const Strategy &strategy, const std::vector<double> &phi_grid);

    // (L_t / 2)(1 + sigma_n^2 / (P_Tx P_t |h_u^H w_u|^2)): the user-side H0 variance with
    // multiuser interference and AN leakage dropped.
    double approx_user_var0(const LinkState &link, int u);

    // (L_t / 2)(1 + sum_i |w_u^H H_e H_e^H v_i|^2 / (P_t ||H_e^H w_u||^4)): Eve's H0
    // variance in the noiseless limit.
    double eve_asymptotic_var0(const LinkState &link, int u);

    // Detection probability from approx_user_var0 (var1 = var0 + L_t / 2).
    double approx_detection_probability(const LinkState &link, int u, double p_fa);

    // Key detection probability from eve_asymptotic_var0.
    double asymptotic_key_detection_probability(const LinkState &link, int u, std::uint64_t key_space_size);
}

#endif
