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

#ifndef FPAUTH_COMMANDS_HPP
#define FPAUTH_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fpauth/montecarlo.hpp"
#include "fpauth/scenario.hpp"

namespace fpauth
{
    namespace exit_code
    {
        inline constexpr int ok = 0;
        inline constexpr int config_error = 1;
        inline constexpr int invariant_failure = 2;
    }

    // Column order of the sweep table. Also written into every output header.
    const std::vector<std::string> &sweep_columns();
    const std::vector<std::string> &factor_columns();

    TrialPlan make_trial_plan(const Scenario &s);

    // Per-realization records followed, when there is more than one realization, by
    // "mean" rows: analytic metrics averaged, empirical counts pooled.
    void write_sweep(const Scenario &s, const std::vector<MetricsRecord> &records, std::ostream &out);

    int cmd_sweep(const Scenario &s, std::ostream &out);
    int cmd_factors(const Scenario &s, std::ostream &out);

    struct InvariantResult
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    // Null-space leakage, precoder normalization, var1 - var0, psi / omega invariance and
    // the factor round trip, over `s.realizations` channel draws.
    std::vector<InvariantResult> run_invariant_suite(const Scenario &s);
    int cmd_validate(const Scenario &s, std::ostream &out);
}

#endif
