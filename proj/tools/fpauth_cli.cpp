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

// fpauth command-line front end: sweep, factors, validate.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "fpauth/commands.hpp"

namespace
{
    struct Flags
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::optional<std::string> format;
        std::optional<int> trials;
        std::optional<int> realizations;
        std::optional<int> workers;
        bool analytic_only = false;
        bool ml_attack = false;
    };

    void add_common(CLI::App *cmd, Flags &f)
    {
        cmd->add_option("--config", f.config, "Scenario file (INI sections [system] [sweep] [montecarlo] [output] [factors])");
        cmd->add_option("--seed", f.seed, "Base seed of all random streams");
        cmd->add_option("--out", f.out, "Output path (default: [output] path, else stdout)");
        cmd->add_option("--format", f.format, "Output format: csv or jsonl");
        cmd->add_option("--trials", f.trials, "Monte Carlo trials per realization");
        cmd->add_option("--realizations", f.realizations, "Channel realizations");
        cmd->add_option("--workers", f.workers, "Worker threads (0: all cores); output does not depend on it");
        cmd->add_flag("--analytic-only", f.analytic_only, "Skip the Monte Carlo trials");
        cmd->add_flag("--ml-attack", f.ml_attack, "Run the eavesdropper key search in the trials");
    }

    fpauth::Scenario resolve(const Flags &f)
    {
        fpauth::Scenario s = f.config.empty() ? fpauth::Scenario{} : fpauth::load_scenario(f.config);
        if (f.seed)
            s.seed = *f.seed;
        if (!f.out.empty())
            s.out = f.out;
        if (f.format)
            s.format = fpauth::parse_format(*f.format);
        if (f.trials)
            s.trials = *f.trials;
        if (f.realizations)
            s.realizations = *f.realizations;
        if (f.workers)
            s.workers = *f.workers;
        if (f.analytic_only)
            s.analytic_only = true;
        if (f.ml_attack)
            s.ml_attack = true;
        s.validate();
        return s;
    }

    // Results are buffered and written in one go once the run has finished.
    int emit(const fpauth::Scenario &s, const std::string &text)
    {
        if (s.out.empty())
        {
            std::cout << text << std::flush;
            return fpauth::exit_code::ok;
        }
        std::ofstream file(s.out, std::ios::binary);
        if (!file)
        {
            std::cerr << "error: cannot open output file '" << s.out << "'\n";
            return fpauth::exit_code::config_error;
        }
        file << text;
        return file.good() ? fpauth::exit_code::ok : fpauth::exit_code::config_error;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"fpauth: fingerprint-embedded authentication with artificial noise, analytic and Monte Carlo"};
    app.require_subcommand(1);
    Flags flags;
    auto *sweep = app.add_subcommand("sweep", "Strategy comparison over phi and transmit power");
    auto *factors = app.add_subcommand("factors", "Table of (psi, omega) -> (phi, P_t)");
    auto *validate = app.add_subcommand("validate", "Run the invariant suite on sampled channels");
    for (auto *cmd : {sweep, factors, validate})
        add_common(cmd, flags);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return fpauth::exit_code::config_error;
    }

    try
    {
        const auto scenario = resolve(flags);
        std::ostringstream buffer;
        int code = fpauth::exit_code::ok;
        if (*sweep)
            code = fpauth::cmd_sweep(scenario, buffer);
        else if (*factors)
            code = fpauth::cmd_factors(scenario, buffer);
        else
        {
            code = fpauth::cmd_validate(scenario, std::cout);
            return code;
        }
        const int written = emit(scenario, buffer.str());
        return code != fpauth::exit_code::ok ? code : written;
    }
    catch (const fpauth::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return fpauth::exit_code::config_error;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return fpauth::exit_code::config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return fpauth::exit_code::invariant_failure;
    }
}
