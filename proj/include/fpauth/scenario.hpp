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

#ifndef FPAUTH_SCENARIO_HPP
#define FPAUTH_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpauth/channel.hpp"
#include "fpauth/powerctl.hpp"

namespace fpauth
{
    // Bad scenario file or flag value; the CLI maps it to exit status 1.
    class ConfigError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    enum class OutputFormat
    {
        csv,
        jsonl
    };

    struct Scenario
    {
        SystemConfig cfg;

        // [sweep]
        std::vector<Strategy> strategies{Strategy::fixed_psi(0.02), Strategy::fixed_omega(100.0),
                                         Strategy::conventional(0.015)};
        std::vector<double> phi_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        std::vector<double> ptx_dbm{-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};

        // [montecarlo]
        int trials = 1000;
        int realizations = 1;
        std::uint64_t seed = 1;
        bool analytic_only = false;
        bool ml_attack = false;
        std::uint64_t eve_key_space_mc = 256;
        int workers = 0; // 0: one per hardware thread

        // [output]
        std::string out; // empty: standard output
        OutputFormat format = OutputFormat::csv;

        // [factors]
        std::vector<double> psi_values{0.002, 0.005, 0.01, 0.02};
        std::vector<double> omega_grid{0, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500};

        // Throws ConfigError.
        void validate() const;
    };

    // INI-style text: [section] headers, key = value lines, '#' or ';' comments.
    // Lists are comma separated; numeric grids also accept start:step:stop.
    Scenario parse_scenario(std::istream &in);
    Scenario load_scenario(const std::string &path);

    std::vector<double> parse_grid(const std::string &text);
    OutputFormat parse_format(const std::string &text);
    std::string format_name(OutputFormat f);
}

#endif
