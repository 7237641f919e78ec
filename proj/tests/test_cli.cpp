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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "fpauth/commands.hpp"

using namespace fpauth;

namespace
{
    Scenario parse(const std::string &text)
    {
        std::istringstream in(text);
        return parse_scenario(in);
    }

    std::string error_of(const std::string &text)
    {
        try
        {
            parse(text);
        }
        catch (const ConfigError &e)
        {
            return e.what();
        }
        return "";
    }

    std::filesystem::path scratch(const std::string &name)
    {
        const auto dir = std::filesystem::temp_directory_path() / "fpauth_cli_tests";
        std::filesystem::create_directories(dir);
        return dir / name;
    }

    int run_cli(const std::string &args)
    {
        const std::string cmd = std::string(FPAUTH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    std::vector<std::string> data_lines(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#')
                out.push_back(line);
        return out;
    }
}

TEST_SUITE("cli")
{
    TEST_CASE("empty file gives the reference defaults")
    {
        const auto s = parse("");
        CHECK(s.cfg.n_bs_antennas == 16);
        CHECK(s.cfg.tag_length == 2048);
        CHECK(s.strategies.size() == 3);
        CHECK(s.phi_grid.size() == 9);
        CHECK(s.ptx_dbm.front() == -10.0);
        CHECK(s.ptx_dbm.back() == 50.0);
        CHECK(s.ptx_dbm.size() == 13);
        CHECK(s.format == OutputFormat::csv);
    }

    TEST_CASE("keys are parsed per section")
    {
        const auto s = parse("# comment\n[system]\nn_users = 4\nn_an = 5\ntag_length = 512\nrzf_beta = 0\n"
                             "tag_in_sinr = yes\n; other comment\n[sweep]\nstrategies = fixed_psi:0.01, conventional\n"
                             "phi_grid = 0.2:0.2:0.8\nptx_dbm = 0, 30\n[montecarlo]\ntrials = 50\nseed = 18446744073709551615\n"
                             "ml_attack = true\n[output]\nformat = jsonl\n[factors]\npsi = 0.002\nomega = 0:100:300\n");
        CHECK(s.cfg.n_users == 4);
        CHECK(s.cfg.an_streams() == 5);
        CHECK(s.cfg.tag_length == 512);
        CHECK(s.cfg.rzf_beta.value() == 0.0);
        CHECK(s.cfg.tag_in_sinr);
        CHECK(s.strategies.size() == 2);
        CHECK(s.strategies[1].value == 0.015);
        REQUIRE(s.phi_grid.size() == 4);
        CHECK(s.phi_grid[3] == doctest::Approx(0.8));
        CHECK(s.trials == 50);
        CHECK(s.seed == 18446744073709551615ULL);
        CHECK(s.ml_attack);
        CHECK(s.format == OutputFormat::jsonl);
        CHECK(s.omega_grid.size() == 4);
    }

    TEST_CASE("trailing comments")
    {
        const auto s = parse("[system]\nn_users = 4   # K\ntag_length = 256\t; L_t\n[output]\npath = a#b.csv\n");
        CHECK(s.cfg.n_users == 4);
        CHECK(s.cfg.tag_length == 256);
        CHECK(s.out == "a#b.csv");
    }

    TEST_CASE("bad files are rejected with the offending name")
    {
        CHECK(error_of("[system]\nn_antennas = 3\n").find("n_antennas") != std::string::npos);
        CHECK(error_of("[radio]\nx = 1\n").find("radio") != std::string::npos);
        CHECK(error_of("n_users = 3\n").find("n_users") != std::string::npos);
        CHECK(error_of("[system]\nn_an = 11\n").find("n_an") != std::string::npos);
        CHECK(error_of("[system]\np_fa = 0\n").find("p_fa") != std::string::npos);
        CHECK(error_of("[system]\nn_users = six\n").find("n_users") != std::string::npos);
        CHECK(error_of("[sweep]\nstrategies =\n").find("strateg") != std::string::npos);
        CHECK(error_of("[sweep]\nstrategies = optimal:1\n").find("optimal") != std::string::npos);
        CHECK(error_of("[sweep]\nphi_grid = 0.5, 1.5\n").find("phi_grid") != std::string::npos);
        CHECK(error_of("[montecarlo]\neve_key_space_mc = 10000\n").find("eve_key_space_mc") != std::string::npos);
        CHECK(error_of("[output]\nformat = xml\n").find("xml") != std::string::npos);
        CHECK_FALSE(error_of("[system\n").empty());
        CHECK_THROWS_AS(load_scenario("/nonexistent/fpauth.ini"), ConfigError);
    }

    TEST_CASE("grid syntax")
    {
        CHECK(parse_grid("-10:5:50").size() == 13);
        CHECK(parse_grid("0.1:0.1:0.9").size() == 9);
        CHECK(parse_grid("1, 2,3").size() == 3);
        CHECK_THROWS_AS(parse_grid("1:0:5"), ConfigError);
        CHECK_THROWS_AS(parse_grid("1:2"), ConfigError);
        CHECK_THROWS_AS(parse_grid("1,,2"), ConfigError);
    }

    TEST_CASE("factor table")
    {
        Scenario s;
        s.psi_values = {0.002, 0.01};
        s.omega_grid = {0, 100, 200};
        std::ostringstream out;
        CHECK(cmd_factors(s, out) == exit_code::ok);
        const auto rows = data_lines(out.str());
        REQUIRE(rows.size() == 7);
        CHECK(rows[0] == "psi,omega,phi,p_t,feasible,status");
        CHECK(rows[1] == "0.002,0,1,0.002,true,ok");
        CHECK(rows[2] == "0.002,100,0.8,0.0025,true,ok");
        CHECK(rows[5].rfind("0.01,100,,,false,", 0) == 0);
        CHECK(rows[6].rfind("0.01,200,,,false,", 0) == 0);
    }

    TEST_CASE("sweep table structure")
    {
        Scenario s;
        s.analytic_only = true;
        s.ptx_dbm = {10, 30};
        std::ostringstream out;
        CHECK(cmd_sweep(s, out) == exit_code::ok);
        const auto text = out.str();
        const auto rows = data_lines(text);
        REQUIRE(rows.size() == 1 + 3 * 9 * 2);
        std::string header;
        for (std::size_t i = 0; i < sweep_columns().size(); ++i)
            header += (i ? "," : "") + sweep_columns()[i];
        CHECK(rows[0] == header);
        CHECK(text.find("# columns") == std::string::npos); // column names live in the header row
        int psi = 0, omega = 0, conv = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
        {
            psi += rows[i].find(",fixed_psi:0.02,") != std::string::npos;
            omega += rows[i].find(",fixed_omega:100,") != std::string::npos;
            conv += rows[i].find(",conventional:0.015,") != std::string::npos;
        }
        CHECK(psi == 18);
        CHECK(omega == 18);
        CHECK(conv == 18);

        std::ostringstream again;
        cmd_sweep(s, again);
        CHECK(again.str() == text);

        Scenario none = s;
        none.strategies.clear();
        std::ostringstream sink;
        CHECK_THROWS_AS(cmd_sweep(none, sink), ConfigError);
    }

    TEST_CASE("jsonl rows parse and carry the columns in order")
    {
        Scenario s;
        s.analytic_only = true;
        s.ptx_dbm = {20};
        s.phi_grid = {0.5};
        s.realizations = 2;
        s.format = OutputFormat::jsonl;
        std::ostringstream out;
        cmd_sweep(s, out);
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        const auto head = nlohmann::json::parse(line);
        CHECK(head["fpauth"] == "sweep");
        CHECK(head["columns"].size() == sweep_columns().size());
        int n = 0, means = 0;
        while (std::getline(in, line))
        {
            const auto row = nlohmann::ordered_json::parse(line);
            auto it = row.begin();
            for (const auto &c : sweep_columns())
                CHECK((it++).key() == c);
            CHECK(row["pd_mc"].is_null());
            means += row["realization"] == "mean";
            ++n;
        }
        CHECK(n == 3 * 3);
        CHECK(means == 3);
    }

    TEST_CASE("invariant suite passes on the defaults")
    {
        Scenario s;
        s.realizations = 3;
        std::ostringstream out;
        CHECK(cmd_validate(s, out) == exit_code::ok);
        CHECK(out.str().find("FAIL") == std::string::npos);
        CHECK(out.str().find("PASS an_null_space") != std::string::npos);
    }

    TEST_CASE("command-line exit codes")
    {
        const auto cfg = scratch("bad.ini");
        std::ofstream(cfg) << "[system]\nbogus_key = 1\n";
        CHECK(run_cli("factors --config " + cfg.string()) == 1);
        const auto zbad = scratch("z.ini");
        std::ofstream(zbad) << "[system]\nn_an = 12\n";
        CHECK(run_cli("validate --config " + zbad.string()) == 1);
        CHECK(run_cli("sweep --format xml --analytic-only") == 1);
        CHECK(run_cli("") == 1);
        CHECK(run_cli("sweep --trials 0") == 1);
        CHECK(run_cli("factors") == 0);
        CHECK(run_cli("validate --realizations 2") == 0);

        const auto out = scratch("factors.csv");
        CHECK(run_cli("factors --out " + out.string()) == 0);
        CHECK(slurp(out).rfind("# fpauth factors", 0) == 0);
    }
}
