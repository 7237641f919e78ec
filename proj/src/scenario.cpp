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

#include "fpauth/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fpauth
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            return boost::algorithm::trim_copy(s);
        }

        std::vector<std::string> split_list(const std::string &text)
        {
            std::vector<std::string> parts;
            const std::string t = trim(text);
            if (t.empty())
                return parts;
            boost::algorithm::split(parts, t, boost::algorithm::is_any_of(","));
            for (auto &p : parts)
                p = trim(p);
            return parts;
        }

        template <class T>
        T parse_number(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            T value{};
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw ConfigError("Key '" + key + "': cannot parse '" + text + "' as a number.");
            if constexpr (std::is_floating_point_v<T>)
                if (!std::isfinite(value))
                    throw ConfigError("Key '" + key + "': value must be finite.");
            return value;
        }

        bool parse_bool(const std::string &key, const std::string &text)
        {
            const std::string t = boost::algorithm::to_lower_copy(trim(text));
            if (t == "true" || t == "1" || t == "yes" || t == "on")
                return true;
            if (t == "false" || t == "0" || t == "no" || t == "off")
                return false;
            throw ConfigError("Key '" + key + "': expected a boolean, got '" + text + "'.");
        }

        using Setter = std::function<void(Scenario &, const std::string &, const std::string &)>;

        template <class T>
        Setter number(T SystemConfig::*field)
        {
            return [field](Scenario &s, const std::string &k, const std::string &v)
            { s.cfg.*field = parse_number<T>(k, v); };
        }

        template <class T>
        Setter number(T Scenario::*field)
        {
            return [field](Scenario &s, const std::string &k, const std::string &v)
            { s.*field = parse_number<T>(k, v); };
        }

        Setter grid(std::vector<double> Scenario::*field)
        {
            return [field](Scenario &s, const std::string &k, const std::string &v)
            {
                try
                {
                    s.*field = parse_grid(v);
                }
                catch (const ConfigError &e)
                {
                    throw ConfigError("Key '" + k + "': " + e.what());
                }
            };
        }

        const std::map<std::string, std::map<std::string, Setter>> &schema()
        {
            static const std::map<std::string, std::map<std::string, Setter>> table{
                {"system",
                 {{"n_bs_antennas", number(&SystemConfig::n_bs_antennas)},
                  {"n_eve_antennas", number(&SystemConfig::n_eve_antennas)},
                  {"n_users", number(&SystemConfig::n_users)},
                  {"n_an", [](Scenario &s, const std::string &k, const std::string &v)
                   { s.cfg.n_an = parse_number<int>(k, v); }},
                  {"n_paths", number(&SystemConfig::n_paths)},
                  {"angular_spread_deg", number(&SystemConfig::angular_spread_deg)},
                  {"carrier_ghz", number(&SystemConfig::carrier_ghz)},
                  {"bandwidth_hz", number(&SystemConfig::bandwidth_hz)},
                  {"noise_figure_db", number(&SystemConfig::noise_figure_db)},
                  {"thermal_noise_dbm_hz", number(&SystemConfig::thermal_noise_dbm_hz)},
                  {"spacing_wavelengths", number(&SystemConfig::spacing_wavelengths)},
                  {"tag_length", number(&SystemConfig::tag_length)},
                  {"p_fa", number(&SystemConfig::p_fa)},
                  {"key_space_size", number(&SystemConfig::key_space_size)},
                  {"d_h_min", number(&SystemConfig::d_h_min)},
                  {"d_h_max", number(&SystemConfig::d_h_max)},
                  {"d_v", number(&SystemConfig::d_v)},
                  {"d_e_min", number(&SystemConfig::d_e_min)},
                  {"d_e_max", number(&SystemConfig::d_e_max)},
                  {"rzf_beta", [](Scenario &s, const std::string &k, const std::string &v)
                   {
                       if (boost::algorithm::to_lower_copy(trim(v)) == "auto")
                           s.cfg.rzf_beta.reset();
                       else
                           s.cfg.rzf_beta = parse_number<double>(k, v);
                   }},
                  {"tag_in_sinr", [](Scenario &s, const std::string &k, const std::string &v)
                   { s.cfg.tag_in_sinr = parse_bool(k, v); }}}},
                {"sweep",
                 {{"strategies", [](Scenario &s, const std::string &, const std::string &v)
                   {
                       s.strategies.clear();
                       for (const auto &item : split_list(v))
                       {
                           try
                           {
                               s.strategies.push_back(Strategy::parse(item));
                           }
                           catch (const std::invalid_argument &e)
                           {
                               throw ConfigError(std::string("Key 'strategies': ") + e.what());
                           }
                       }
                   }},
                  {"phi_grid", grid(&Scenario::phi_grid)},
                  {"ptx_dbm", grid(&Scenario::ptx_dbm)}}},
                {"montecarlo",
                 {{"trials", number(&Scenario::trials)},
                  {"realizations", number(&Scenario::realizations)},
                  {"seed", number(&Scenario::seed)},
                  {"analytic_only", [](Scenario &s, const std::string &k, const std::string &v)
                   { s.analytic_only = parse_bool(k, v); }},
                  {"ml_attack", [](Scenario &s, const std::string &k, const std::string &v)
                   { s.ml_attack = parse_bool(k, v); }},
                  {"eve_key_space_mc", number(&Scenario::eve_key_space_mc)},
                  {"workers", number(&Scenario::workers)}}},
                {"output",
                 {{"path", [](Scenario &s, const std::string &, const std::string &v) { s.out = trim(v); }},
                  {"format", [](Scenario &s, const std::string &, const std::string &v)
                   { s.format = parse_format(v); }}}},
                {"factors", {{"psi", grid(&Scenario::psi_values)}, {"omega", grid(&Scenario::omega_grid)}}},
            };
            return table;
        }
    }

    std::vector<double> parse_grid(const std::string &text)
    {
        const std::string t = trim(text);
        std::vector<double> out;
        if (t.find(':') != std::string::npos)
        {
            std::vector<std::string> parts;
            boost::algorithm::split(parts, t, boost::algorithm::is_any_of(":"));
            if (parts.size() != 3)
                throw ConfigError("range '" + text + "' must read start:step:stop.");
            const double start = parse_number<double>("range", parts[0]);
            const double step = parse_number<double>("range", parts[1]);
            const double stop = parse_number<double>("range", parts[2]);
            if (!(step > 0.0) || stop < start)
                throw ConfigError("range '" + text + "' needs step > 0 and stop >= start.");
            // Index-based so that accumulated rounding never drops the end point.
            const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
            if (n > 100000)
                throw ConfigError("range '" + text + "' has too many points.");
            for (long i = 0; i <= n; ++i)
                out.push_back(start + double(i) * step);
            return out;
        }
        for (const auto &item : split_list(t))
            out.push_back(parse_number<double>("list", item));
        return out;
    }

    OutputFormat parse_format(const std::string &text)
    {
        const std::string t = boost::algorithm::to_lower_copy(trim(text));
        if (t == "csv")
            return OutputFormat::csv;
        if (t == "jsonl")
            return OutputFormat::jsonl;
        throw ConfigError("Unknown output format '" + text + "' (expected csv or jsonl).");
    }

    std::string format_name(OutputFormat f)
    {
        return f == OutputFormat::csv ? "csv" : "jsonl";
    }

    void Scenario::validate() const
    {
        try
        {
            cfg.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
        if (strategies.empty())
            throw ConfigError("No strategies given; [sweep] strategies must list at least one.");
        if (phi_grid.empty() || ptx_dbm.empty())
            throw ConfigError("phi_grid and ptx_dbm must be non-empty.");
        for (double phi : phi_grid)
            if (!(phi > 0.0 && phi <= 1.0))
                throw ConfigError("phi_grid values must lie in (0, 1].");
        if (trials < 1 || realizations < 1)
            throw ConfigError("trials and realizations must be at least 1.");
        if (eve_key_space_mc < 2 || eve_key_space_mc > 4096)
            throw ConfigError("eve_key_space_mc must lie in [2, 4096].");
        if (workers < 0)
            throw ConfigError("workers must be non-negative.");
        if (psi_values.empty() || omega_grid.empty())
            throw ConfigError("[factors] psi and omega must be non-empty.");
    }

    Scenario parse_scenario(std::istream &in)
    {
        // The INI reader only knows whole-line ';' comments. Drop '#' lines and trailing
        // comments (a '#' or ';' preceded by whitespace) first.
        std::stringstream cleaned;
        std::string line;
        while (std::getline(in, line))
        {
            const auto first = line.find_first_not_of(" \t");
            if (first != std::string::npos && (line[first] == '#' || line[first] == ';'))
                line.clear();
            for (std::size_t i = 1; i < line.size(); ++i)
                if ((line[i] == '#' || line[i] == ';') && (line[i - 1] == ' ' || line[i - 1] == '\t'))
                {
                    line.erase(i);
                    break;
                }
            cleaned << line << '\n';
        }

        boost::property_tree::ptree tree;
        try
        {
            boost::property_tree::ini_parser::read_ini(cleaned, tree);
        }
        catch (const boost::property_tree::ini_parser_error &e)
        {
            throw ConfigError(std::string("Malformed configuration: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
        }

        Scenario s;
        const auto &table = schema();
        for (const auto &[section, body] : tree)
        {
            const auto sec = table.find(section);
            if (sec == table.end())
            {
                if (!body.data().empty())
                    throw ConfigError("Key '" + section + "' appears outside any section.");
                throw ConfigError("Unknown section [" + section + "].");
            }
            for (const auto &[key, value] : body)
            {
                const auto setter = sec->second.find(key);
                if (setter == sec->second.end())
                    throw ConfigError("Unknown key '" + key + "' in section [" + section + "].");
                setter->second(s, key, value.data());
            }
        }
        s.validate();
        return s;
    }

    Scenario load_scenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("Cannot open configuration file '" + path + "'.");
        return parse_scenario(in);
    }
}
