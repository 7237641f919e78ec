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

#include "fpauth/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/random/normal_distribution.hpp>

namespace fpauth
{
    std::uint64_t mix64(std::uint64_t x)
    {
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    RngStream RngStream::substream(std::uint64_t index) const
    {
        return RngStream{seed, mix64(stream_id ^ mix64(index + 0x632BE59BD9B4E019ULL))};
    }

    CounterEngine::CounterEngine(const RngStream &stream)
        : key_(mix64(mix64(stream.seed + 0xD1B54A32D192ED03ULL) ^ (stream.stream_id * 0x9E3779B97F4A7C15ULL)))
    {
    }

    // ---------- RandomSource ----------

    double RandomSource::uniform()
    {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    double RandomSource::uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    std::uint64_t RandomSource::uniform_index(std::uint64_t n)
    {
        if (n == 0)
            throw std::invalid_argument("uniform_index: empty range.");
        return std::uint64_t((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    double RandomSource::normal()
    {
        boost::random::normal_distribution<double> dist;
        return dist(engine_);
    }

    cdouble RandomSource::complex_normal()
    {
        constexpr double s = 0.70710678118654752440;
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    void RandomSource::fill_complex_normal(Eigen::Ref<ComplexVector> out)
    {
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out[i] = complex_normal();
    }

    ComplexVector sample_complex_normal(RandomSource &rng, Eigen::Index n)
    {
        ComplexVector out(n);
        rng.fill_complex_normal(out);
        return out;
    }

    ComplexVector sample_complex_normal(const RngStream &stream, Eigen::Index n)
    {
        RandomSource rng(stream);
        return sample_complex_normal(rng, n);
    }

    double sample_laplace(RandomSource &rng, double location, double spread_std)
    {
        if (!(spread_std > 0.0))
            throw std::domain_error("sample_laplace: spread must be positive.");
        const double b = spread_std / std::sqrt(2.0);
        // open interval (0, 1) so that the log below stays finite
        const double u = (double(rng.engine()() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
        const double mag = -b * std::log1p(-2.0 * std::abs(u));
        return u < 0.0 ? location - mag : location + mag;
    }

    // ---------- Gaussian kernels ----------

    double std_normal_cdf(double x)
    {
        return 0.5 * std::erfc(-x * 0.70710678118654752440);
    }

    double std_normal_log_cdf(double x)
    {
        if (x > 0.0)
            return std::log1p(-0.5 * std::erfc(x * 0.70710678118654752440));
        if (x > -37.0)
            return std::log(0.5 * std::erfc(-x * 0.70710678118654752440));
        // Mills-ratio expansion; relative error below 1e-9 for x <= -37
        const double x2 = x * x;
        const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
        return -0.5 * x2 - std::log(-x) - 0.91893853320467274178 + std::log(series);
    }

    double std_normal_pdf(double x)
    {
        return 0.39894228040143267794 * std::exp(-0.5 * x * x);
    }

    double std_normal_quantile(double p)
    {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("std_normal_quantile: probability must lie in (0, 1), got " + std::to_string(p));
        return -1.41421356237309504880 * boost::math::erfc_inv(2.0 * p);
    }

    namespace
    {
        constexpr double window = 10.0; // half-width of the integration window in units of sigma1

        void check_sigmas(double sigma0, double sigma1)
        {
            if (!(sigma0 > 0.0) || !(sigma1 > 0.0))
                throw std::domain_error("gauss_integral_power_cdf: standard deviations must be positive.");
        }

        // Breakpoints in the standardized variable x = (t - mu1) / sigma1: the window ends plus
        // the location where Phi^(n-1) switches from ~0 to ~1, so the adaptive rule sees
        // smooth pieces even when the switch is much narrower than the window.
        std::vector<double> breakpoints(double mu0, double sigma0, double mu1, double sigma1,
                                        double exponent, double lo, double hi)
        {
            std::vector<double> pts{lo, hi};
            if (exponent > 0.0)
            {
                const double z_star = std_normal_quantile(std::clamp(1.0 - 1.0 / (exponent + 1.0), 1e-300, 1.0 - 1e-16));
                for (double dz : {-3.0, 0.0, 3.0})
                {
                    const double x = (mu0 + (z_star + dz) * sigma0 - mu1) / sigma1;
                    if (x > lo && x < hi)
                        pts.push_back(x);
                }
            }
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            return pts;
        }

        template <class F>
        double integrate_pieces(F f, const std::vector<double> &pts)
        {
            using boost::math::quadrature::gauss_kronrod;
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                sum += gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1], 20, 1e-13);
            return sum;
        }
    }

    double gauss_integral_power_cdf(double mu0, double sigma0, double mu1, double sigma1,
                                    std::uint64_t cardinality)
    {
        check_sigmas(sigma0, sigma1);
        if (cardinality < 1)
            throw std::domain_error("gauss_integral_power_cdf: cardinality must be at least 1.");
        if (cardinality == 1)
            return 1.0;

        const double exponent = double(cardinality - 1);
        auto power_cdf = [&](double x)
        {
            const double z = (mu1 + sigma1 * x - mu0) / sigma0;
            return std::exp(exponent * std_normal_log_cdf(z));
        };
        auto integrand = [&](double x)
        { return power_cdf(x) * std_normal_pdf(x); };

        const auto pts = breakpoints(mu0, sigma0, mu1, sigma1, exponent, -window, window);
        double value = integrate_pieces(integrand, pts);
        // Upper tail: the power of Phi is non-decreasing, so the mass beyond the window is
        // at least power_cdf(window) * Q(window) and at most Q(window) (~7.6e-24).
        // The lower tail is bounded by Phi(-window) * power_cdf(-window) and dropped.
        value += power_cdf(window) * std_normal_cdf(-window);
        return std::clamp(value, 0.0, 1.0);
    }

    double gauss_integral_power_cdf_complement(double mu0, double sigma0, double mu1, double sigma1,
                                               std::uint64_t cardinality)
    {
        check_sigmas(sigma0, sigma1);
        if (cardinality < 1)
            throw std::domain_error("gauss_integral_power_cdf: cardinality must be at least 1.");
        if (cardinality == 1)
            return 0.0;

        const double exponent = double(cardinality - 1);
        auto integrand = [&](double x)
        {
            const double z = (mu1 + sigma1 * x - mu0) / sigma0;
            return -std::expm1(exponent * std_normal_log_cdf(z)) * std_normal_pdf(x);
        };
        // The miss probability concentrates on the lower side; extend the window down to
        // where the Gaussian weight itself underflows.
        const auto pts = breakpoints(mu0, sigma0, mu1, sigma1, exponent, -38.0, window);
        std::vector<double> dense;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        {
            const double step = 2.0;
            for (double x = pts[i]; x < pts[i + 1]; x += step)
                dense.push_back(x);
        }
        dense.push_back(pts.back());
        const double value = integrate_pieces(integrand, dense);
        return std::clamp(value, 0.0, 1.0);
    }

    // ---------- Units ----------

    DbValue dbm_to_watts(DbValue x)
    {
        if (x.unit != PowerUnit::dBm)
            throw std::invalid_argument("dbm_to_watts: value is not tagged dBm.");
        return {std::pow(10.0, (x.value - 30.0) / 10.0), PowerUnit::watts};
    }

    DbValue watts_to_dbm(DbValue x)
    {
        if (x.unit != PowerUnit::watts)
            throw std::invalid_argument("watts_to_dbm: value is not tagged watts.");
        return {10.0 * std::log10(x.value) + 30.0, PowerUnit::dBm};
    }

    DbValue db_to_linear(DbValue x)
    {
        if (x.unit != PowerUnit::dB)
            throw std::invalid_argument("db_to_linear: value is not tagged dB.");
        return {std::pow(10.0, x.value / 10.0), PowerUnit::linear};
    }

    DbValue linear_to_db(DbValue x)
    {
        if (x.unit != PowerUnit::linear)
            throw std::invalid_argument("linear_to_db: value is not tagged linear.");
        return {10.0 * std::log10(x.value), PowerUnit::dB};
    }
}
