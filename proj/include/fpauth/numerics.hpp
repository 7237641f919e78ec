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

#ifndef FPAUTH_NUMERICS_HPP
#define FPAUTH_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace fpauth
{
    using cdouble = std::complex<double>;
    using ComplexVector = Eigen::VectorXcd;
    using ComplexMatrix = Eigen::MatrixXcd;

    inline constexpr double pi = 3.14159265358979323846;

    // ---------- Random streams ----------

    // Immutable descriptor of one independent random substream. Two descriptors
    // with equal (seed, stream_id) yield identical sample sequences.
    struct RngStream
    {
        std::uint64_t seed = 0;
        std::uint64_t stream_id = 0;

        // Derives a child stream; children of distinct parents or distinct
        // indices do not collide in practice (64-bit mixing).
        RngStream substream(std::uint64_t index) const;
    };

    // 64-bit finalizer of SplitMix64.
    std::uint64_t mix64(std::uint64_t x);

    // Counter-based engine: the i-th output is mix64(key + i * gamma). Satisfies
    // UniformRandomBitGenerator so it plugs into <random> and Boost.Random.
    class CounterEngine
    {
      public:
        using result_type = std::uint64_t;

        explicit CounterEngine(const RngStream &stream);
        explicit CounterEngine(std::uint64_t key) : key_(key) {}

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        result_type operator()()
        {
            counter_ += 0x9E3779B97F4A7C15ULL;
            return mix64(key_ + counter_);
        }

      private:
        std::uint64_t key_;
        std::uint64_t counter_ = 0;
    };

    // Sampler bound to one stream. Not thread-safe; create one per worker/trial.
    class RandomSource
    {
      public:
        explicit RandomSource(const RngStream &stream) : engine_(stream) {}
        explicit RandomSource(std::uint64_t key) : engine_(key) {}

        double uniform();                                 // [0, 1)
        double uniform(double lo, double hi);             // [lo, hi)
        std::uint64_t uniform_index(std::uint64_t n);     // [0, n)
        double normal();                                  // N(0, 1)
        cdouble complex_normal();                         // CN(0, 1)
        void fill_complex_normal(Eigen::Ref<ComplexVector> out);

        CounterEngine &engine() { return engine_; }

      private:
        CounterEngine engine_;
    };

    // n i.i.d. CN(0,1) samples (real and imaginary parts each of variance 1/2).
    ComplexVector sample_complex_normal(RandomSource &rng, Eigen::Index n);
    ComplexVector sample_complex_normal(const RngStream &stream, Eigen::Index n);

    // Laplace draw with the given mean and standard deviation (scale = std / sqrt(2)).
    double sample_laplace(RandomSource &rng, double location, double spread_std);

    // ---------- Gaussian kernels ----------

    double std_normal_cdf(double x);
    double std_normal_log_cdf(double x);
    double std_normal_pdf(double x);

    // Inverse of std_normal_cdf. Throws std::domain_error unless 0 < p < 1.
    double std_normal_quantile(double p);

    // Integral over the real line of
    //     Phi((t - mu0) / sigma0)^(cardinality - 1) * phi((t - mu1) / sigma1) / sigma1,
    // i.e. the probability that a N(mu1, sigma1^2) draw exceeds the maximum of
    // (cardinality - 1) i.i.d. N(mu0, sigma0^2) draws.
    double gauss_integral_power_cdf(double mu0, double sigma0, double mu1, double sigma1,
                                    std::uint64_t cardinality);

    // 1 - gauss_integral_power_cdf(...), evaluated without cancellation so that
    // values far below machine epsilon stay resolvable.
    double gauss_integral_power_cdf_complement(double mu0, double sigma0, double mu1, double sigma1,
                                               std::uint64_t cardinality);

    // ---------- Units ----------

    enum class PowerUnit
    {
        dB,
        dBm,
        watts,
        linear
    };

    struct DbValue
    {
        double value = 0.0;
        PowerUnit unit = PowerUnit::dB;
    };

    DbValue dbm_to_watts(DbValue x);
    DbValue watts_to_dbm(DbValue x);
    DbValue db_to_linear(DbValue x);
    DbValue linear_to_db(DbValue x);

    inline double dbm_to_watts(double dbm) { return dbm_to_watts(DbValue{dbm, PowerUnit::dBm}).value; }
    inline double db_to_linear(double db) { return db_to_linear(DbValue{db, PowerUnit::dB}).value; }
}

#endif
