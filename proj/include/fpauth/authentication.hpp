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

#ifndef FPAUTH_AUTHENTICATION_HPP
#define FPAUTH_AUTHENTICATION_HPP

#include <array>
#include <cstdint>
#include <memory>

#include "fpauth/channel.hpp"
#include "fpauth/power_split.hpp"
#include "fpauth/precoding.hpp"

namespace fpauth
{
    // Element of the shared key space. The byte string is what enters the tag function;
    // the index only names the key inside the enumerable space.
    struct TagKey
    {
        std::uint64_t index = 0;
        std::array<std::uint8_t, 8> bytes{};

        static TagKey from_index(std::uint64_t index);
    };

    // Tag function bound to one data sequence; tags have the length of the data.
    //
    // The tag for key eta is a CN(0,1) sequence produced by a counter engine whose key is
    // derived from SHA-256(serialize(data) || eta.bytes). The data prefix is hashed once
    // so that sweeping a whole key space only costs one short hash update per key.
    // Serialization: for every symbol, the real then the imaginary part as IEEE-754
    // binary64, little endian.
    class TagGenerator
    {
      public:
        explicit TagGenerator(const ComplexVector &data);
        ~TagGenerator();
        TagGenerator(TagGenerator &&) noexcept;
        TagGenerator &operator=(TagGenerator &&) noexcept;

        ComplexVector operator()(const TagKey &key) const;
        void generate(const TagKey &key, Eigen::Ref<ComplexVector> out) const;
        std::array<std::uint8_t, 32> digest(const TagKey &key) const;
        int tag_length() const { return tag_length_; }

      private:
        struct Impl;
        std::unique_ptr<Impl> impl_;
        int tag_length_;
    };

    ComplexVector generate_tag(const ComplexVector &data, const TagKey &key);

    // Sequences radiated during one block, one column per user / AN stream (L_t rows).
    struct TransmitBlock
    {
        ComplexMatrix data; // s_k
        ComplexMatrix tags; // t_k
        ComplexMatrix an;   // z_i
    };

    // Everything the closed-form statistics condition on.
    struct LinkState
    {
        const ChannelRealization &channel;
        const PrecoderSet &precoders;
        PowerSplit split;
        double noise_var = 0.0; // sigma_n^2 (W)
        int tag_length = 2048;
    };

    // Moments of the correlation statistic under H0 (wrong tag) and H1 (correct tag).
    struct HypothesisStats
    {
        double mu0 = 0.0;
        double var0 = 0.0;
        double mu1 = 0.0;
        double var1 = 0.0;

        // (L_t / 2)(1 + excess) and (L_t / 2)(2 + excess). var1 is formed first and var0
        // derived from it by an exact subtraction, so var1 - var0 == L_t / 2 holds bitwise.
        static HypothesisStats from_excess(int tag_length, double excess);
    };

    struct AuthDecision
    {
        double tau_b = 0.0;
        double tau_0 = 0.0;
        bool authentic = false;
    };

    inline AuthDecision decide(double tau_b, double tau_0) { return {tau_b, tau_0, tau_b > tau_0}; }

    // h_u^H w_u; throws DegenerateGainError when it vanishes.
    cdouble user_effective_gain(const LinkState &link, int u);
    // ||H_e^H w_u||^2; throws DegenerateGainError when it vanishes.
    double eve_effective_gain(const LinkState &link, int u);

    // Residual (tag + multiuser interference + AN leakage + scaled noise) after removing
    // user u's own data and LS-equalizing. `received` holds the entries of y_u^H.
    ComplexVector user_tag_estimate(const ComplexVector &received, const LinkState &link, int u,
                                    const ComplexVector &data_u);

    // Re(estimated^H expected). Throws std::invalid_argument on length mismatch.
    double correlation_statistic(const ComplexVector &estimated, const ComplexVector &expected);

    HypothesisStats user_hypothesis_stats(const LinkState &link, int u);

    // tau_0 = Phi^-1(1 - p_fa) sigma0
    double detection_threshold(double p_fa, double sigma0);

    // P_D = 1 - Phi((tau_0 - mu1) / sigma1)
    double detection_probability(const HypothesisStats &stats, double tau0);

    // Eve's LS tag estimate from Y_e^H (M x L_t): every data and tag contribution except
    // user u's tag is removed using `known`, then the block is combined with w_u^H H_e and
    // divided by sqrt(P_Tx P_t) ||H_e^H w_u||^2.
    ComplexVector eve_tag_estimate(const ComplexMatrix &received, const LinkState &link, int u,
                                   const TransmitBlock &known);

    HypothesisStats eve_hypothesis_stats(const LinkState &link, int u);

    // Index of the key in [0, key_space_size) whose tag maximizes Re(estimated^H tag);
    // ties go to the lowest index.
    std::uint64_t ml_decode_key(const ComplexVector &estimated, const TagGenerator &tags,
                                std::uint64_t key_space_size);
    std::uint64_t ml_decode_key(const ComplexVector &estimated, const ComplexVector &data,
                                std::uint64_t key_space_size);

    // Probability that an ML decoder over `key_space_size` keys picks the correct one.
    double key_detection_probability(const HypothesisStats &stats, std::uint64_t key_space_size);
    // 1 - key_detection_probability, resolved below machine epsilon.
    double key_miss_probability(const HypothesisStats &stats, std::uint64_t key_space_size);
}

#endif
