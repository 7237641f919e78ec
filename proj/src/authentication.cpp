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

#include "fpauth/authentication.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include <openssl/evp.h>

#include "fpauth/errors.hpp"

namespace fpauth
{
    TagKey TagKey::from_index(std::uint64_t index)
    {
        TagKey key;
        key.index = index;
        for (int i = 0; i < 8; ++i)
            key.bytes[i] = std::uint8_t(index >> (8 * i));
        return key;
    }

    // ---------- TagGenerator ----------

    namespace
    {
        struct MdCtxDeleter
        {
            void operator()(EVP_MD_CTX *ctx) const { EVP_MD_CTX_free(ctx); }
        };
        using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

        MdCtx new_ctx()
        {
            MdCtx ctx(EVP_MD_CTX_new());
            if (!ctx)
                throw std::runtime_error("TagGenerator: cannot allocate digest context.");
            return ctx;
        }

        void put_le(std::uint64_t v, std::uint8_t *out)
        {
            for (int i = 0; i < 8; ++i)
                out[i] = std::uint8_t(v >> (8 * i));
        }

        std::uint64_t get_le(const std::uint8_t *in)
        {
            std::uint64_t v = 0;
            for (int i = 7; i >= 0; --i)
                v = (v << 8) | in[i];
            return v;
        }
    }

    struct TagGenerator::Impl
    {
        MdCtx prefix = new_ctx();
    };

    TagGenerator::TagGenerator(const ComplexVector &data) : impl_(std::make_unique<Impl>()), tag_length_(int(data.size()))
    {
        if (data.size() < 1)
            throw std::invalid_argument("TagGenerator: data sequence must be non-empty.");
        std::vector<std::uint8_t> buf(std::size_t(data.size()) * 16);
        for (Eigen::Index i = 0; i < data.size(); ++i)
        {
            put_le(std::bit_cast<std::uint64_t>(data[i].real()), &buf[std::size_t(i) * 16]);
            put_le(std::bit_cast<std::uint64_t>(data[i].imag()), &buf[std::size_t(i) * 16 + 8]);
        }
        if (EVP_DigestInit_ex(impl_->prefix.get(), EVP_sha256(), nullptr) != 1 ||
            EVP_DigestUpdate(impl_->prefix.get(), buf.data(), buf.size()) != 1)
            throw std::runtime_error("TagGenerator: SHA-256 initialization failed.");
    }

    TagGenerator::~TagGenerator() = default;
    TagGenerator::TagGenerator(TagGenerator &&) noexcept = default;
    TagGenerator &TagGenerator::operator=(TagGenerator &&) noexcept = default;

    std::array<std::uint8_t, 32> TagGenerator::digest(const TagKey &key) const
    {
        MdCtx ctx = new_ctx();
        std::array<std::uint8_t, 32> out{};
        unsigned int len = 0;
        if (EVP_MD_CTX_copy_ex(ctx.get(), impl_->prefix.get()) != 1 ||
            EVP_DigestUpdate(ctx.get(), key.bytes.data(), key.bytes.size()) != 1 ||
            EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size())
            throw std::runtime_error("TagGenerator: SHA-256 evaluation failed.");
        return out;
    }

    void TagGenerator::generate(const TagKey &key, Eigen::Ref<ComplexVector> out) const
    {
        if (out.size() != tag_length_)
            throw std::invalid_argument("TagGenerator: output length differs from the tag length.");
        const auto d = digest(key);
        std::uint64_t seed = 0;
        for (int w = 3; w >= 0; --w)
            seed = mix64(seed ^ get_le(&d[std::size_t(w) * 8]));
        RandomSource rng(seed);
        rng.fill_complex_normal(out);
    }

    ComplexVector TagGenerator::operator()(const TagKey &key) const
    {
        ComplexVector out(tag_length_);
        generate(key, out);
        return out;
    }

    ComplexVector generate_tag(const ComplexVector &data, const TagKey &key)
    {
        return TagGenerator(data)(key);
    }

    // ---------- Statistics ----------

    HypothesisStats HypothesisStats::from_excess(int tag_length, double excess)
    {
        const double half = 0.5 * double(tag_length);
        HypothesisStats s;
        s.mu0 = 0.0;
        s.mu1 = double(tag_length);
        s.var1 = half * (2.0 + excess);
        s.var0 = s.var1 - half; // exact: var1 >= 2 * half
        return s;
    }

    cdouble user_effective_gain(const LinkState &link, int u)
    {
        const cdouble g = link.channel.h(u).dot(link.precoders.w.col(u));
        if (std::abs(g) == 0.0)
            throw DegenerateGainError("user " + std::to_string(u) + ": effective gain h_u^H w_u is zero.");
        return g;
    }

    double eve_effective_gain(const LinkState &link, int u)
    {
        const double g = (link.channel.eve.adjoint() * link.precoders.w.col(u)).squaredNorm();
        if (!(g > 0.0))
            throw DegenerateGainError("user " + std::to_string(u) + ": Eve's combined gain ||H_e^H w_u|| is zero.");
        return g;
    }

    ComplexVector user_tag_estimate(const ComplexVector &received, const LinkState &link, int u,
                                    const ComplexVector &data_u)
    {
        if (received.size() != data_u.size())
            throw std::invalid_argument("user_tag_estimate: received block and data differ in length.");
        const auto &sp = link.split;
        const cdouble g = user_effective_gain(link, u);
        const ComplexVector row = (received - std::sqrt(sp.ptx_watts * sp.p_s()) * g * data_u.conjugate()) /
                                  (std::sqrt(sp.ptx_watts * sp.p_t) * g);
        return row.conjugate();
    }

    double correlation_statistic(const ComplexVector &estimated, const ComplexVector &expected)
    {
        if (estimated.size() != expected.size())
            throw std::invalid_argument("correlation_statistic: sequences differ in length.");
        return estimated.dot(expected).real();
    }

    HypothesisStats user_hypothesis_stats(const LinkState &link, int u)
    {
        const auto &sp = link.split;
        const auto hu = link.channel.h(u);
        const double own = std::norm(user_effective_gain(link, u));
        double mui = 0.0;
        for (Eigen::Index k = 0; k < link.precoders.w.cols(); ++k)
            if (k != u)
                mui += std::norm(hu.dot(link.precoders.w.col(k)));
        double an = 0.0;
        for (Eigen::Index i = 0; i < link.precoders.v.cols(); ++i)
            an += std::norm(hu.dot(link.precoders.v.col(i)));
        const double excess = mui / (sp.p_t * own) + an / (sp.p_t * own) + link.noise_var / (sp.ptx_watts * sp.p_t * own);
        return HypothesisStats::from_excess(link.tag_length, excess);
    }

    double detection_threshold(double p_fa, double sigma0)
    {
        if (!(sigma0 > 0.0))
            throw std::domain_error("detection_threshold: sigma0 must be positive.");
        return std_normal_quantile(1.0 - p_fa) * sigma0;
    }

    double detection_probability(const HypothesisStats &stats, double tau0)
    {
        if (!(stats.var1 > 0.0))
            throw std::domain_error("detection_probability: var1 must be positive.");
        return std_normal_cdf(-(tau0 - stats.mu1) / std::sqrt(stats.var1));
    }

    ComplexVector eve_tag_estimate(const ComplexMatrix &received, const LinkState &link, int u,
                                   const TransmitBlock &known)
    {
        const auto &sp = link.split;
        const auto &w = link.precoders.w;
        const auto &he = link.channel.eve;
        if (received.rows() != he.cols() || received.cols() != known.data.rows())
            throw std::invalid_argument("eve_tag_estimate: received block must be M x L_t.");

        ComplexMatrix residual = received;
        const double a = std::sqrt(sp.ptx_watts);
        for (Eigen::Index k = 0; k < w.cols(); ++k)
        {
            const ComplexVector beam = he.adjoint() * w.col(k);
            if (k == u)
                residual.noalias() -= (a * std::sqrt(sp.p_s())) * beam * known.data.col(k).adjoint();
            else
            {
                const ComplexVector x = std::sqrt(sp.p_s()) * known.data.col(k) + std::sqrt(sp.p_t) * known.tags.col(k);
                residual.noalias() -= a * beam * x.adjoint();
            }
        }
        const double gain = eve_effective_gain(link, u);
        const ComplexVector combiner = he.adjoint() * w.col(u);
        const Eigen::RowVectorXcd row = combiner.adjoint() * residual / (std::sqrt(sp.ptx_watts * sp.p_t) * gain);
        return row.adjoint();
    }

    HypothesisStats eve_hypothesis_stats(const LinkState &link, int u)
    {
        const auto &sp = link.split;
        const auto &he = link.channel.eve;
        const double gain = eve_effective_gain(link, u);
        const Eigen::RowVectorXcd lead = link.precoders.w.col(u).adjoint() * he * he.adjoint();
        double an = 0.0;
        for (Eigen::Index i = 0; i < link.precoders.v.cols(); ++i)
            an += std::norm(lead.dot(link.precoders.v.col(i).conjugate()));
        const double excess = an / (sp.p_t * gain * gain) + link.noise_var / (sp.ptx_watts * sp.p_t * gain);
        return HypothesisStats::from_excess(link.tag_length, excess);
    }

    std::uint64_t ml_decode_key(const ComplexVector &estimated, const TagGenerator &tags,
                                std::uint64_t key_space_size)
    {
        if (key_space_size < 1)
            throw std::invalid_argument("ml_decode_key: key space is empty.");
        if (estimated.size() != tags.tag_length())
            throw std::invalid_argument("ml_decode_key: estimate and tags differ in length.");
        ComplexVector candidate(tags.tag_length());
        std::uint64_t best = 0;
        double best_tau = -std::numeric_limits<double>::infinity();
        for (std::uint64_t i = 0; i < key_space_size; ++i)
        {
            tags.generate(TagKey::from_index(i), candidate);
            const double tau = estimated.dot(candidate).real();
            if (tau > best_tau)
            {
                best_tau = tau;
                best = i;
            }
        }
        return best;
    }

    std::uint64_t ml_decode_key(const ComplexVector &estimated, const ComplexVector &data,
                                std::uint64_t key_space_size)
    {
        return ml_decode_key(estimated, TagGenerator(data), key_space_size);
    }

    double key_detection_probability(const HypothesisStats &stats, std::uint64_t key_space_size)
    {
        return gauss_integral_power_cdf(stats.mu0, std::sqrt(stats.var0), stats.mu1, std::sqrt(stats.var1),
                                        key_space_size);
    }

    double key_miss_probability(const HypothesisStats &stats, std::uint64_t key_space_size)
    {
        return gauss_integral_power_cdf_complement(stats.mu0, std::sqrt(stats.var0), stats.mu1,
                                                   std::sqrt(stats.var1), key_space_size);
    }
}
