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

#ifndef FPAUTH_PRECODING_HPP
#define FPAUTH_PRECODING_HPP

#include "fpauth/numerics.hpp"

namespace fpauth
{
    // Data precoder W (N x K, ||w_k||^2 = phi / K) and AN precoder V (N x Z,
    // ||v_i||^2 = (1 - phi) / Z, orthogonal to every user channel).
    struct PrecoderSet
    {
        ComplexMatrix w;
        ComplexMatrix v;
        double beta = 0.0;
        double phi = 1.0;
    };

    // Unnormalized RZF directions (H H^H + beta I)^-1 H for an N x K aggregate channel.
    // Evaluated in the equivalent K x K form H (H^H H + beta I)^-1. With beta = 0 this is
    // zero forcing and throws SingularMatrixError if H has rank below K.
    ComplexMatrix rzf_precoder(const ComplexMatrix &h, double beta);

    // Scales column k to squared norm phi / K. Throws std::invalid_argument on a zero column.
    ComplexMatrix normalize_data_precoder(const ComplexMatrix &w_dir, double phi);

    // Orthonormal basis of null(H^H), N x (N - rank H). Rank is decided by an SVD with
    // tolerance 1e-10 times the largest singular value.
    ComplexMatrix an_precoder(const ComplexMatrix &h);

    // Keeps the first Z basis columns and scales each to squared norm (1 - phi) / Z.
    ComplexMatrix normalize_an_precoder(const ComplexMatrix &v_dir, double phi, int z);

    PrecoderSet build_precoders(const ComplexMatrix &h, double beta, double phi, int z);

    // Rescales already-computed directions; avoids repeating the solves when only phi changes.
    PrecoderSet build_precoders(const ComplexMatrix &w_dir, const ComplexMatrix &v_dir, double beta, double phi,
                                int z);

    struct SinrOptions
    {
        // Count the superimposed tags (power p_t on every data beam) as interference.
        bool tag_as_interference = false;
        double p_t = 0.0;
    };

    // SINR of user u (zero-based):
    // P_s |h_u^H w_u|^2 / (sum_{k!=u} P_s |h_u^H w_k|^2 + sum_i |h_u^H v_i|^2 + 1/rho)
    double sinr(int u, const ComplexMatrix &w, const ComplexMatrix &v, const ComplexMatrix &h, double p_s,
                double rho, const SinrOptions &opts = {});

    // Sum over users of log2(1 + SINR_k), in bit/s/Hz.
    double sum_rate(const ComplexMatrix &w, const ComplexMatrix &v, const ComplexMatrix &h, double p_s, double rho,
                    const SinrOptions &opts = {});
}

#endif
