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

#include "fpauth/precoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fpauth/errors.hpp"

namespace fpauth
{
    ComplexMatrix rzf_precoder(const ComplexMatrix &h, double beta)
    {
        const auto n = h.rows();
        const auto k = h.cols();
        if (k < 1 || n <= k)
            throw std::invalid_argument("rzf_precoder: channel must be N x K with N > K >= 1.");
        if (!(beta >= 0.0))
            throw std::invalid_argument("rzf_precoder: beta must be non-negative.");

        if (beta == 0.0)
        {
            // H (H^H H)^-1 = Q R^-H with H = QR
            Eigen::ColPivHouseholderQR<ComplexMatrix> qr(h);
            qr.setThreshold(1e-12);
            if (qr.rank() < k)
                throw SingularMatrixError("rzf_precoder: H^H H is singular; zero forcing needs beta > 0.");
            const ComplexMatrix gram = h.adjoint() * h;
            Eigen::LLT<ComplexMatrix> llt(gram);
            if (llt.info() != Eigen::Success)
                throw SingularMatrixError("rzf_precoder: H^H H is not positive definite.");
            return h * llt.solve(ComplexMatrix::Identity(k, k));
        }

        ComplexMatrix gram = h.adjoint() * h;
        gram.diagonal().array() += beta;
        Eigen::LLT<ComplexMatrix> llt(gram);
        if (llt.info() != Eigen::Success)
            throw SingularMatrixError("rzf_precoder: regularized Gram matrix is not positive definite.");
        return h * llt.solve(ComplexMatrix::Identity(k, k));
    }

    ComplexMatrix normalize_data_precoder(const ComplexMatrix &w_dir, double phi)
    {
        const auto k = w_dir.cols();
        ComplexMatrix w(w_dir.rows(), k);
        for (Eigen::Index c = 0; c < k; ++c)
        {
            const double norm2 = w_dir.col(c).squaredNorm();
            if (!(norm2 > 0.0))
                throw std::invalid_argument("normalize_data_precoder: column " + std::to_string(c) + " is zero.");
            w.col(c) = std::sqrt(phi / (double(k) * norm2)) * w_dir.col(c);
        }
        return w;
    }

    ComplexMatrix an_precoder(const ComplexMatrix &h)
    {
        const auto n = h.rows();
        if (n <= h.cols())
            throw std::invalid_argument("an_precoder: null space requires N > K.");
        Eigen::JacobiSVD<ComplexMatrix> svd(h.adjoint(), Eigen::ComputeFullV);
        const auto &sv = svd.singularValues();
        const double tol = 1e-10 * (sv.size() > 0 ? sv[0] : 0.0);
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > tol)
                ++rank;
        return svd.matrixV().rightCols(n - rank);
    }

    ComplexMatrix normalize_an_precoder(const ComplexMatrix &v_dir, double phi, int z)
    {
        if (z < 1 || z > v_dir.cols())
            throw std::invalid_argument("normalize_an_precoder: requested " + std::to_string(z) + " AN columns but " +
                                        std::to_string(v_dir.cols()) + " are available.");
        ComplexMatrix v(v_dir.rows(), z);
        for (int c = 0; c < z; ++c)
        {
            const double norm2 = v_dir.col(c).squaredNorm();
            if (!(norm2 > 0.0))
                throw std::invalid_argument("normalize_an_precoder: column " + std::to_string(c) + " is zero.");
            v.col(c) = std::sqrt((1.0 - phi) / (double(z) * norm2)) * v_dir.col(c);
        }
        return v;
    }

    PrecoderSet build_precoders(const ComplexMatrix &h, double beta, double phi, int z)
    {
        return build_precoders(rzf_precoder(h, beta), an_precoder(h), beta, phi, z);
    }

    PrecoderSet build_precoders(const ComplexMatrix &w_dir, const ComplexMatrix &v_dir, double beta, double phi,
                                int z)
    {
        if (!(phi > 0.0 && phi <= 1.0))
            throw std::invalid_argument("build_precoders: phi must lie in (0, 1].");
        return PrecoderSet{normalize_data_precoder(w_dir, phi), normalize_an_precoder(v_dir, phi, z), beta, phi};
    }

    double sinr(int u, const ComplexMatrix &w, const ComplexMatrix &v, const ComplexMatrix &h, double p_s,
                double rho, const SinrOptions &opts)
    {
        const auto hu = h.col(u);
        double signal = 0.0;
        double interference = 0.0;
        for (Eigen::Index k = 0; k < w.cols(); ++k)
        {
            const double g = std::norm(hu.dot(w.col(k)));
            if (k == u)
                signal = p_s * g;
            else
                interference += p_s * g;
            if (opts.tag_as_interference)
                interference += opts.p_t * g;
        }
        for (Eigen::Index i = 0; i < v.cols(); ++i)
            interference += std::norm(hu.dot(v.col(i)));
        return signal / (interference + 1.0 / rho);
    }

    double sum_rate(const ComplexMatrix &w, const ComplexMatrix &v, const ComplexMatrix &h, double p_s, double rho,
                    const SinrOptions &opts)
    {
        double total = 0.0;
        for (Eigen::Index k = 0; k < h.cols(); ++k)
            total += std::log2(1.0 + sinr(int(k), w, v, h, p_s, rho, opts));
        return total;
    }
}
