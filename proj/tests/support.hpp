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

#ifndef FPAUTH_TESTS_SUPPORT_HPP
#define FPAUTH_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "fpauth/authentication.hpp"
#include "fpauth/channel.hpp"
#include "fpauth/precoding.hpp"

namespace fpauth::testing
{
    inline ComplexMatrix random_matrix(std::uint64_t seed, int rows, int cols)
    {
        RandomSource rng(RngStream{seed, 99});
        ComplexMatrix m(rows, cols);
        for (int j = 0; j < cols; ++j)
            rng.fill_complex_normal(m.col(j));
        return m;
    }

    // Channel realization with explicit matrices; geometry and path data left empty.
    inline ChannelRealization manual_channel(const ComplexMatrix &users, const ComplexMatrix &eve)
    {
        ChannelRealization r;
        r.users = users;
        r.eve = eve;
        return r;
    }

    inline double mean(const std::vector<double> &v)
    {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s / double(v.size());
    }

    inline double variance(const std::vector<double> &v)
    {
        const double m = mean(v);
        double s = 0.0;
        for (double x : v)
            s += (x - m) * (x - m);
        return s / double(v.size() - 1);
    }
}

#endif
