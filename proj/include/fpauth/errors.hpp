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

#ifndef FPAUTH_ERRORS_HPP
#define FPAUTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fpauth
{
    // Raised when a linear system that must be solved exactly is rank-deficient.
    class SingularMatrixError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    // Raised when an equalizer gain (h_u^H w_u or H_e^H w_u) vanishes.
    class DegenerateGainError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    // Raised for power splits or (psi, omega) pairs outside the admissible region.
    // The message names the violated constraint.
    class InfeasibleSplitError : public std::invalid_argument
    {
      public:
        using std::invalid_argument::invalid_argument;
    };
}

#endif
