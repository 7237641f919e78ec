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

#ifndef FPAUTH_POWER_SPLIT_HPP
#define FPAUTH_POWER_SPLIT_HPP

namespace fpauth
{
    // How the transmit power is shared between data (phi), artificial noise
    // (1 - phi) and, inside the data beams, between symbols (P_s) and tag (P_t).
    struct PowerSplit
    {
        double ptx_watts = 1.0; // P_Tx
        double phi = 1.0;       // power splitting factor, (0, 1]
        double p_t = 0.0;       // tag power fraction, [0, 1)

        double p_s() const { return 1.0 - p_t; }
        double psi() const { return p_t * phi; }
        double omega() const { return (1.0 - phi) / (p_t * phi); }
        // Power actually radiated on the tag of all users together.
        double tag_power_watts() const { return p_t * ptx_watts * phi; }

        // Validating constructor; throws InfeasibleSplitError naming the violated bound.
        static PowerSplit make(double ptx_watts, double phi, double p_t);
    };
}

#endif
