// SPDX-License-Identifier: Apache-2.0
//
// Bit-interleaved code between the closed unit ball and [0,1).  The radial and
// angular coordinates are pushed through their CDFs (radial F0(R) = R^d; d=2
// angle theta/2pi; d=3 polar (1-cos)/2 then azimuthal /2pi), each expanded to
// `bits` binary digits, and the digit streams are interleaved F0, F1, ...
// In d=1 the map is (z+1)/2 and is exact on dyadics.

#pragma once

#include <array>

#include "ppiso/bitstream.hpp"
#include "ppiso/real.hpp"

namespace ppiso {

// z must lie in the closed unit ball (exact squared-norm check); output has
// dim * bits stored bits.
BitStream ball_to_interval(const std::array<Real, 3>& z, int dim, int bits,
                           mpfr_prec_t prec = kWorkPrec);

// Inverse decode from the leading dim * bits bits of u.
std::array<Real, 3> interval_to_ball(const BitStream& u, int dim,
                                     mpfr_prec_t prec = kWorkPrec);

}  // namespace ppiso
