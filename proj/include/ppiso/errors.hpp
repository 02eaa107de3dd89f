// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy for the point-process isomorphism library.  Every failure
// mode that a caller can provoke with valid-but-unlucky data has a dedicated
// exception type so that harness code can count and classify rejections.

#pragma once

#include <stdexcept>
#include <string>

namespace ppiso {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PPISO_DEFINE_ERROR(NAME)                                          \
    class NAME : public Error {                                           \
    public:                                                               \
        explicit NAME(const std::string& what = #NAME) : Error(what) {}   \
    }

// Domain / pattern plumbing.
PPISO_DEFINE_ERROR(RegionTooLargeForTorus);
PPISO_DEFINE_ERROR(UnsupportedIsometryOnTorus);
PPISO_DEFINE_ERROR(NotSimple);
PPISO_DEFINE_ERROR(MissingPoint);

// Bit-level randomness plumbing.
PPISO_DEFINE_ERROR(TailOverflow);
PPISO_DEFINE_ERROR(OutsideBall);
PPISO_DEFINE_ERROR(NotBracketed);

// Selection rule.
PPISO_DEFINE_ERROR(ThinComponent);
PPISO_DEFINE_ERROR(DegenerateConfiguration);
PPISO_DEFINE_ERROR(NoSites);
PPISO_DEFINE_ERROR(CellTooLargeForTorus);
PPISO_DEFINE_ERROR(WindowExhausted);

// Frames.
PPISO_DEFINE_ERROR(InsufficientHaloPoints);
PPISO_DEFINE_ERROR(SingularMatrix);
PPISO_DEFINE_ERROR(NotASpecialGlobe);

// Polytope sampling.
PPISO_DEFINE_ERROR(PointOnSharedFace);

// Isomorphism pipeline.
PPISO_DEFINE_ERROR(NoSpecialGlobes);
PPISO_DEFINE_ERROR(InconsistentPair);

// Statistics harness.
PPISO_DEFINE_ERROR(InsufficientSamples);

#undef PPISO_DEFINE_ERROR

}  // namespace ppiso
