// SPDX-License-Identifier: Apache-2.0
//
// The headline pipeline.  psi resamples the unique point x_i of every special
// globe into a payload stream (via the fixing isometry and the ball/interval
// code), runs the cell map on the globe's Voronoi cell to produce a fresh
// Poisson(s) pattern there plus a residual, and turns the residual back into
// a replacement point inside the globe.  The result is a pair (X', pi'(X))
// of independent Poisson patterns from which the input is recoverable:
// selection, tessellation and frames depend only on the pattern outside the
// globes, which psi never touches.  phi chains psi with the inverse applied
// to the swapped pair, turning intensity r into intensity s.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ppiso/bitstream.hpp"
#include "ppiso/frames.hpp"
#include "ppiso/pattern.hpp"
#include "ppiso/selection.hpp"

namespace ppiso {

enum class FrameMode { kIsometry, kTranslation };

// Stored payload bits per coordinate of the extracted globe-point code.
inline constexpr int kAlphaBitsPerCoord = 192;

struct IsoOutput {
    PointPattern first;   // X': input with each x_i replaced, intensity label r
    PointPattern second;  // pi'(X): freshly generated, intensity s
    FrameMode mode = FrameMode::kIsometry;
    double r = 1.0;  // source intensity label (metadata; not used forward)
    double s = 1.0;  // intensity of `second`, consumed by the inverse
};

// Unit-ball position of the special globe's unique point, canonicalized by
// the fixing isometry (or recentered only, in translation mode), pushed
// through the ball/interval code.  Throws NotASpecialGlobe.
BitStream alpha_prime(const PointPattern& mu, const GlobeSet& globes,
                      const Frame& frame, std::size_t i);

// The isomorphism from one Poisson pattern to an independent pair.
// Throws NoSpecialGlobes on realizations with no special globe.
IsoOutput psi(const PointPattern& mu, double r, double s,
              const SelectionParams& params, FrameMode mode = FrameMode::kIsometry);

// Inverse of psi; recomputes globes, cells and frames from out.first.
// Throws InconsistentPair when the pair could not have been produced by psi.
PointPattern psi_inv(const IsoOutput& out, const SelectionParams& params);

// Intensity-changing isomorphism: psi_r^{-1} applied to the swapped psi_s
// pair.  phi_inv is the same construction with r and s exchanged.
PointPattern phi(const PointPattern& mu, double r, double s,
                 const SelectionParams& params, FrameMode mode = FrameMode::kIsometry);
PointPattern phi_inv(const PointPattern& nu, double r, double s,
                     const SelectionParams& params, FrameMode mode = FrameMode::kIsometry);

// One pattern into an independent pair of arbitrary intensities (s, s2).
std::pair<PointPattern, PointPattern> product_iso(const PointPattern& mu, double r,
                                                  double s, double s2,
                                                  const SelectionParams& params,
                                                  FrameMode mode = FrameMode::kIsometry);

// Baseline unit-grid generator (d=2 box with integer sides): per cell, a
// Poisson count followed by a 2m-way de-interleave pairing stream i with
// stream 2m-i+1 for the i-th point's coordinates.
PointPattern grid_generate(const std::vector<BitStream>& cell_streams, double r,
                           const Domain& dom, int coordbits = kDefaultCoordBits);

}  // namespace ppiso
