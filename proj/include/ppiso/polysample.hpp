// SPDX-License-Identifier: Apache-2.0
//
// Injective maps between payload streams and uniform samples in convex
// polytopes, built from spacing representations of simplex points:
//   - one point in a simplex from d substream values via conditional
//     spacing CDFs (F1(v) = 1-(1-v)^d, then nested conditionals);
//   - n points from n substreams, generated directly in lexicographic order
//     of their spacing tuples via an order-statistic chain on the first
//     spacing (generate-then-sort would not be injective);
//   - n points in a polytope by a nested binomial split of the count across
//     the fan triangulation (equivalent to the lexicographic composition
//     table), then per-simplex sampling;
//   - pi_cell: the full cell map (count via a Poisson table, points via the
//     above, residual = odd/even de-interleave half of the rescaled payload).
// Every map has an inverse that reconstructs the leading payload bits.

#pragma once

#include <vector>

#include "ppiso/bitstream.hpp"
#include "ppiso/partition.hpp"
#include "ppiso/polytope.hpp"

namespace ppiso {

// Stored bits per scalar substream; values are read with a PRF-extended tail
// so downstream CDF inversions see full working precision.
inline constexpr size_t kPointStreamBits = 64;
// Precision at which whole-payload values are manipulated.
inline constexpr mpfr_prec_t kBigPrec = 512;
// Stored length of residual / rescaled payload streams.
inline constexpr size_t kResidualBits = 448;
// Strict-interior threshold for recovered barycentric coordinates: generated
// points sit at distance >= ~2^-300 from faces, so anything this close to a
// face signals data from outside the sampler's image.
inline constexpr double kEpsFace = 1e-60;

// One uniform point in a simplex from stream u (d substreams).
std::array<Real, 2> uniform_simplex(const BitStream& u, const Simplex& s,
                                    mpfr_prec_t prec = kWorkPrec);
BitStream uniform_simplex_inv(const std::array<Real, 2>& x, const Simplex& s,
                              mpfr_prec_t prec = kWorkPrec);

// n uniform points with lex-sorted spacing tuples, one substream per tuple.
std::vector<std::array<Real, 2>> multi_uniform_simplex(const BitStream& u, const Simplex& s,
                                                       size_t n, mpfr_prec_t prec = kWorkPrec);
BitStream multi_uniform_simplex_inv(std::vector<std::array<Real, 2>> pts, const Simplex& s,
                                    mpfr_prec_t prec = kWorkPrec);

// n uniform points in a convex polytope (counts split across the fan
// triangulation by nested binomial tables, lexicographic order).
std::vector<std::array<Real, 2>> polytope_n_points(const BitStream& u, const Polytope& poly,
                                                   size_t n, mpfr_prec_t prec = kWorkPrec);
BitStream polytope_n_points_inv(const std::vector<std::array<Real, 2>>& pts, const Polytope& poly,
                                mpfr_prec_t prec = kWorkPrec);

struct CellSample {
    size_t count = 0;
    std::vector<std::array<Real, 2>> points;  // lifted cell coordinates
    BitStream residual;
};

// Full cell map: payload -> (Poisson(intensity * vol) many uniform points,
// residual stream).  For count 0 the residual is the whole rescaled payload.
CellSample pi_cell(const BitStream& u, const Polytope& cell, const Real& intensity,
                   mpfr_prec_t prec = kWorkPrec);
// Inverse; returns the leading `out_bits` bits of the payload.
BitStream pi_cell_inv(const std::vector<std::array<Real, 2>>& pts, const BitStream& residual,
                      const Polytope& cell, const Real& intensity, size_t out_bits,
                      mpfr_prec_t prec = kWorkPrec);

}  // namespace ppiso
