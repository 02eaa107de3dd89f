// SPDX-License-Identifier: Apache-2.0
//
// Canonical frames for special globes.  Each special globe's halo induces a
// d-tag: a nonsingular d x d matrix of halo-point offsets chosen by a
// deterministic mutually-closest-pair / nearest-chain rule.  Its unique
// positive-diagonal QR factorization defines the fixing isometry
// sigma(z) = Q^T (z - c), which maps the globe center to the origin and puts
// the cell in an isometry-invariant pose.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ppiso/domain.hpp"
#include "ppiso/isometry.hpp"
#include "ppiso/pattern.hpp"
#include "ppiso/selection.hpp"

namespace ppiso {

using Mat2 = std::array<std::array<Real, 2>, 2>;

// Offsets of the chosen halo chain relative to the globe center.
struct DTag {
    std::size_t globe_index = 0;
    std::vector<Pt> halo_points;  // h^1..h^d, absolute (domain) coordinates
    Mat2 H{{{Real(0.0), Real(0.0)}, {Real(0.0), Real(0.0)}}};  // columns h^j - c, lifted
};

struct Frame {
    std::size_t globe_index = 0;
    Pt center;  // globe center c
    Mat2 Q{{{Real(1.0), Real(0.0)}, {Real(0.0), Real(1.0)}}};
    Mat2 R{{{Real(0.0), Real(0.0)}, {Real(0.0), Real(0.0)}}};
};

// Halo points of globe i: pattern points at distance in [halo_in, shell_in]
// from the center (closed shell), sorted by chain order.  Throws
// InsufficientHaloPoints / DegenerateConfiguration.
DTag d_tag(const PointPattern& mu, const GlobeSet& globes, std::size_t i,
           const SelectionParams& params);

// Unique QR factorization with strictly positive diag(R) via modified
// Gram-Schmidt at kWorkPrec.  Throws SingularMatrix.
std::pair<Mat2, Mat2> qr_positive(const Mat2& H, int dim);

// Frame of special globe i (throws NotASpecialGlobe otherwise).  When
// translation_only, Q = I (pure recentering, the translation-equivariant
// fallback mode).
Frame make_frame(const PointPattern& mu, const GlobeSet& globes, std::size_t i,
                 const SelectionParams& params, bool translation_only = false);

// The fixing isometry as a Euclidean map sigma(z) = Q^T z - Q^T c with
// inverse z -> Q z + c.  Intended for lifted coordinates; on a torus apply
// it via frame_apply / frame_invert below, not Isometry::apply.
Isometry fixing_isometry(const Frame& f, int dim);

// sigma applied to a domain point near the globe center: Q^T * lift(x - c).
std::array<Real, 2> frame_apply(const Frame& f, const Pt& x, const Domain& dom);

// sigma^{-1}: c + Q z, wrapped back into the domain.
Pt frame_invert(const Frame& f, const std::array<Real, 2>& z, const Domain& dom);

}  // namespace ppiso
