// SPDX-License-Identifier: Apache-2.0
//
// Convex polytopes in (lifted) coordinates: intervals in d=1, convex polygons
// in d=2 held counter-clockwise with a canonical (lexicographically smallest)
// start vertex.  Cells of torus tessellations are represented lifted — i.e. in
// plain Euclidean coordinates around their site — and mapped back modulo the
// domain by the caller.

#pragma once

#include <array>
#include <vector>

#include "ppiso/errors.hpp"
#include "ppiso/real.hpp"

namespace ppiso {

inline constexpr double kEpsGeom = 1e-9;
inline constexpr double kEpsOrth = 1e-10;

struct Simplex {
    int dim = 1;
    // d=1: v[0], v[1] endpoints (x-coordinate only); d=2: triangle, CCW.
    std::array<std::array<Real, 2>, 3> v{};
    Real volume() const;  // length / unsigned area
};

struct Polytope {
    int dim = 1;
    // d=1: v[0] = {a}, v[1] = {b}, a < b.  d=2: CCW polygon vertices.
    std::vector<std::array<Real, 2>> v;

    static Polytope interval(Real a, Real b);
    static Polytope polygon(std::vector<std::array<Real, 2>> verts);  // canonicalizes

    Real volume() const;
    bool contains(const std::array<Real, 2>& x, double eps = kEpsGeom) const;
    // Rotate vertex order so the lexicographically smallest vertex comes
    // first (orientation must already be CCW).
    void canonicalize();
    // Clip by the half-plane of points nearer `keep` than `other`
    // (perpendicular bisector).  d=2 only.
    Polytope clip_bisector(const std::array<Real, 2>& keep,
                           const std::array<Real, 2>& other) const;
    // Fan triangulation from the canonical first vertex; d=1 returns the
    // interval itself as a single simplex.
    std::vector<Simplex> triangulate() const;
};

// Barycentric coordinates of x in s (d=1: 2 coords, d=2: 3 coords), in vertex
// order.  Throws PointOnSharedFace when x is within eps of the boundary or
// outside.
std::array<Real, 3> barycentric(const Simplex& s, const std::array<Real, 2>& x,
                                mpfr_prec_t prec, double eps = kEpsGeom,
                                bool strict_interior = true);

}  // namespace ppiso
