// SPDX-License-Identifier: Apache-2.0
//
// Finite observation domains (torus or box) in dimensions 1 and 2, points with
// dyadic coordinates, and exact distance predicates.  All comparisons against
// dyadic thresholds are exact: in d=1 distances themselves are dyadic, in d=2
// squared distances are (products are taken at full precision).

#pragma once

#include <array>
#include <cmath>

#include "ppiso/errors.hpp"
#include "ppiso/real.hpp"

namespace ppiso {

struct Domain {
    int dim = 1;
    bool torus = true;
    std::array<Real, 2> sides{Real(0.0), Real(0.0)};

    static Domain torus1(Real len) { return Domain{1, true, {std::move(len), Real(0.0)}}; }
    static Domain torus2(Real lx, Real ly) { return Domain{2, true, {std::move(lx), std::move(ly)}}; }
    static Domain box1(Real len) { return Domain{1, false, {std::move(len), Real(0.0)}}; }
    static Domain box2(Real lx, Real ly) { return Domain{2, false, {std::move(lx), std::move(ly)}}; }

    Real volume() const {
        return dim == 1 ? sides[0] : mul_full(sides[0], sides[1]);
    }
    Real min_side() const {
        if (dim == 1) return sides[0];
        return sides[0] <= sides[1] ? sides[0] : sides[1];
    }
    bool same_shape(const Domain& o) const {
        if (dim != o.dim || torus != o.torus) return false;
        for (int a = 0; a < dim; ++a)
            if (sides[a] != o.sides[a]) return false;
        return true;
    }
};

// A point with exact dyadic coordinates plus a cached double mirror used for
// broad-phase filtering; exact values are authoritative.
struct Pt {
    std::array<Real, 2> c{Real(0.0), Real(0.0)};
    std::array<double, 2> cd{0.0, 0.0};

    Pt() = default;
    explicit Pt(Real x) : c{std::move(x), Real(0.0)} { sync(); }
    Pt(Real x, Real y) : c{std::move(x), std::move(y)} { sync(); }
    void sync() { cd[0] = c[0].d(); cd[1] = c[1].d(); }
    bool operator==(const Pt& o) const { return c[0] == o.c[0] && c[1] == o.c[1]; }
};

// Exact per-axis separation |a-b|, reduced for the torus: min(d, side-d).
inline Real axis_delta(const Real& a, const Real& b, const Domain& dom, int axis) {
    Real d = (a - b).abs();
    if (dom.torus) {
        Real alt = dom.sides[axis] - d;
        if (alt < d) return alt;
    }
    return d;
}

// Exact squared distance (d=2) / exact distance (d=1, stored in the same slot
// as its own square being irrelevant: callers use dist_cmp below).
inline Real dist_d1(const Pt& a, const Pt& b, const Domain& dom) {
    return axis_delta(a.c[0], b.c[0], dom, 0);
}
inline Real dist_sq_d2(const Pt& a, const Pt& b, const Domain& dom) {
    Real dx = axis_delta(a.c[0], b.c[0], dom, 0);
    Real dy = axis_delta(a.c[1], b.c[1], dom, 1);
    return sqr_full(dx) + sqr_full(dy);
}

// Exact comparison of dist(a,b) against a dyadic threshold t >= 0.
// Returns <0, 0, >0 as dist < t, == t, > t.
inline int dist_cmp(const Pt& a, const Pt& b, const Domain& dom, const Real& t) {
    if (dom.dim == 1) return dist_d1(a, b, dom).cmp(t);
    return dist_sq_d2(a, b, dom).cmp(sqr_full(t));
}

// Approximate distance (double), for broad-phase filtering only.
inline double dist_approx(const Pt& a, const Pt& b, const Domain& dom) {
    double acc = 0;
    for (int ax = 0; ax < dom.dim; ++ax) {
        double d = std::fabs(a.cd[ax] - b.cd[ax]);
        if (dom.torus) {
            double s = dom.sides[ax].d();
            if (s - d < d) d = s - d;
        }
        acc += d * d;
    }
    return dom.dim == 1 ? std::sqrt(acc) : std::sqrt(acc);
}

// Wrap a coordinate into [0, side) exactly (value assumed within a few
// multiples of the side).
inline Real wrap_coord(Real x, const Real& side) {
    while (x.sign() < 0) x += side;
    while (x >= side) x -= side;
    return x;
}

// Signed per-axis offset z - ref reduced into (-period/2, period/2] exactly
// (torus), or the plain difference (box).
inline Real lifted_delta(const Real& z, const Real& ref, const Real& period, bool torus) {
    Real d = z - ref;
    if (!torus) return d;
    Real half = period.half();
    while (d > half) d -= period;
    while (d <= Real(0.0, kCoordPrec) - half) d += period;
    return d;
}

}  // namespace ppiso
