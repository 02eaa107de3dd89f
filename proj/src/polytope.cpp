// SPDX-License-Identifier: Apache-2.0

#include "ppiso/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace ppiso {

namespace {

// Signed doubled area of triangle (a, b, c), rounded at kCoordPrec.
Real cross2(const std::array<Real, 2>& a, const std::array<Real, 2>& b,
            const std::array<Real, 2>& c) {
    Real abx = b[0] - a[0], aby = b[1] - a[1];
    Real acx = c[0] - a[0], acy = c[1] - a[1];
    return mul_full(abx, acy) - mul_full(aby, acx);
}

}  // namespace

Real Simplex::volume() const {
    if (dim == 1) return (v[1][0] - v[0][0]).abs();
    return cross2(v[0], v[1], v[2]).abs().half();
}

Polytope Polytope::interval(Real a, Real b) {
    if (!(a < b)) throw DegenerateConfiguration("interval: a >= b");
    Polytope p;
    p.dim = 1;
    p.v = {{std::move(a), Real(0.0)}, {std::move(b), Real(0.0)}};
    return p;
}

Polytope Polytope::polygon(std::vector<std::array<Real, 2>> verts) {
    Polytope p;
    p.dim = 2;
    p.v = std::move(verts);
    if (p.v.size() < 3) throw DegenerateConfiguration("polygon: fewer than 3 vertices");
    // Ensure CCW orientation via the shoelace sign.
    Real area2(0.0, kCoordPrec);
    for (size_t i = 0; i < p.v.size(); ++i) {
        const auto& a = p.v[i];
        const auto& b = p.v[(i + 1) % p.v.size()];
        area2 += mul_full(a[0], b[1]) - mul_full(a[1], b[0]);
    }
    if (area2.sign() < 0) std::reverse(p.v.begin(), p.v.end());
    p.canonicalize();
    return p;
}

Real Polytope::volume() const {
    if (dim == 1) return v[1][0] - v[0][0];
    Real area2(0.0, kCoordPrec);
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        area2 += mul_full(a[0], b[1]) - mul_full(a[1], b[0]);
    }
    return area2.abs().half();
}

bool Polytope::contains(const std::array<Real, 2>& x, double eps) const {
    if (dim == 1) return x[0].cmp(v[0][0]) >= 0 && x[0].cmp(v[1][0]) <= 0;
    for (size_t i = 0; i < v.size(); ++i) {
        Real c = cross2(v[i], v[(i + 1) % v.size()], x);
        if (c.d() < -eps) return false;
    }
    return true;
}

void Polytope::canonicalize() {
    if (dim == 1) return;
    size_t best = 0;
    for (size_t i = 1; i < v.size(); ++i) {
        int c = v[i][0].cmp(v[best][0]);
        if (c < 0 || (c == 0 && v[i][1] < v[best][1])) best = i;
    }
    std::rotate(v.begin(), v.begin() + static_cast<long>(best), v.end());
}

Polytope Polytope::clip_bisector(const std::array<Real, 2>& keep,
                                 const std::array<Real, 2>& other) const {
    if (dim != 2) throw Error("clip_bisector: d=2 only");
    // Half-plane: n . x <= c with n = other - keep, c = n . midpoint.
    Real nx = other[0] - keep[0], ny = other[1] - keep[1];
    Real mx = (keep[0] + other[0]).half(), my = (keep[1] + other[1]).half();
    Real c = mul_full(nx, mx) + mul_full(ny, my);

    auto side = [&](const std::array<Real, 2>& p) {
        return (mul_full(nx, p[0]) + mul_full(ny, p[1]) - c);
    };

    std::vector<std::array<Real, 2>> out;
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        Real sa = side(a), sb = side(b);
        bool ina = sa.d() <= kEpsGeom, inb = sb.d() <= kEpsGeom;
        if (ina) out.push_back(a);
        if (ina != inb) {
            // Intersection a + t (b - a), t = sa / (sa - sb).
            Real t = div_p(sa, sa - sb, kCoordPrec);
            out.push_back({a[0] + mul_p(t, b[0] - a[0], kCoordPrec),
                           a[1] + mul_p(t, b[1] - a[1], kCoordPrec)});
        }
    }
    // Drop near-duplicate vertices introduced by tangent clips.
    std::vector<std::array<Real, 2>> dedup;
    for (auto& p : out) {
        bool dup = false;
        for (auto& q : dedup) {
            double dx = (p[0] - q[0]).d(), dy = (p[1] - q[1]).d();
            if (std::fabs(dx) < kEpsGeom && std::fabs(dy) < kEpsGeom) { dup = true; break; }
        }
        if (!dup) dedup.push_back(p);
    }
    if (dedup.size() < 3) throw DegenerateConfiguration("clip produced a degenerate cell");
    return polygon(std::move(dedup));
}

std::vector<Simplex> Polytope::triangulate() const {
    std::vector<Simplex> out;
    if (dim == 1) {
        Simplex s;
        s.dim = 1;
        s.v[0] = v[0];
        s.v[1] = v[1];
        out.push_back(std::move(s));
        return out;
    }
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        Simplex s;
        s.dim = 2;
        s.v[0] = v[0];
        s.v[1] = v[i];
        s.v[2] = v[i + 1];
        out.push_back(std::move(s));
    }
    return out;
}

std::array<Real, 3> barycentric(const Simplex& s, const std::array<Real, 2>& x,
                                mpfr_prec_t prec, double eps, bool strict_interior) {
    std::array<Real, 3> out{Real(0.0, prec), Real(0.0, prec), Real(0.0, prec)};
    if (s.dim == 1) {
        Real len = s.v[1][0] - s.v[0][0];
        Real b1 = div_p(x[0] - s.v[0][0], len, prec);
        out[1] = b1;
        out[0] = sub_p(Real(1.0, prec), b1, prec);
        if (strict_interior && (out[0].d() < eps || out[1].d() < eps))
            throw PointOnSharedFace();
        return out;
    }
    Real total = cross2(s.v[0], s.v[1], s.v[2]);
    if (std::fabs(total.d()) < eps) throw DegenerateConfiguration("flat simplex");
    Real a0 = cross2(x, s.v[1], s.v[2]);
    Real a1 = cross2(s.v[0], x, s.v[2]);
    Real a2 = cross2(s.v[0], s.v[1], x);
    out[0] = div_p(a0, total, prec);
    out[1] = div_p(a1, total, prec);
    out[2] = div_p(a2, total, prec);
    if (strict_interior)
        for (const auto& b : out)
            if (b.d() < eps) throw PointOnSharedFace();
    return out;
}

}  // namespace ppiso
