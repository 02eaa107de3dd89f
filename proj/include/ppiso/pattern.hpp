// SPDX-License-Identifier: Apache-2.0
//
// Simple point patterns on a finite domain, with exact-decimal CSV I/O that
// round-trips dyadic coordinates bit-for-bit.

#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "ppiso/domain.hpp"
#include "ppiso/isometry.hpp"

namespace ppiso {

class PointPattern {
public:
    Domain dom;
    int coordbits = kDefaultCoordBits;
    std::vector<Pt> pts;

    PointPattern() = default;
    explicit PointPattern(Domain d, int bits = kDefaultCoordBits)
        : dom(std::move(d)), coordbits(bits) {}

    size_t size() const { return pts.size(); }
    void add(Pt p) { pts.push_back(std::move(p)); }

    void sort_canonical() {
        std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
            int c = a.c[0].cmp(b.c[0]);
            if (c != 0) return c < 0;
            return a.c[1].cmp(b.c[1]) < 0;
        });
    }

    // Throws NotSimple if two points coincide exactly (pattern must be sorted
    // or will be sorted here).
    void check_simple() {
        sort_canonical();
        for (size_t i = 1; i < pts.size(); ++i)
            if (pts[i] == pts[i - 1]) throw NotSimple();
    }

    PointPattern apply(const Isometry& g) const {
        PointPattern out(dom, coordbits);
        out.pts.reserve(pts.size());
        for (const auto& p : pts) out.pts.push_back(g.apply(p, dom));
        return out;
    }

    PointPattern filter(const std::function<bool(const Pt&)>& keep) const {
        PointPattern out(dom, coordbits);
        for (const auto& p : pts)
            if (keep(p)) out.pts.push_back(p);
        return out;
    }

    size_t count_in_ball(const Pt& center, const Real& radius) const {
        size_t n = 0;
        for (const auto& p : pts)
            if (dist_cmp(p, center, dom, radius) <= 0) ++n;
        return n;
    }

    // Count of points in the closed shell a <= dist <= b around center.
    size_t count_in_shell(const Pt& center, const Real& a, const Real& b) const {
        size_t n = 0;
        for (const auto& p : pts)
            if (dist_cmp(p, center, dom, a) >= 0 && dist_cmp(p, center, dom, b) <= 0) ++n;
        return n;
    }

    // Superposition of two simple patterns; throws NotSimple on an exact
    // coincidence.
    static PointPattern pattern_sum(const PointPattern& a, const PointPattern& b) {
        PointPattern out = a;
        for (const auto& p : b.pts) out.pts.push_back(p);
        out.check_simple();
        return out;
    }

    // Removes each point of b from a (exact match required per point).
    static PointPattern pattern_diff(const PointPattern& a, const PointPattern& b) {
        PointPattern out = a;
        for (const auto& p : b.pts) {
            auto it = std::find_if(out.pts.begin(), out.pts.end(),
                                   [&](const Pt& q) { return q == p; });
            if (it == out.pts.end()) throw MissingPoint();
            out.pts.erase(it);
        }
        return out;
    }

    // Exact set equality (both sides sorted canonically first).
    static bool set_equal(PointPattern a, PointPattern b) {
        if (a.size() != b.size()) return false;
        a.sort_canonical();
        b.sort_canonical();
        for (size_t i = 0; i < a.size(); ++i)
            if (!(a.pts[i] == b.pts[i])) return false;
        return true;
    }

    // Largest coordinate discrepancy under optimal (greedy sorted) matching;
    // returns +inf-like large value if sizes differ.
    static double max_matched_error(PointPattern a, PointPattern b);

    std::string to_csv() const;
    static PointPattern from_csv(const std::string& text);
};

// Exact decimal rendering of a dyadic value with `bits` fractional bits.
std::string dyadic_to_decimal(const Real& x, int bits);
// Parse a decimal literal to the nearest dyadic with `bits` fractional bits
// (exact when the input was produced by dyadic_to_decimal with the same bits).
Real decimal_to_dyadic(const std::string& s, int bits);

}  // namespace ppiso
