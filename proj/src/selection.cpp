// SPDX-License-Identifier: Apache-2.0

#include "ppiso/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <limits>

#include "json.hpp"

namespace ppiso {

namespace {

constexpr double kEpsSel = 1e-9;

double class_radius(double relation_dist, int dim) {
    // Jung bound for a set of diameter relation_dist.
    return dim == 1 ? relation_dist / 2 : relation_dist / std::sqrt(3.0);
}

}  // namespace

SelectionParams SelectionParams::desk(int dim) {
    SelectionParams p;
    if (dim == 1) {
        p.cover_radius = 0.125;
        p.relation_dist = 0.25;
        p.halo_in = 1.15625;
        p.shell_in = 1.4375;
        p.shell_out = 4.25;
        p.locality_radius = 8.0;
    } else {
        p.cover_radius = 0.25;
        p.relation_dist = 0.5;
        p.halo_in = 1.3125;
        p.shell_in = 1.875;
        p.shell_out = 2.4375;
        p.locality_radius = 5.5;
    }
    p.preset = "desk";
    return p;
}

SelectionParams SelectionParams::paper(int dim) {
    SelectionParams p;
    p.cover_radius = 0.5;
    p.relation_dist = 2.0;
    p.halo_in = 11.0;
    p.shell_in = 78.0 + dim;
    p.shell_out = 105.0 + dim;
    p.locality_radius = 125.0 + dim;
    p.preset = "paper";
    return p;
}

SelectionParams SelectionParams::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SelectionParams p;
    p.halo_in = j.at("halo_in").get<double>();
    p.shell_in = j.at("shell_in").get<double>();
    p.shell_out = j.at("shell_out").get<double>();
    p.cover_radius = j.at("cover_radius").get<double>();
    p.relation_dist = j.at("relation_dist").get<double>();
    p.locality_radius = j.at("locality_radius").get<double>();
    if (j.contains("preset")) p.preset = j.at("preset").get<std::string>();
    return p;
}

std::string SelectionParams::to_json() const {
    nlohmann::json j{{"halo_in", halo_in},
                     {"shell_in", shell_in},
                     {"shell_out", shell_out},
                     {"cover_radius", cover_radius},
                     {"relation_dist", relation_dist},
                     {"locality_radius", locality_radius},
                     {"preset", preset}};
    return j.dump(2);
}

DichotomyBounds dichotomy(const SelectionParams& p, int dim) {
    DichotomyBounds b;
    const double rho = p.cover_radius, h1 = p.halo_in, s1 = p.shell_in, s2 = p.shell_out;
    b.near_dist = p.relation_dist;
    b.far_dist = s1 + s2 - 2 * rho;
    // Exclusion mechanism: place a cover-ball center z in the halo of one
    // pre-seed so that its guaranteed point lands in the other's empty shell.
    // Achievable |z - x| for |z - y| = u in [h1+rho, s1-rho]:
    //   d = 1: {t - u, t + u};  d >= 2: the whole interval [|t - u|, t + u].
    if (2 * rho > p.relation_dist) {
        b.reason = "exclusion cannot start below relation_dist (2*cover_radius too large)";
        return b;
    }
    if (dim == 1) {
        const double e2_hi = s2 - h1 - 2 * rho;       // t + (h1+rho) <= s2 - rho
        const double e1_lo = s1 + h1 + 2 * rho;       // t - (s1 - rho) >= ... chain
        if (e2_hi < e1_lo) {
            std::ostringstream os;
            os << "exclusion gap (" << e2_hi << ", " << e1_lo
               << "): need shell_out - shell_in >= 2*halo_in + 4*cover_radius";
            b.reason = os.str();
            return b;
        }
    }
    b.ok = true;
    return b;
}

void validate_params(const SelectionParams& p, int dim) {
    auto fail = [](const std::string& m) { throw DegenerateConfiguration("SelectionParams: " + m); };
    if (dim != 1 && dim != 2) fail("dim must be 1 or 2");
    if (p.cover_radius <= 0 || p.relation_dist <= 0) fail("radii must be positive");
    if (p.globe_radius != 1.0) fail("globe_radius is fixed at 1");
    if (!(p.halo_in + 2 * p.cover_radius < p.shell_in)) fail("halo admits no interior cover ball");
    if (!(p.shell_in < p.shell_out)) fail("shell_in < shell_out required");
    const double cr = class_radius(p.relation_dist, dim);
    if (!(p.halo_in > p.globe_radius + cr))
        fail("globe content could reach the halo of its own class (halo_in too small)");
    if (!(p.shell_in > p.globe_radius + p.relation_dist + cr))
        fail("globe content could reach the shell of a related position");
    auto d = dichotomy(p, dim);
    if (!d.ok) fail("dichotomy: " + d.reason);
    if (!(d.far_dist - cr - p.globe_radius > p.shell_out))
        fail("globe content could reach a foreign pre-seed's shell (far too small)");
    if (!(p.locality_radius >= cr + p.relation_dist + p.shell_out))
        fail("locality_radius smaller than the predicate's reach");
}

// ---------------------------------------------------------------------------
// d = 1: exact interval algebra on the circle [0, L).
// ---------------------------------------------------------------------------

namespace {

struct Arc {
    Real lo, hi;  // lo <= hi, lifted (hi may exceed L for a wrapping arc)
};

// Merge closed intervals on a circle of circumference L.  Returns merged,
// sorted, pairwise non-touching arcs with lo in [0, L); sets `full` when the
// union is the whole circle.
std::vector<Arc> merge_closed(std::vector<Arc> in, const Real& L, bool& full) {
    full = false;
    std::vector<Arc> segs;
    for (auto& a : in) {
        if ((a.hi - a.lo) >= L) {
            full = true;
            return {};
        }
        Real lo = wrap_coord(a.lo, L);
        Real hi = lo + (a.hi - a.lo);
        if (hi > L) {
            segs.push_back({Real(0.0, kCoordPrec), hi - L});
            hi = L;
        }
        segs.push_back({std::move(lo), std::move(hi)});
    }
    if (segs.empty()) return {};
    std::sort(segs.begin(), segs.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    std::vector<Arc> out;
    for (auto& s : segs) {
        if (!out.empty() && s.lo <= out.back().hi) {
            if (s.hi > out.back().hi) out.back().hi = s.hi;
        } else {
            out.push_back(s);
        }
    }
    // Wrap join: a segment ending at L touches one starting at 0.
    if (out.size() >= 2 && out.front().lo.sign() == 0 && out.back().hi == L) {
        out.front().lo = out.back().lo - L;  // lifted below 0, normalized by caller
        out.pop_back();
    }
    if (out.size() == 1 && (out[0].hi - out[0].lo) >= L) {
        full = true;
        return {};
    }
    return out;
}

// Open complement of a merged closed union on the circle; arcs lifted with
// lo in [0, L).
std::vector<Arc> circle_complement(const std::vector<Arc>& merged, const Real& L, bool full) {
    std::vector<Arc> out;
    if (full) return out;
    if (merged.empty()) {
        out.push_back({Real(0.0, kCoordPrec), Real(L)});
        return out;
    }
    for (size_t i = 0; i < merged.size(); ++i) {
        const Arc& cur = merged[i];
        const Arc& nxt = merged[(i + 1) % merged.size()];
        Real lo = wrap_coord(cur.hi, L);
        Real len = (i + 1 < merged.size()) ? (nxt.lo - cur.hi) : (nxt.lo + L - cur.hi);
        if (len.sign() > 0) out.push_back({lo, lo + len});
    }
    std::sort(out.begin(), out.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    return out;
}

// Merge closed intervals on the line (no wrap) and return the open complement
// within [lo_clip, hi_clip].
std::vector<Arc> line_complement(std::vector<Arc> in, const Real& lo_clip, const Real& hi_clip) {
    std::sort(in.begin(), in.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    std::vector<Arc> merged;
    for (auto& s : in) {
        if (!merged.empty() && s.lo <= merged.back().hi) {
            if (s.hi > merged.back().hi) merged.back().hi = s.hi;
        } else {
            merged.push_back(s);
        }
    }
    std::vector<Arc> out;
    Real cur = lo_clip;
    for (const auto& m : merged) {
        if (m.hi <= cur) continue;
        if (m.lo > cur && cur < hi_clip) {
            Real end = m.lo < hi_clip ? m.lo : hi_clip;
            if (end > cur) out.push_back({cur, end});
        }
        if (m.hi > cur) cur = m.hi;
        if (cur >= hi_clip) break;
    }
    if (cur < hi_clip) out.push_back({cur, hi_clip});
    return out;
}

// Exact pre-seed region of a d=1 pattern as open arcs, sorted by lower
// endpoint.  Torus: arcs on the circle (the one containing 0 is lifted).
// Box: predicates are evaluated against the visible points only; coverage
// fails automatically near the window edges (no points beyond them).
std::vector<Arc> preseed_region_d1(const PointPattern& mu, const SelectionParams& p) {
    const Real& L = mu.dom.sides[0];
    const Real rho(p.cover_radius), h1(p.halo_in), s1(p.shell_in), s2(p.shell_out);
    std::vector<Real> xs;
    for (const auto& q : mu.pts)
        xs.push_back(mu.dom.torus ? wrap_coord(q.c[0], L) : q.c[0]);
    std::sort(xs.begin(), xs.end(), [](const Real& a, const Real& b) { return a < b; });
    if (xs.empty()) return {};  // no coverage anywhere

    std::vector<Arc> forbidden;
    for (const auto& x : xs) {
        forbidden.push_back({x + s1, x + s2});
        forbidden.push_back({x - s2, x - s1});
    }
    // Coverage gaps: maximal sets of cover-ball centers containing no point
    // within rho.  For each gap [a, b], positions whose halo annulus meets it
    // are forbidden.
    auto add_gap = [&](const Real& a, const Real& b) {
        if (b < a) return;
        forbidden.push_back({a - s1 + rho, b - h1 - rho});
        forbidden.push_back({a + h1 + rho, b + s1 - rho});
    };
    if (mu.dom.torus) {
        for (size_t i = 0; i < xs.size(); ++i) {
            const Real& cur = xs[i];
            Real nxt = (i + 1 < xs.size()) ? xs[i + 1] : xs[0] + L;
            add_gap(cur + rho, nxt - rho);
        }
        bool full = false;
        auto merged = merge_closed(std::move(forbidden), L, full);
        return circle_complement(merged, L, full);
    }
    const Real sent = s2 + Real(2.0);
    add_gap(Real(0.0, kCoordPrec) - sent, xs.front() - rho);
    for (size_t i = 0; i + 1 < xs.size(); ++i) add_gap(xs[i] + rho, xs[i + 1] - rho);
    add_gap(xs.back() + rho, L + sent);
    return line_complement(std::move(forbidden), Real(0.0, kCoordPrec), Real(L));
}

}  // namespace

// ---------------------------------------------------------------------------
// d = 2: toleranced disk-coverage tests and certified subdivision.
// ---------------------------------------------------------------------------

namespace {

struct RelPt {
    double x, y;
};

double wrap_delta(double d, double L) { return d - L * std::floor(d / L + 0.5); }

std::vector<RelPt> lift_points(const PointPattern& mu, double cx, double cy, double limit) {
    std::vector<RelPt> out;
    const double Lx = mu.dom.sides[0].d();
    const double Ly = mu.dom.sides[1].d();
    for (const auto& q : mu.pts) {
        double dx = mu.dom.torus ? wrap_delta(q.cd[0] - cx, Lx) : q.cd[0] - cx;
        double dy = mu.dom.torus ? wrap_delta(q.cd[1] - cy, Ly) : q.cd[1] - cy;
        if (dx * dx + dy * dy <= limit * limit) out.push_back({dx, dy});
    }
    return out;
}

struct CoverStatus {
    bool covered = false;         // certified: annulus subset of union of cover balls
    bool witness_found = false;   // certified uncovered point exists
    RelPt witness{0, 0};
};

// What the caller needs from the coverage test; allows early exit as soon as
// the answer for that question is settled.
enum class CoverQuery { kFull, kWitness, kCovered };

// Certified coverage test for the annulus rin <= |z| <= rout (centered at the
// lifting origin) by open balls B(p, rho).  Candidates enumerate every local
// maximum of z -> min_i |z - p_i| over the closed annulus: fixed probes
// (empty-set case), radial-line and bisector intersections with the boundary
// circles, cover-circle intersections, and circumcenters of chord-pruned
// triples (interior Voronoi vertices).  All decisions compare the nearest
// distance against rho +- eps only, so candidates are resolved through a
// rho-sized hash grid instead of a full scan.
CoverStatus annulus_cover_status(const std::vector<RelPt>& pts, double rin, double rout,
                                 double rho, double eps,
                                 CoverQuery query = CoverQuery::kFull) {
    CoverStatus st;
    bool any_doubtful = false;

    // rho-sized hash grid over the points; every point within rho + eps of a
    // query lies within the 5x5 cell neighborhood.
    const double cell = rho;
    std::unordered_map<long long, std::vector<RelPt>> grid;
    auto key = [](long ix, long iy) {
        return ((ix + 0x200000LL) << 22) | (iy + 0x200000LL);
    };
    for (const auto& q : pts)
        grid[key(static_cast<long>(std::floor(q.x / cell)),
                 static_cast<long>(std::floor(q.y / cell)))]
            .push_back(q);
    auto near_dist = [&](const RelPt& z) {
        long ix = static_cast<long>(std::floor(z.x / cell));
        long iy = static_cast<long>(std::floor(z.y / cell));
        double mind = std::numeric_limits<double>::infinity();
        for (long dx = -2; dx <= 2; ++dx)
            for (long dy = -2; dy <= 2; ++dy) {
                auto it = grid.find(key(ix + dx, iy + dy));
                if (it == grid.end()) continue;
                for (const auto& q : it->second)
                    mind = std::min(mind, std::hypot(z.x - q.x, z.y - q.y));
            }
        return mind;  // +inf means: no point within 2*rho, in particular none within rho+eps
    };

    // Returns true when the query is already settled.
    auto eval = [&](const RelPt& z) {
        double r = std::hypot(z.x, z.y);
        if (r < rin - eps || r > rout + eps) return false;
        double mind = near_dist(z);
        if (mind >= rho - eps) any_doubtful = true;
        if (r >= rin + eps && r <= rout - eps && mind >= rho + eps) {
            st.witness_found = true;
            st.witness = z;
        }
        return (query == CoverQuery::kWitness && st.witness_found) ||
               (query == CoverQuery::kCovered && any_doubtful);
    };
    auto done = [&]() {
        st.covered = !any_doubtful;
        return st;
    };

    // Stage 1: fixed probes.
    const double rmid = (rin + rout) / 2;
    for (const RelPt& z :
         {RelPt{rin, 0}, RelPt{rout, 0}, RelPt{rmid, 0}, RelPt{-rmid, 0}})
        if (eval(z)) return done();

    // Only points close enough to the annulus can be active at depth ~rho.
    std::vector<RelPt> band;
    const double bm = rho + (rout - rin) + 8 * eps;
    for (const auto& q : pts) {
        double r = std::hypot(q.x, q.y);
        if (r >= rin - bm && r <= rout + bm) band.push_back(q);
    }

    // Stage 2: radial-line intersections with the boundary circles (local
    // maxima where a single distance is active).
    for (const auto& q : band) {
        double r = std::hypot(q.x, q.y);
        if (r < 1e-15) continue;
        double ux = q.x / r, uy = q.y / r;
        for (const RelPt& z : {RelPt{rin * ux, rin * uy}, RelPt{-rin * ux, -rin * uy},
                               RelPt{rout * ux, rout * uy}, RelPt{-rout * ux, -rout * uy}})
            if (eval(z)) return done();
    }

    // Stage 3: per-point circle intersections with the annulus boundary.
    auto circle_circle = [&](double ax, double ay, double ar, double bx, double by, double br,
                             RelPt out[2]) {
        double dx = bx - ax, dy = by - ay;
        double d2 = dx * dx + dy * dy;
        double d = std::sqrt(d2);
        if (d < 1e-15 || d > ar + br || d < std::fabs(ar - br)) return 0;
        double a = (d2 + ar * ar - br * br) / (2 * d);
        double h2 = ar * ar - a * a;
        double h = h2 > 0 ? std::sqrt(h2) : 0;
        double mx = ax + a * dx / d, my = ay + a * dy / d;
        out[0] = {mx + h * dy / d, my - h * dx / d};
        out[1] = {mx - h * dy / d, my + h * dx / d};
        return 2;
    };
    RelPt zz[2];
    for (const auto& q : band) {
        for (double rc : {rin, rout}) {
            int n = circle_circle(q.x, q.y, rho, 0, 0, rc, zz);
            for (int t = 0; t < n; ++t)
                if (eval(zz[t])) return done();
        }
    }

    // Stage 4: pair candidates — cover-circle intersections and bisector
    // intersections with the boundary circles.
    auto bisector_circle = [&](const RelPt& a, const RelPt& b, double rc, RelPt out[2]) {
        double mx = (a.x + b.x) / 2, my = (a.y + b.y) / 2;
        double dx = b.x - a.x, dy = b.y - a.y;
        double dn = std::hypot(dx, dy);
        if (dn < 1e-15) return 0;
        double nx = -dy / dn, ny = dx / dn;
        double bb = mx * nx + my * ny, cc = mx * mx + my * my - rc * rc;
        double disc = bb * bb - cc;
        if (disc < 0) return 0;
        double sq = std::sqrt(disc);
        out[0] = {mx + (-bb + sq) * nx, my + (-bb + sq) * ny};
        out[1] = {mx + (-bb - sq) * nx, my + (-bb - sq) * ny};
        return 2;
    };
    for (size_t i = 0; i < band.size(); ++i)
        for (size_t j = i + 1; j < band.size(); ++j) {
            int n = circle_circle(band[i].x, band[i].y, rho, band[j].x, band[j].y, rho, zz);
            for (int t = 0; t < n; ++t)
                if (eval(zz[t])) return done();
            for (double rc : {rin, rout}) {
                n = bisector_circle(band[i], band[j], rc, zz);
                for (int t = 0; t < n; ++t)
                    if (eval(zz[t])) return done();
            }
        }

    // Stage 5: circumcenters of near triples (interior Voronoi vertices).  A
    // local max worth detecting has depth <~ rho + annulus width, so the
    // active points lie on a circle of at most that radius: prune by chord.
    auto circumcenter = [&](const RelPt& a, const RelPt& b, const RelPt& c, RelPt* out) {
        double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        if (std::fabs(d) < 1e-18) return 0;
        double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y,
               c2 = c.x * c.x + c.y * c.y;
        *out = {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
        return 1;
    };
    const double chord = 2 * bm;
    for (size_t i = 0; i < band.size(); ++i)
        for (size_t j = i + 1; j < band.size(); ++j) {
            if (std::hypot(band[i].x - band[j].x, band[i].y - band[j].y) > chord) continue;
            for (size_t k = j + 1; k < band.size(); ++k) {
                if (std::hypot(band[i].x - band[k].x, band[i].y - band[k].y) > chord) continue;
                if (std::hypot(band[j].x - band[k].x, band[j].y - band[k].y) > chord) continue;
                if (circumcenter(band[i], band[j], band[k], zz) && eval(zz[0])) return done();
            }
        }
    return done();
}

// Certified subdivision boxes, indexed on a fixed power-of-two lattice so the
// construction is equivariant under lattice translations and axis symmetries.
struct SBox {
    double cx, cy, h;  // center and half-size
};

enum class BoxClass { kIn, kOut, kUnknown };

BoxClass classify_box(const PointPattern& mu, const SelectionParams& p, const SBox& b,
                      double eps) {
    const double rho = p.cover_radius, s1 = p.shell_in, s2 = p.shell_out;
    const double rin = p.halo_in + rho, rout = s1 - rho;
    const double rb = b.h * std::sqrt(2.0);
    auto pts = lift_points(mu, b.cx, b.cy, s2 + rb + 1.0);

    bool shell_clear_all = true;
    for (const auto& q : pts) {
        double r = std::hypot(q.x, q.y);
        if (r - rb >= s1 + eps && r + rb <= s2 - eps) return BoxClass::kOut;
        if (!(r + rb < s1 - eps || r - rb > s2 + eps)) shell_clear_all = false;
    }
    if (rout - rb > rin + rb + 4 * eps) {
        auto out_st =
            annulus_cover_status(pts, rin + rb, rout - rb, rho, eps, CoverQuery::kWitness);
        if (out_st.witness_found) return BoxClass::kOut;
    }
    if (shell_clear_all) {
        auto in_st =
            annulus_cover_status(pts, rin - rb, rout + rb, rho, eps, CoverQuery::kCovered);
        if (in_st.covered) return BoxClass::kIn;
    }
    return BoxClass::kUnknown;
}

// Smallest enclosing circle (Welzl) over a point set in the plane.
struct Circle {
    double x = 0, y = 0, r = -1;
};

bool in_circle(const Circle& c, const RelPt& p) {
    return std::hypot(p.x - c.x, p.y - c.y) <= c.r + 1e-9;
}

Circle circle2(const RelPt& a, const RelPt& b) {
    Circle c;
    c.x = (a.x + b.x) / 2;
    c.y = (a.y + b.y) / 2;
    c.r = std::hypot(a.x - b.x, a.y - b.y) / 2;
    return c;
}

Circle circle3(const RelPt& a, const RelPt& b, const RelPt& c) {
    double ax = a.x, ay = a.y, bx = b.x, by = b.y, cx = c.x, cy = c.y;
    double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (std::fabs(d) < 1e-18) return Circle{};
    double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    Circle out;
    out.x = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    out.y = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    out.r = std::hypot(ax - out.x, ay - out.y);
    return out;
}

Circle welzl(std::vector<RelPt> pts) {
    // Deterministic shuffle for expected-linear behavior.
    std::mt19937_64 rng(0x9E3779B97F4A7C15ULL);
    std::shuffle(pts.begin(), pts.end(), rng);
    Circle c{pts[0].x, pts[0].y, 0};
    for (size_t i = 1; i < pts.size(); ++i) {
        if (in_circle(c, pts[i])) continue;
        c = Circle{pts[i].x, pts[i].y, 0};
        for (size_t j = 0; j < i; ++j) {
            if (in_circle(c, pts[j])) continue;
            c = circle2(pts[i], pts[j]);
            for (size_t k = 0; k < j; ++k) {
                if (in_circle(c, pts[k])) continue;
                c = circle3(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

double snap_dyadic(double v) { return std::ldexp(std::round(std::ldexp(v, 24)), -24); }

}  // namespace

// ---------------------------------------------------------------------------
// is_preseed
// ---------------------------------------------------------------------------

bool is_preseed(const PointPattern& mu, const Pt& x, const SelectionParams& p) {
    const Real rho(p.cover_radius), h1(p.halo_in), s1(p.shell_in), s2(p.shell_out);
    if (mu.dom.torus && !(Real(2 * p.shell_out) < mu.dom.min_side()))
        throw RegionTooLargeForTorus();

    // Degeneracy guard: a point within eps of a shell boundary makes the
    // predicate numerically two-valued for nearby queries.
    for (const auto& q : mu.pts) {
        double dr = dist_approx(q, x, mu.dom);
        if (std::fabs(dr - p.shell_in) < kEpsSel || std::fabs(dr - p.shell_out) < kEpsSel)
            throw DegenerateConfiguration("pattern point on a shell boundary");
    }
    if (mu.count_in_shell(x, s1, s2) != 0) return false;

    if (mu.dom.dim == 1) {
        const Real& L = mu.dom.sides[0];
        Real half = L.half();
        std::vector<Real> off;  // signed offsets in (-L/2, L/2]
        for (const auto& q : mu.pts) {
            Real o = q.c[0] - x.c[0];
            while (o > half) o -= L;
            while (o <= half - L) o += L;
            off.push_back(std::move(o));
        }
        Real A = h1 + rho, B = s1 - rho;
        for (int side = 0; side < 2; ++side) {
            std::vector<Real> os;
            for (const auto& o : off) {
                Real v = side == 0 ? o : Real(0.0, kCoordPrec) - o;
                if (v > h1 && v < s1) os.push_back(std::move(v));
            }
            if (os.empty()) return false;
            std::sort(os.begin(), os.end(), [](const Real& a, const Real& b) { return a < b; });
            if (!(os.front() < A + rho)) return false;  // uncovered start
            if (!(os.back() > B - rho)) return false;   // uncovered end
            for (size_t i = 1; i < os.size(); ++i) {
                Real glo = os[i - 1] + rho, ghi = os[i] - rho;
                if (glo <= ghi && glo <= B && ghi >= A) return false;
            }
        }
        return true;
    }

    auto pts = lift_points(mu, x.cd[0], x.cd[1], p.shell_in + 1.0);
    auto st = annulus_cover_status(pts, p.halo_in + p.cover_radius, p.shell_in - p.cover_radius,
                                   p.cover_radius, kEpsSel);
    return st.covered;
}

// ---------------------------------------------------------------------------
// seed_set
// ---------------------------------------------------------------------------

namespace {

void finalize_globeset(GlobeSet& gs, const PointPattern& mu, const SelectionParams& p) {
    const Real gr(p.globe_radius);
    for (auto& g : gs.globes) {
        size_t cnt = 0;
        const Pt* hit = nullptr;
        for (const auto& q : mu.pts) {
            if (dist_cmp(q, g.center, mu.dom, gr) <= 0) {
                ++cnt;
                hit = &q;
            }
        }
        g.special = (cnt == 1);
        if (g.special) g.unique_point = *hit;
    }
    const Pt origin;
    std::sort(gs.globes.begin(), gs.globes.end(), [&](const Globe& a, const Globe& b) {
        Real da = mu.dom.dim == 1 ? dist_d1(a.center, origin, mu.dom)
                                  : dist_sq_d2(a.center, origin, mu.dom);
        Real db = mu.dom.dim == 1 ? dist_d1(b.center, origin, mu.dom)
                                  : dist_sq_d2(b.center, origin, mu.dom);
        int c = da.cmp(db);
        if (c != 0) return c < 0;
        c = a.center.c[0].cmp(b.center.c[0]);
        if (c != 0) return c < 0;
        return a.center.c[1].cmp(b.center.c[1]) < 0;
    });
}

GlobeSet seed_set_d1(const PointPattern& mu, const SelectionParams& p) {
    GlobeSet gs;
    const Real& L = mu.dom.sides[0];
    auto arcs = preseed_region_d1(mu, p);
    if (arcs.empty()) return gs;

    // Cluster arcs into relation classes: consecutive arcs whose gap is at
    // most relation_dist hold related pre-seeds.
    const Real rd(p.relation_dist), far(p.shell_in + p.shell_out - 2 * p.cover_radius);
    size_t n = arcs.size();
    std::vector<size_t> cls(n);
    std::iota(cls.begin(), cls.end(), 0);
    size_t nc = n;
    const size_t npairs = mu.dom.torus ? n : (n > 0 ? n - 1 : 0);
    for (size_t i = 0; i < npairs && n > 1; ++i) {
        const Arc& cur = arcs[i];
        const Arc& nxt = arcs[(i + 1) % n];
        Real gap = (i + 1 < n) ? (nxt.lo - cur.hi) : (nxt.lo + L - cur.hi);
        if (gap <= rd) {
            size_t a = cls[(i + 1) % n], b = cls[i];
            if (a != b) {
                for (auto& c : cls)
                    if (c == a) c = b;
                --nc;
            }
        } else if (gap < far) {
            gs.dichotomy_observed = false;
        }
    }
    (void)nc;
    std::map<size_t, std::pair<Real, Real>> hull;  // class -> lifted [lo, hi]
    for (size_t i = 0; i < n; ++i) {
        // Lift each arc relative to the first member of its class.
        auto it = hull.find(cls[i]);
        if (it == hull.end()) {
            hull.emplace(cls[i], std::make_pair(arcs[i].lo, arcs[i].hi));
        } else {
            Real lo = arcs[i].lo, hi = arcs[i].hi;
            while (lo > it->second.second + rd + Real(1.0)) { lo -= L; hi -= L; }
            while (hi < it->second.first - rd - Real(1.0)) { lo += L; hi += L; }
            if (lo < it->second.first) it->second.first = lo;
            if (hi > it->second.second) it->second.second = hi;
        }
    }
    for (auto& [id, h] : hull) {
        (void)id;
        if (h.second - h.first > rd) gs.dichotomy_observed = false;
        Real c = wrap_coord((h.first + h.second).half(), L);
        Globe g;
        g.center = Pt(std::move(c));
        gs.globes.push_back(std::move(g));
    }
    finalize_globeset(gs, mu, p);
    return gs;
}

GlobeSet seed_set_d2(const PointPattern& mu, const SelectionParams& p) {
    GlobeSet gs;
    const double Lx = mu.dom.sides[0].d(), Ly = mu.dom.sides[1].d();
    const double c0 = 0.5;
    const long nx = std::lround(Lx / c0), ny = std::lround(Ly / c0);

    // Candidate root cells: pre-seeds need covering points within shell_in.
    std::set<std::pair<long, long>> roots;
    const double reach = p.shell_in + c0;
    for (const auto& q : mu.pts) {
        long ix0 = static_cast<long>(std::floor((q.cd[0] - reach) / c0));
        long ix1 = static_cast<long>(std::floor((q.cd[0] + reach) / c0));
        long iy0 = static_cast<long>(std::floor((q.cd[1] - reach) / c0));
        long iy1 = static_cast<long>(std::floor((q.cd[1] + reach) / c0));
        for (long ix = ix0; ix <= ix1; ++ix)
            for (long iy = iy0; iy <= iy1; ++iy) {
                if (mu.dom.torus) {
                    roots.insert({((ix % nx) + nx) % nx, ((iy % ny) + ny) % ny});
                } else if (ix >= 0 && ix < nx && iy >= 0 && iy < ny) {
                    roots.insert({ix, iy});
                }
            }
    }

    std::vector<SBox> in_boxes, unknown_boxes;
    std::vector<SBox> stack;
    for (const auto& [ix, iy] : roots)
        stack.push_back({(ix + 0.5) * c0, (iy + 0.5) * c0, c0 / 2});
    while (!stack.empty()) {
        SBox b = stack.back();
        stack.pop_back();
        switch (classify_box(mu, p, b, kEpsSel)) {
            case BoxClass::kOut:
                break;
            case BoxClass::kIn:
                in_boxes.push_back(b);
                break;
            case BoxClass::kUnknown:
                if (b.h <= kDeltaSeed / 2) {
                    unknown_boxes.push_back(b);
                } else {
                    double h = b.h / 2;
                    stack.push_back({b.cx - h, b.cy - h, h});
                    stack.push_back({b.cx - h, b.cy + h, h});
                    stack.push_back({b.cx + h, b.cy - h, h});
                    stack.push_back({b.cx + h, b.cy + h, h});
                }
                break;
        }
    }
    if (in_boxes.empty()) {
        if (!unknown_boxes.empty())
            throw ThinComponent("possible pre-seed region with no certified interior");
        return gs;
    }

    // Relation classes by distance clustering; the dichotomy separates
    // classes by far >> relation_dist, so any threshold between works.
    const bool wrap = mu.dom.torus;
    auto tor_dist = [&](const SBox& a, const SBox& b) {
        double dx = a.cx - b.cx, dy = a.cy - b.cy;
        if (wrap) {
            dx = wrap_delta(dx, Lx);
            dy = wrap_delta(dy, Ly);
        }
        return std::hypot(dx, dy);
    };
    const double thr = (p.relation_dist + p.shell_in + p.shell_out - 2 * p.cover_radius) / 2;
    size_t n = in_boxes.size();
    std::vector<size_t> cls(n);
    std::iota(cls.begin(), cls.end(), 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (cls[i] != cls[j] && tor_dist(in_boxes[i], in_boxes[j]) <= thr) {
                size_t a = cls[j], b2 = cls[i];
                for (auto& c : cls)
                    if (c == a) c = b2;
            }
    for (const auto& ub : unknown_boxes) {
        bool attached = false;
        for (size_t i = 0; i < n && !attached; ++i)
            if (tor_dist(ub, in_boxes[i]) <= thr) attached = true;
        if (!attached) {
            if (std::getenv("PPISO_DEBUG_SEL"))
                std::fprintf(stderr, "[sel] unknown box at (%.6f, %.6f) h=%g\n", ub.cx, ub.cy,
                             ub.h);
            throw ThinComponent("uncertified possible component away from certified seeds");
        }
    }

    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < n; ++i) groups[cls[i]].push_back(i);
    for (auto& [id, idxs] : groups) {
        (void)id;
        // Lift all box corners relative to the first box of the class.
        const SBox& ref = in_boxes[idxs[0]];
        std::vector<RelPt> corners;
        double diam = 0;
        for (size_t i : idxs) {
            const SBox& b = in_boxes[i];
            double dx = b.cx - ref.cx, dy = b.cy - ref.cy;
            if (wrap) {
                dx = wrap_delta(dx, Lx);
                dy = wrap_delta(dy, Ly);
            }
            diam = std::max(diam, std::hypot(dx, dy));
            corners.push_back({dx - b.h, dy - b.h});
            corners.push_back({dx - b.h, dy + b.h});
            corners.push_back({dx + b.h, dy - b.h});
            corners.push_back({dx + b.h, dy + b.h});
        }
        if (diam > p.relation_dist + 4 * kDeltaSeed) gs.dichotomy_observed = false;
        Circle c = welzl(corners);
        double ax = ref.cx + c.x, ay = ref.cy + c.y;
        ax -= Lx * std::floor(ax / Lx);
        ay -= Ly * std::floor(ay / Ly);
        Globe g;
        g.center = Pt(Real(snap_dyadic(ax)), Real(snap_dyadic(ay)));
        gs.globes.push_back(std::move(g));
    }
    finalize_globeset(gs, mu, p);
    return gs;
}

}  // namespace

GlobeSet seed_set(const PointPattern& mu, const SelectionParams& p) {
    validate_params(p, mu.dom.dim);
    if (mu.dom.torus && !(Real(2 * p.shell_out) < mu.dom.min_side()))
        throw RegionTooLargeForTorus();
    return mu.dom.dim == 1 ? seed_set_d1(mu, p) : seed_set_d2(mu, p);
}

bool in_globes(const GlobeSet& gs, const Pt& z, const Domain& dom, const Real& radius,
               bool special_only) {
    for (const auto& g : gs.globes) {
        if (special_only && !g.special) continue;
        if (dist_cmp(z, g.center, dom, radius) <= 0) return true;
    }
    return false;
}

PointPattern restrict_selection(const PointPattern& mu, const GlobeSet& gs, const Real& radius,
                                bool special_only, bool complement) {
    return mu.filter([&](const Pt& q) {
        bool inside = in_globes(gs, q, mu.dom, radius, special_only);
        return complement ? !inside : inside;
    });
}

std::string globes_to_json(const GlobeSet& gs, int dim, int coordbits) {
    std::ostringstream os;
    auto coords = [&](const Pt& p) {
        std::string s = "[" + dyadic_to_decimal(p.c[0], coordbits);
        if (dim == 2) s += "," + dyadic_to_decimal(p.c[1], coordbits);
        return s + "]";
    };
    os << "{\"seeds\":[";
    for (size_t i = 0; i < gs.globes.size(); ++i)
        os << (i ? "," : "") << coords(gs.globes[i].center);
    os << "],\"special\":[";
    for (size_t i = 0; i < gs.globes.size(); ++i)
        os << (i ? "," : "") << (gs.globes[i].special ? "true" : "false");
    os << "],\"points\":[";
    for (size_t i = 0; i < gs.globes.size(); ++i) {
        os << (i ? "," : "");
        if (gs.globes[i].unique_point)
            os << coords(*gs.globes[i].unique_point);
        else
            os << "null";
    }
    os << "],\"dichotomy_observed\":" << (gs.dichotomy_observed ? "true" : "false") << "}";
    return os.str();
}

}  // namespace ppiso
