// SPDX-License-Identifier: Apache-2.0

#include "ppiso/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ppiso {

namespace {

Polytope cell_d1(const std::vector<Real>& sorted, size_t j, const Real& L, bool torus) {
    const Real& s = sorted[j];
    size_t n = sorted.size();
    if (n == 1) {
        if (torus) return Polytope::interval(s - L.half(), s + L.half());
        return Polytope::interval(Real(0.0, kCoordPrec), Real(L));
    }
    Real prev = j > 0 ? sorted[j - 1] : (torus ? sorted[n - 1] - L : Real(0.0, kCoordPrec));
    Real next = j + 1 < n ? sorted[j + 1] : (torus ? sorted[0] + L : Real(L));
    Real lo = (torus || j > 0) ? (prev + s).half() : prev;
    Real hi = (torus || j + 1 < n) ? (s + next).half() : next;
    return Polytope::interval(std::move(lo), std::move(hi));
}

}  // namespace

Tessellation build_tessellation(const GlobeSet& gs, const Domain& dom) {
    Tessellation t;
    t.dom = dom;
    for (const auto& g : gs.globes)
        if (g.special) t.sites.push_back(g.center);
    if (t.sites.empty()) throw NoSites();

    if (dom.dim == 1) {
        const Real& L = dom.sides[0];
        std::vector<size_t> order(t.sites.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return t.sites[a].c[0] < t.sites[b].c[0];
        });
        std::vector<Real> sorted;
        for (size_t i : order) sorted.push_back(t.sites[i].c[0]);
        t.cells.resize(t.sites.size(), Polytope{});
        for (size_t j = 0; j < order.size(); ++j)
            t.cells[order[j]] = cell_d1(sorted, j, L, dom.torus);
        return t;
    }

    const Real& Lx = dom.sides[0];
    const Real& Ly = dom.sides[1];
    for (size_t i = 0; i < t.sites.size(); ++i) {
        const Pt& s = t.sites[i];
        Polytope cell;
        if (dom.torus) {
            cell = Polytope::polygon({{s.c[0] - Lx, s.c[1] - Ly},
                                      {s.c[0] + Lx, s.c[1] - Ly},
                                      {s.c[0] + Lx, s.c[1] + Ly},
                                      {s.c[0] - Lx, s.c[1] + Ly}});
            for (size_t j = 0; j < t.sites.size(); ++j) {
                for (int ox = -1; ox <= 1; ++ox) {
                    for (int oy = -1; oy <= 1; ++oy) {
                        if (j == i && ox == 0 && oy == 0) continue;
                        std::array<Real, 2> rep{t.sites[j].c[0] + Real(double(ox)) * Lx,
                                                t.sites[j].c[1] + Real(double(oy)) * Ly};
                        cell = cell.clip_bisector({s.c[0], s.c[1]}, rep);
                    }
                }
            }
        } else {
            cell = Polytope::polygon({{Real(0.0, kCoordPrec), Real(0.0, kCoordPrec)},
                                      {Real(Lx), Real(0.0, kCoordPrec)},
                                      {Real(Lx), Real(Ly)},
                                      {Real(0.0, kCoordPrec), Real(Ly)}});
            for (size_t j = 0; j < t.sites.size(); ++j) {
                if (j == i) continue;
                cell = cell.clip_bisector({s.c[0], s.c[1]}, {t.sites[j].c[0], t.sites[j].c[1]});
            }
        }
        t.cells.push_back(std::move(cell));
    }
    return t;
}

size_t cell_of(const Tessellation& t, const Pt& z) {
    size_t best = 0;
    bool tie = false;
    Real bestd;
    for (size_t i = 0; i < t.sites.size(); ++i) {
        Real d = t.dom.dim == 1 ? dist_d1(z, t.sites[i], t.dom) : dist_sq_d2(z, t.sites[i], t.dom);
        if (i == 0) {
            bestd = d;
            continue;
        }
        int c = d.cmp(bestd);
        if (c < 0) {
            best = i;
            bestd = d;
            tie = false;
        } else if (c == 0) {
            tie = true;
        }
    }
    if (tie) throw DegenerateConfiguration("point equidistant to two sites");
    return best;
}

std::array<Real, 2> lift_to_cell(const Tessellation& t, size_t i, const Pt& z) {
    const Pt& s = t.sites[i];
    std::array<Real, 2> out{Real(0.0, kCoordPrec), Real(0.0, kCoordPrec)};
    for (int a = 0; a < t.dom.dim; ++a)
        out[a] = s.c[a] + lifted_delta(z.c[a], s.c[a], t.dom.sides[a], t.dom.torus);
    return out;
}

std::string tessellation_to_json(const Tessellation& t, const GlobeSet& gs, int coordbits) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"sites\":[";
    for (size_t i = 0; i < t.sites.size(); ++i) {
        os << (i ? "," : "") << "[" << dyadic_to_decimal(t.sites[i].c[0], coordbits);
        if (t.dom.dim == 2) os << "," << dyadic_to_decimal(t.sites[i].c[1], coordbits);
        os << "]";
    }
    os << "],\"cells\":[";
    for (size_t i = 0; i < t.cells.size(); ++i) {
        os << (i ? "," : "") << "[";
        for (size_t k = 0; k < t.cells[i].v.size(); ++k) {
            os << (k ? "," : "") << "[" << t.cells[i].v[k][0].d();
            if (t.dom.dim == 2) os << "," << t.cells[i].v[k][1].d();
            os << "]";
        }
        os << "]";
    }
    os << "],\"globes\":" << globes_to_json(gs, t.dom.dim, coordbits) << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// Coding radius
// ---------------------------------------------------------------------------

namespace {

// Does some special globe have its center in the closed unit ball around b?
// Decided from the sub-pattern within gather_r of b, which contains every
// point any relevant predicate can see.
bool block_has_special(const PointPattern& mu, const std::vector<size_t>& idx_by_x,
                       const std::vector<double>& xs, const SelectionParams& p, const Pt& b,
                       double gather_r) {
    PointPattern sub(mu.dom, mu.coordbits);
    auto lo = std::lower_bound(xs.begin(), xs.end(), b.cd[0] - gather_r);
    auto hi = std::upper_bound(xs.begin(), xs.end(), b.cd[0] + gather_r);
    for (auto it = lo; it != hi; ++it) {
        const Pt& q = mu.pts[idx_by_x[static_cast<size_t>(it - xs.begin())]];
        if (mu.dom.dim == 2 && std::fabs(q.cd[1] - b.cd[1]) > gather_r) continue;
        sub.pts.push_back(q);
    }
    if (sub.pts.empty()) return false;
    auto gs = seed_set(sub, p);
    const Real one(1.0);
    for (const auto& g : gs.globes)
        if (g.special && dist_cmp(g.center, b, mu.dom, one) <= 0) return true;
    return false;
}

}  // namespace

CodingRadius coding_radius(const PointPattern& mu, const SelectionParams& p) {
    if (mu.dom.torus)
        throw Error("coding_radius requires a box domain");
    validate_params(p, mu.dom.dim);
    CodingRadius cr;
    cr.ell = 100.0 * (p.shell_out + 1.0);
    const double gather_r = 1.0 + 2 * p.relation_dist + 2 * p.shell_out + 2.0;

    std::vector<size_t> idx_by_x(mu.pts.size());
    std::iota(idx_by_x.begin(), idx_by_x.end(), 0);
    std::sort(idx_by_x.begin(), idx_by_x.end(),
              [&](size_t a, size_t b) { return mu.pts[a].cd[0] < mu.pts[b].cd[0]; });
    std::vector<double> xs;
    xs.reserve(idx_by_x.size());
    for (size_t i : idx_by_x) xs.push_back(mu.pts[i].cd[0]);

    long sumT = 0;
    for (int axis = 0; axis < mu.dom.dim; ++axis) {
        const double side = mu.dom.sides[axis].d();
        const double center = side / 2;
        long k3[2] = {0, 0};  // third-success index per side
        for (int s = 0; s < 2; ++s) {
            int hits = 0;
            for (long k = 1;; ++k) {
                double pos = center + (s == 0 ? 1.0 : -1.0) * static_cast<double>(k) * cr.ell;
                if (pos - gather_r < 0 || pos + gather_r > side) throw WindowExhausted();
                Pt b;
                b.c[0] = Real(mu.dom.sides[0].d() / 2);
                if (mu.dom.dim == 2) b.c[1] = Real(mu.dom.sides[1].d() / 2);
                b.c[axis] = Real(pos);
                b.sync();
                if (block_has_special(mu, idx_by_x, xs, p, b, gather_r)) {
                    if (++hits == 3) {
                        k3[s] = k;
                        break;
                    }
                }
            }
        }
        cr.T[axis] = std::max(k3[0], k3[1]) + 1;
        sumT += cr.T[axis];
    }
    cr.w = 8.0 * cr.ell * static_cast<double>(sumT);
    return cr;
}

// ---------------------------------------------------------------------------
// Local determination
// ---------------------------------------------------------------------------

namespace {

double poly_dist(const Polytope& c, double px, double py, int dim) {
    if (dim == 1) {
        double lo = c.v[0][0].d(), hi = c.v[1][0].d();
        if (px < lo) return lo - px;
        if (px > hi) return px - hi;
        return 0;
    }
    // Distance from (px, py) to a convex CCW polygon (0 inside).
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    size_t n = c.v.size();
    for (size_t i = 0; i < n; ++i) {
        double ax = c.v[i][0].d(), ay = c.v[i][1].d();
        double bx = c.v[(i + 1) % n][0].d(), by = c.v[(i + 1) % n][1].d();
        double ex = bx - ax, ey = by - ay;
        double cross = ex * (py - ay) - ey * (px - ax);
        if (cross < 0) inside = false;
        double len2 = ex * ex + ey * ey;
        double tt = len2 > 0 ? std::clamp(((px - ax) * ex + (py - ay) * ey) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, std::hypot(px - (ax + tt * ex), py - (ay + tt * ey)));
    }
    return inside ? 0.0 : best;
}

}  // namespace

bool local_determination_check(const PointPattern& mu, const PointPattern& mu2,
                               const SelectionParams& p, double eps) {
    if (mu.dom.torus || mu2.dom.torus) throw Error("local_determination_check: box domains only");
    auto pick = [&](const PointPattern& m) {
        auto t = build_tessellation(seed_set(m, p), m.dom);
        double cx = m.dom.sides[0].d() / 2;
        double cy = m.dom.dim == 2 ? m.dom.sides[1].d() / 2 : 0;
        std::vector<std::pair<std::array<double, 2>, std::vector<std::array<double, 2>>>> out;
        for (size_t i = 0; i < t.cells.size(); ++i) {
            if (poly_dist(t.cells[i], cx, cy, m.dom.dim) > 1.0) continue;
            std::vector<std::array<double, 2>> verts;
            for (const auto& v : t.cells[i].v) verts.push_back({v[0].d(), v[1].d()});
            out.push_back({{t.sites[i].cd[0], t.sites[i].cd[1]}, std::move(verts)});
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto a = pick(mu), b = pick(mu2);
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        for (int ax = 0; ax < 2; ++ax)
            if (std::fabs(a[i].first[ax] - b[i].first[ax]) > eps) return false;
        if (a[i].second.size() != b[i].second.size()) return false;
        for (size_t k = 0; k < a[i].second.size(); ++k)
            for (int ax = 0; ax < 2; ++ax)
                if (std::fabs(a[i].second[k][ax] - b[i].second[k][ax]) > eps) return false;
    }
    return true;
}

}  // namespace ppiso
