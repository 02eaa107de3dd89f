// SPDX-License-Identifier: Apache-2.0

#include "ppiso/iso.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ppiso/ballmap.hpp"
#include "ppiso/errors.hpp"
#include "ppiso/polysample.hpp"
#include "ppiso/tessellation.hpp"

namespace ppiso {

namespace {

constexpr std::uint64_t kSaltGrid = 0x6772696463656c6cULL;
constexpr std::uint64_t kSaltAlpha = 0x616c706861707273ULL;

Real clamp_unit_open(Real v) {
    if (v.sign() < 0) mpfr_set_zero(v.get(), 1);
    if (v.cmp(1.0) >= 0) {
        mpfr_set_ui(v.get(), 1, MPFR_RNDN);
        mpfr_nextbelow(v.get());
    }
    return v;
}

// The globe's Voronoi cell in canonical pose: Q^T (v - c) vertex-wise.
Polytope transform_cell(const Polytope& cell, const Frame& f, int dim) {
    if (dim == 1) {
        Real a = f.Q[0][0] * (cell.v[0][0] - f.center.c[0]);
        Real b = f.Q[0][0] * (cell.v[1][0] - f.center.c[0]);
        if (b < a) std::swap(a, b);
        return Polytope::interval(std::move(a), std::move(b));
    }
    std::vector<std::array<Real, 2>> verts;
    verts.reserve(cell.v.size());
    for (const auto& v : cell.v) {
        Real dx = v[0] - f.center.c[0], dy = v[1] - f.center.c[1];
        verts.push_back({f.Q[0][0] * dx + f.Q[1][0] * dy,
                         f.Q[0][1] * dx + f.Q[1][1] * dy});
    }
    return Polytope::polygon(std::move(verts));  // restores CCW under reflections
}

Pt truncated_point(const Pt& p, int coordbits, int dim) {
    Pt out;
    for (int a = 0; a < dim; ++a) out.c[a] = p.c[a].truncate_bits(coordbits);
    out.sync();
    return out;
}

// Site index of a globe center in the tessellation (exact match).
std::size_t site_of(const Tessellation& t, const Pt& c) {
    for (std::size_t j = 0; j < t.sites.size(); ++j)
        if (t.sites[j] == c) return j;
    throw InconsistentPair("globe center is not a tessellation site");
}

}  // namespace

BitStream alpha_prime(const PointPattern& mu, const GlobeSet& globes,
                      const Frame& frame, std::size_t i) {
    const Globe& g = globes.globes.at(i);
    if (!g.special) throw NotASpecialGlobe();
    auto z = frame_apply(frame, *g.unique_point, mu.dom);
    BitStream a = ball_to_interval({z[0], z[1], Real(0.0)}, mu.dom.dim, kAlphaBitsPerCoord,
                                   kCoordPrec);
    // The cell sampler reads more bits than the encoding stores; extend with a
    // tail that is a fixed function of the stored bits so the map stays
    // deterministic and frame-covariant.
    a.make_extendable(kSaltAlpha);
    return a;
}

IsoOutput psi(const PointPattern& mu, double r, double s,
              const SelectionParams& params, FrameMode mode) {
    const Domain& dom = mu.dom;
    GlobeSet gs = seed_set(mu, params);
    auto special = gs.special_indices();
    if (special.empty()) throw NoSpecialGlobes();
    Tessellation tess = build_tessellation(gs, dom);

    IsoOutput out;
    out.mode = mode;
    out.r = r;
    out.s = s;
    out.second = PointPattern(dom, mu.coordbits);
    PointPattern removed(dom, mu.coordbits), added(dom, mu.coordbits);
    Real intensity(s);

    for (std::size_t gi : special) {
        const Globe& g = gs.globes[gi];
        Frame f = make_frame(mu, gs, gi, params, mode == FrameMode::kTranslation);
        BitStream a = alpha_prime(mu, gs, f, gi);

        std::size_t site = site_of(tess, g.center);
        Polytope cell = transform_cell(tess.cells[site], f, dom.dim);
        CellSample cs = pi_cell(a, cell, intensity, kWorkPrec);

        for (const auto& z : cs.points)
            out.second.add(truncated_point(frame_invert(f, z, dom), mu.coordbits, dom.dim));

        auto zr = interval_to_ball(cs.residual, dom.dim, kCoordPrec);
        Pt rep = truncated_point(frame_invert(f, {zr[0], zr[1]}, dom), mu.coordbits, dom.dim);
        removed.add(*g.unique_point);
        added.add(rep);
    }

    out.second.check_simple();
    out.first = PointPattern::pattern_sum(PointPattern::pattern_diff(mu, removed), added);
    return out;
}

PointPattern psi_inv(const IsoOutput& out, const SelectionParams& params) {
    const Domain& dom = out.first.dom;
    if (out.second.dom.dim != dom.dim) throw InconsistentPair("dimension mismatch");
    GlobeSet gs = seed_set(out.first, params);
    auto special = gs.special_indices();
    if (special.empty()) throw NoSpecialGlobes();
    Tessellation tess = build_tessellation(gs, dom);

    // Assign every generated point to its (unique) cell.
    std::vector<std::vector<std::array<Real, 2>>> bucket(tess.sites.size());
    for (const Pt& q : out.second.pts) {
        std::size_t j = cell_of(tess, q);
        bucket[j].push_back(lift_to_cell(tess, j, q));
    }

    PointPattern removed(dom, out.first.coordbits), added(dom, out.first.coordbits);
    Real intensity(out.s);

    for (std::size_t gi : special) {
        const Globe& g = gs.globes[gi];
        if (!g.unique_point) throw InconsistentPair("special globe without replacement point");
        const Pt& rep = *g.unique_point;
        Frame f = make_frame(out.first, gs, gi, params, out.mode == FrameMode::kTranslation);
        std::size_t site = site_of(tess, g.center);
        Polytope cell = transform_cell(tess.cells[site], f, dom.dim);

        // Cell points back into canonical pose: Q^T (lifted - c).
        std::vector<std::array<Real, 2>> zpts;
        zpts.reserve(bucket[site].size());
        for (const auto& lv : bucket[site]) {
            Real dx = lv[0] - f.center.c[0], dy = lv[1] - f.center.c[1];
            if (dom.dim == 1)
                zpts.push_back({f.Q[0][0] * dx, Real(0.0)});
            else
                zpts.push_back({f.Q[0][0] * dx + f.Q[1][0] * dy,
                                f.Q[0][1] * dx + f.Q[1][1] * dy});
        }

        // Residual from the replacement point; stored length matches the
        // forward branch (full payload when the cell came out empty).
        std::size_t res_bits = zpts.empty() ? kResidualBits : kResidualBits / 2;
        auto zr = frame_apply(f, rep, dom);
        BitStream residual;
        try {
            residual = ball_to_interval({zr[0], zr[1], Real(0.0)}, dom.dim,
                                        static_cast<int>(res_bits) / dom.dim, kCoordPrec);
        } catch (const OutsideBall&) {
            throw InconsistentPair("replacement point outside its globe");
        }

        BitStream u = pi_cell_inv(zpts, residual, cell, intensity,
                                  static_cast<std::size_t>(kAlphaBitsPerCoord) * dom.dim,
                                  kWorkPrec);
        auto zx = interval_to_ball(u, dom.dim, kCoordPrec);
        Pt x = truncated_point(frame_invert(f, {zx[0], zx[1]}, dom), out.first.coordbits,
                               dom.dim);
        if (dist_approx(x, g.center, dom) > 1.0 + 1e-6)
            throw InconsistentPair("decoded point outside its globe");
        removed.add(rep);
        added.add(x);
    }

    return PointPattern::pattern_sum(PointPattern::pattern_diff(out.first, removed), added);
}

PointPattern phi(const PointPattern& mu, double r, double s,
                 const SelectionParams& params, FrameMode mode) {
    IsoOutput fwd = psi(mu, r, s, params, mode);
    IsoOutput swapped;
    swapped.first = std::move(fwd.second);
    swapped.second = std::move(fwd.first);
    swapped.mode = mode;
    swapped.r = s;
    swapped.s = r;  // the swapped second component carries intensity r
    return psi_inv(swapped, params);
}

PointPattern phi_inv(const PointPattern& nu, double r, double s,
                     const SelectionParams& params, FrameMode mode) {
    return phi(nu, s, r, params, mode);
}

std::pair<PointPattern, PointPattern> product_iso(const PointPattern& mu, double r,
                                                  double s, double s2,
                                                  const SelectionParams& params,
                                                  FrameMode mode) {
    PointPattern mid = phi(mu, r, s, params, mode);
    IsoOutput o = psi(mid, s, s2, params, mode);
    return {std::move(o.first), std::move(o.second)};
}

PointPattern grid_generate(const std::vector<BitStream>& cell_streams, double r,
                           const Domain& dom, int coordbits) {
    if (dom.dim != 2 || dom.torus)
        throw DegenerateConfiguration("grid generator needs a planar box");
    long a = std::lround(dom.sides[0].d()), b = std::lround(dom.sides[1].d());
    if (a <= 0 || b <= 0 || Real(double(a)) != dom.sides[0] || Real(double(b)) != dom.sides[1])
        throw DegenerateConfiguration("grid generator needs integer box sides");
    if (cell_streams.size() != static_cast<std::size_t>(a) * static_cast<std::size_t>(b))
        throw DegenerateConfiguration("one payload stream per unit cell required");

    auto table = DiscreteCdf::poisson_cached(Real(r), kWorkPrec);
    PointPattern out(dom, coordbits);
    for (long k2 = 0; k2 < b; ++k2)
        for (long k1 = 0; k1 < a; ++k1) {
            const BitStream& u = cell_streams[static_cast<std::size_t>(k2) * a + k1];
            Real x = u.value_extended(kBigPrec, kBigPrec);
            auto sp = table->split(x, kBigPrec);
            if (sp.count == 0) continue;
            BitStream fstr = BitStream::from_real(clamp_unit_open(sp.residual), kResidualBits);
            fstr.make_extendable(kSaltGrid);
            auto streams = fstr.deinterleave_extended(2 * sp.count, kPointStreamBits,
                                                      kSaltGrid + 1);
            for (std::size_t i = 1; i <= sp.count; ++i) {
                // Paired coordinates: stream i with stream 2m - i + 1.
                Real px = streams[i - 1].value_extended(kCoordPrec, kCoordPrec) + Real(double(k1));
                Real py = streams[2 * sp.count - i].value_extended(kCoordPrec, kCoordPrec) +
                          Real(double(k2));
                Pt p(px.truncate_bits(coordbits), py.truncate_bits(coordbits));
                out.add(std::move(p));
            }
        }
    out.check_simple();
    return out;
}

}  // namespace ppiso
