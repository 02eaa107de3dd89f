// SPDX-License-Identifier: Apache-2.0

#include "ppiso/frames.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "ppiso/errors.hpp"

namespace ppiso {

namespace {

constexpr double kTieTol = 1e-12;     // distance ties this close are degenerate
constexpr double kOrthTol = 1e-10;    // orthogonality residual budget

std::array<Real, 2> lift_offset(const Pt& x, const Pt& c, const Domain& dom) {
    std::array<Real, 2> off{Real(0.0), Real(0.0)};
    for (int a = 0; a < dom.dim; ++a)
        off[a] = lifted_delta(x.c[a], c.c[a], dom.sides[a], dom.torus);
    return off;
}

// Exact squared length of a lifted offset.
Real off_sq(const std::array<Real, 2>& o, int dim) {
    Real s = sqr_full(o[0]);
    if (dim == 2) s += sqr_full(o[1]);
    return s;
}

Real pair_sq(const std::array<Real, 2>& a, const std::array<Real, 2>& b, int dim) {
    Real dx = a[0] - b[0];
    Real s = sqr_full(dx);
    if (dim == 2) {
        Real dy = a[1] - b[1];
        s += sqr_full(dy);
    }
    return s;
}

// Keyed argmin over exact squared distances with degeneracy detection: an
// exact tie, or a runner-up within kTieTol of the minimum (in distance, not
// squared distance), is a degenerate configuration.
struct ArgMin {
    bool have = false;
    Real best;
    std::size_t index = 0;

    void feed(Real v, std::size_t i) {
        if (!have) {
            have = true;
            best = std::move(v);
            index = i;
            return;
        }
        int c = v.cmp(best);
        if (c == 0) throw DegenerateConfiguration("exact distance tie in halo chain");
        double lo = std::sqrt(std::min(v.d(), best.d()));
        double hi = std::sqrt(std::max(v.d(), best.d()));
        if (hi - lo < kTieTol)
            throw DegenerateConfiguration("near-tie in halo chain distances");
        if (c < 0) {
            best = std::move(v);
            index = i;
        }
    }
};

}  // namespace

DTag d_tag(const PointPattern& mu, const GlobeSet& globes, std::size_t i,
           const SelectionParams& params) {
    const Domain& dom = mu.dom;
    const Pt& c = globes.globes.at(i).center;
    if (dom.torus) {
        Real min_side = dom.sides[0];
        if (dom.dim == 2 && dom.sides[1] < min_side) min_side = dom.sides[1];
        if (!(Real(params.shell_in).ldexp(1) < min_side))
            throw RegionTooLargeForTorus("halo shell exceeds half the torus");
    }

    Real rin(params.halo_in), rout(params.shell_in);
    double pad = 1e-6;
    std::vector<Pt> halo;
    std::vector<std::array<Real, 2>> off;
    for (const Pt& x : mu.pts) {
        double ad = dist_approx(x, c, dom);
        if (ad < rin.d() - pad || ad > rout.d() + pad) continue;
        if (dist_cmp(x, c, dom, rin) < 0 || dist_cmp(x, c, dom, rout) > 0) continue;
        halo.push_back(x);
        off.push_back(lift_offset(x, c, dom));
    }
    std::size_t n = halo.size();
    if (n == 0 || (dom.dim == 2 && n < 2))
        throw InsufficientHaloPoints("halo of globe has too few points for a d-tag");

    DTag tag;
    tag.globe_index = i;

    std::vector<std::size_t> chain;
    if (n == 1) {
        chain.push_back(0);  // single halo point: chain of length 1 (d=1 only)
    } else {
        // Mutually closest pair = the pair realizing the minimum pairwise
        // distance; its member nearer to the center starts the chain.
        ArgMin pairmin;
        for (std::size_t a = 0; a + 1 < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                pairmin.feed(pair_sq(off[a], off[b], dom.dim), a * n + b);
        std::size_t besta = pairmin.index / n, bestb = pairmin.index % n;
        Real da = off_sq(off[besta], dom.dim), db = off_sq(off[bestb], dom.dim);
        int cc = da.cmp(db);
        if (cc == 0 ||
            std::fabs(std::sqrt(da.d()) - std::sqrt(db.d())) < kTieTol)
            throw DegenerateConfiguration("mutually closest pair equidistant from center");
        chain.push_back(cc < 0 ? besta : bestb);
    }
    while (chain.size() < static_cast<std::size_t>(dom.dim)) {
        // h^{j} = nearest halo point to h^{j-1} not already chosen.
        std::size_t prev = chain.back();
        ArgMin nxt;
        for (std::size_t a = 0; a < n; ++a) {
            bool used = false;
            for (std::size_t u : chain) used = used || u == a;
            if (used) continue;
            nxt.feed(pair_sq(off[a], off[prev], dom.dim), a);
        }
        chain.push_back(nxt.index);
    }

    for (int j = 0; j < dom.dim; ++j) {
        tag.halo_points.push_back(halo[chain[j]]);
        for (int row = 0; row < dom.dim; ++row)
            tag.H[row][j] = off[chain[j]][row];
    }

    if (dom.dim == 2) {
        Real det = mul_full(tag.H[0][0], tag.H[1][1]) - mul_full(tag.H[0][1], tag.H[1][0]);
        double scale = 0;
        for (int r = 0; r < 2; ++r)
            for (int cl = 0; cl < 2; ++cl) scale = std::max(scale, std::fabs(tag.H[r][cl].d()));
        if (std::fabs(det.d()) <= kTieTol * scale * scale)
            throw DegenerateConfiguration("singular d-tag matrix");
    }
    return tag;
}

std::pair<Mat2, Mat2> qr_positive(const Mat2& H, int dim) {
    Mat2 Q{{{Real(1.0), Real(0.0)}, {Real(0.0), Real(1.0)}}};
    Mat2 R{{{Real(0.0), Real(0.0)}, {Real(0.0), Real(0.0)}}};
    if (dim == 1) {
        if (H[0][0].is_zero()) throw SingularMatrix("zero d-tag column");
        // Exact in dimension one: Q = sign(h), R = |h|.
        Q[0][0] = Real(H[0][0].sign() > 0 ? 1.0 : -1.0);
        R[0][0] = H[0][0].abs();
        return {Q, R};
    }

    double scale = 0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) scale = std::max(scale, std::fabs(H[r][c].d()));
    if (scale == 0) throw SingularMatrix("zero d-tag matrix");

    // Modified Gram-Schmidt at kWorkPrec; diag(R) = column norms > 0.
    Real n1 = sqrt_p(sqr_full(H[0][0]) + sqr_full(H[1][0]), kWorkPrec);
    if (n1.d() <= kTieTol * scale) throw SingularMatrix("first d-tag column too short");
    Real q10 = div_p(H[0][0], n1, kWorkPrec), q11 = div_p(H[1][0], n1, kWorkPrec);
    Real r12 = add_p(mul_p(q10, H[0][1], kWorkPrec), mul_p(q11, H[1][1], kWorkPrec), kWorkPrec);
    Real w0 = sub_p(H[0][1], mul_p(r12, q10, kWorkPrec), kWorkPrec);
    Real w1 = sub_p(H[1][1], mul_p(r12, q11, kWorkPrec), kWorkPrec);
    Real n2 = sqrt_p(add_p(mul_p(w0, w0, kWorkPrec), mul_p(w1, w1, kWorkPrec), kWorkPrec), kWorkPrec);
    if (n2.d() <= kTieTol * scale) throw SingularMatrix("d-tag columns nearly collinear");
    Q[0][0] = q10;
    Q[1][0] = q11;
    Q[0][1] = div_p(w0, n2, kWorkPrec);
    Q[1][1] = div_p(w1, n2, kWorkPrec);
    R[0][0] = n1;
    R[0][1] = r12;
    R[1][1] = n2;

    // Per-call orthogonality audit: ||Q^T Q - I||_max must stay within budget.
    double g00 = Q[0][0].d() * Q[0][0].d() + Q[1][0].d() * Q[1][0].d() - 1.0;
    double g11 = Q[0][1].d() * Q[0][1].d() + Q[1][1].d() * Q[1][1].d() - 1.0;
    double g01 = Q[0][0].d() * Q[0][1].d() + Q[1][0].d() * Q[1][1].d();
    double res = std::max({std::fabs(g00), std::fabs(g11), std::fabs(g01)});
    if (res > kOrthTol) throw SingularMatrix("orthogonality residual out of budget");
    return {Q, R};
}

Frame make_frame(const PointPattern& mu, const GlobeSet& globes, std::size_t i,
                 const SelectionParams& params, bool translation_only) {
    const Globe& g = globes.globes.at(i);
    if (!g.special) throw NotASpecialGlobe();
    Frame f;
    f.globe_index = i;
    f.center = g.center;
    if (translation_only) return f;  // Q = I, pure recentering
    DTag tag = d_tag(mu, globes, i, params);
    auto qr = qr_positive(tag.H, mu.dom.dim);
    f.Q = qr.first;
    f.R = qr.second;
    return f;
}

Isometry fixing_isometry(const Frame& f, int dim) {
    Isometry g = Isometry::identity(dim);
    // Linear part Q^T, translation -Q^T c, so sigma(c) = 0.
    g.Q = {{{f.Q[0][0], f.Q[1][0]}, {f.Q[0][1], f.Q[1][1]}}};
    auto qc = g.apply_linear(f.center.c);
    g.t = {-qc[0], -qc[1]};
    return g;
}

std::array<Real, 2> frame_apply(const Frame& f, const Pt& x, const Domain& dom) {
    auto off = lift_offset(x, f.center, dom);
    if (dom.dim == 1) return {f.Q[0][0] * off[0], Real(0.0)};
    return {f.Q[0][0] * off[0] + f.Q[1][0] * off[1],
            f.Q[0][1] * off[0] + f.Q[1][1] * off[1]};
}

Pt frame_invert(const Frame& f, const std::array<Real, 2>& z, const Domain& dom) {
    Pt out;
    for (int a = 0; a < dom.dim; ++a) {
        Real y = dom.dim == 1 ? f.Q[0][0] * z[0]
                              : f.Q[a][0] * z[0] + f.Q[a][1] * z[1];
        Real v = f.center.c[a] + y;
        out.c[a] = dom.torus ? wrap_coord(std::move(v), dom.sides[a]) : std::move(v);
    }
    out.sync();
    return out;
}

}  // namespace ppiso
