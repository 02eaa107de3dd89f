// SPDX-License-Identifier: Apache-2.0

#include "ppiso/polysample.hpp"

#include <algorithm>

#include "ppiso/errors.hpp"

namespace ppiso {

namespace {

// Salts separating the PRF extension roles of derived streams.
constexpr uint64_t kSaltTupleSplit = 0x7455504C45ULL;
constexpr uint64_t kSaltScalarSplit = 0x5343414C41ULL;
constexpr uint64_t kSaltCompose = 0x434F4D50ULL;
constexpr uint64_t kSaltCellSplit = 0x43454C4CULL;

Real stream_value(const BitStream& s, mpfr_prec_t prec) {
    size_t total = static_cast<size_t>(prec);
    return s.value_extended(total, prec);
}

Real one_minus_pow(const Real& a, unsigned long root, mpfr_prec_t prec) {
    // (1 - a)^(1/root)
    Real base = sub_p(Real(1.0, prec), a, prec);
    if (base.sign() <= 0) throw NotBracketed("substream value reached 1");
    return root == 1 ? base : root_p(base, root, prec);
}

// Spacings -> point: x = sum_i v_i * S_{i+1}.
std::array<Real, 2> combine(const Simplex& s, const std::vector<Real>& spac) {
    std::array<Real, 2> x{Real(0.0, kCoordPrec), Real(0.0, kCoordPrec)};
    int nv = s.dim + 1;
    for (int i = 0; i < nv; ++i) {
        x[0] += mul_p(s.v[i][0], spac[i], kCoordPrec);
        if (s.dim == 2) x[1] += mul_p(s.v[i][1], spac[i], kCoordPrec);
    }
    return x;
}

// Conditional tail of the spacing chain given V1; fills V[1..d] from substream
// values a[1..d-1] (0-based index 1..).
void finish_chain(std::vector<Real>& V, const std::vector<Real>& a, int d, mpfr_prec_t prec) {
    for (int j = 2; j <= d; ++j) {
        unsigned long e = static_cast<unsigned long>(d - j + 1);
        Real rem = one_minus_pow(a[static_cast<size_t>(j - 1)], e, prec);
        // 1 - V_j = (1 - V_{j-1}) * rem
        Real om = mul_p(sub_p(Real(1.0, prec), V[static_cast<size_t>(j - 2)], prec), rem, prec);
        V[static_cast<size_t>(j - 1)] = sub_p(Real(1.0, prec), om, prec);
    }
}

std::vector<Real> chain_to_spacings(const std::vector<Real>& V, int d, mpfr_prec_t prec) {
    std::vector<Real> s;
    s.reserve(static_cast<size_t>(d) + 1);
    Real prev(0.0, prec);
    for (int j = 0; j < d; ++j) {
        s.push_back(sub_p(V[static_cast<size_t>(j)], prev, prec));
        prev = V[static_cast<size_t>(j)];
    }
    s.push_back(sub_p(Real(1.0, prec), prev, prec));
    return s;
}

// Inverse of finish_chain: recover substream values a[1..d-1] from V.
std::vector<Real> invert_chain_tail(const std::vector<Real>& V, int d, mpfr_prec_t prec) {
    std::vector<Real> a(static_cast<size_t>(d));
    for (int j = 2; j <= d; ++j) {
        unsigned long e = static_cast<unsigned long>(d - j + 1);
        Real num = sub_p(Real(1.0, prec), V[static_cast<size_t>(j - 1)], prec);
        Real den = sub_p(Real(1.0, prec), V[static_cast<size_t>(j - 2)], prec);
        Real ratio = div_p(num, den, prec);
        Real powed = ratio;
        for (unsigned long t = 1; t < e; ++t) powed = mul_p(powed, ratio, prec);
        a[static_cast<size_t>(j - 1)] = sub_p(Real(1.0, prec), powed, prec);
    }
    return a;
}

Real clamp_unit_open(Real v) {
    if (v.sign() < 0) mpfr_set_zero(v.get(), 1);
    if (v.cmp(1.0) >= 0) {
        mpfr_set_ui(v.get(), 1, MPFR_RNDN);
        mpfr_nextbelow(v.get());
    }
    return v;
}

// Spacing tuple of a point (barycentric coords in vertex order).
std::vector<Real> point_spacings(const std::array<Real, 2>& x, const Simplex& s,
                                 mpfr_prec_t prec) {
    auto b = barycentric(s, x, prec, kEpsFace, /*strict_interior=*/true);
    std::vector<Real> out;
    for (int i = 0; i <= s.dim; ++i) out.push_back(b[static_cast<size_t>(i)]);
    return out;
}

}  // namespace

std::array<Real, 2> uniform_simplex(const BitStream& u, const Simplex& s, mpfr_prec_t prec) {
    int d = s.dim;
    auto parts = u.deinterleave_extended(static_cast<size_t>(d), kPointStreamBits, kSaltScalarSplit);
    std::vector<Real> a;
    for (auto& p : parts) a.push_back(stream_value(p, prec));
    std::vector<Real> V(static_cast<size_t>(d), Real(0.0, prec));
    // V1 from F1(v) = 1 - (1-v)^d.
    V[0] = sub_p(Real(1.0, prec), one_minus_pow(a[0], static_cast<unsigned long>(d), prec), prec);
    finish_chain(V, a, d, prec);
    return combine(s, chain_to_spacings(V, d, prec));
}

BitStream uniform_simplex_inv(const std::array<Real, 2>& x, const Simplex& s, mpfr_prec_t prec) {
    int d = s.dim;
    auto spac = point_spacings(x, s, prec);
    std::vector<Real> V(static_cast<size_t>(d), Real(0.0, prec));
    Real acc(0.0, prec);
    for (int j = 0; j < d; ++j) {
        acc = add_p(acc, spac[static_cast<size_t>(j)], prec);
        V[static_cast<size_t>(j)] = acc;
    }
    auto a = invert_chain_tail(V, d, prec);
    // a[0] from F1: a1 = 1 - (1 - V1)^d.
    Real om = sub_p(Real(1.0, prec), V[0], prec);
    Real powed = om;
    for (int t = 1; t < d; ++t) powed = mul_p(powed, om, prec);
    a[0] = sub_p(Real(1.0, prec), powed, prec);

    std::vector<BitStream> parts;
    for (int j = 0; j < d; ++j)
        parts.push_back(BitStream::from_real(clamp_unit_open(a[static_cast<size_t>(j)]), kPointStreamBits));
    return BitStream::interleave(parts);
}

std::vector<std::array<Real, 2>> multi_uniform_simplex(const BitStream& u, const Simplex& s,
                                                       size_t n, mpfr_prec_t prec) {
    std::vector<std::array<Real, 2>> out;
    if (n == 0) return out;
    int d = s.dim;
    auto parts = u.deinterleave_extended(n, static_cast<size_t>(d) * kPointStreamBits, kSaltTupleSplit);
    Real T(1.0, prec);  // 1 - U_(i) in the order-statistic chain on F1(V1)
    for (size_t i = 0; i < n; ++i) {
        auto sub = parts[i].deinterleave_extended(static_cast<size_t>(d), kPointStreamBits,
                                                  kSaltScalarSplit);
        std::vector<Real> a;
        for (auto& ss : sub) a.push_back(stream_value(ss, prec));
        T = mul_p(T, one_minus_pow(a[0], static_cast<unsigned long>(n - i), prec), prec);
        std::vector<Real> V(static_cast<size_t>(d), Real(0.0, prec));
        // V1 = G^{-1}(U_(i)) with G(v) = 1 - (1-v)^d, i.e. 1 - V1 = T^(1/d).
        V[0] = sub_p(Real(1.0, prec),
                     d == 1 ? T : root_p(T, static_cast<unsigned long>(d), prec), prec);
        finish_chain(V, a, d, prec);
        out.push_back(combine(s, chain_to_spacings(V, d, prec)));
    }
    return out;
}

BitStream multi_uniform_simplex_inv(std::vector<std::array<Real, 2>> pts, const Simplex& s,
                                    mpfr_prec_t prec) {
    size_t n = pts.size();
    int d = s.dim;
    std::vector<std::vector<Real>> tuples;
    tuples.reserve(n);
    for (const auto& x : pts) tuples.push_back(point_spacings(x, s, prec));
    std::sort(tuples.begin(), tuples.end(), [](const std::vector<Real>& a, const std::vector<Real>& b) {
        for (size_t k = 0; k < a.size(); ++k) {
            int c = a[k].cmp(b[k]);
            if (c != 0) return c < 0;
        }
        return false;
    });

    std::vector<BitStream> parts;
    Real T(1.0, prec);
    for (size_t i = 0; i < n; ++i) {
        std::vector<Real> V(static_cast<size_t>(d), Real(0.0, prec));
        Real acc(0.0, prec);
        for (int j = 0; j < d; ++j) {
            acc = add_p(acc, tuples[i][static_cast<size_t>(j)], prec);
            V[static_cast<size_t>(j)] = acc;
        }
        // T_i = (1 - V1)^d; chain value a1 = 1 - (T_i / T_{i-1})^(n-i+1).
        Real om = sub_p(Real(1.0, prec), V[0], prec);
        Real Ti = om;
        for (int t = 1; t < d; ++t) Ti = mul_p(Ti, om, prec);
        Real ratio = div_p(Ti, T, prec);
        unsigned long e = static_cast<unsigned long>(n - i);
        Real powed = ratio;
        for (unsigned long t = 1; t < e; ++t) powed = mul_p(powed, ratio, prec);
        std::vector<Real> a = invert_chain_tail(V, d, prec);
        a[0] = sub_p(Real(1.0, prec), powed, prec);
        T = Ti;

        std::vector<BitStream> sub;
        for (int j = 0; j < d; ++j)
            sub.push_back(BitStream::from_real(clamp_unit_open(a[static_cast<size_t>(j)]), kPointStreamBits));
        parts.push_back(BitStream::interleave(sub));
    }
    if (parts.empty()) return BitStream();
    return BitStream::interleave(parts);
}

std::vector<std::array<Real, 2>> polytope_n_points(const BitStream& u, const Polytope& poly,
                                                   size_t n, mpfr_prec_t prec) {
    auto tris = poly.triangulate();
    size_t k = tris.size();
    if (k == 1) return multi_uniform_simplex(u, tris[0], n, prec);

    // Nested binomial split of the count vector, lexicographic order.
    Real x = u.value_extended(kBigPrec, kBigPrec);
    Real remvol = poly.volume();
    size_t remaining = n;
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i + 1 < k; ++i) {
        Real vol = tris[i].volume();
        auto cdf = DiscreteCdf::binomial(static_cast<long>(remaining), div_p(vol, remvol, prec), prec);
        auto sp = cdf.split(x, kBigPrec);
        counts[i] = sp.count;
        x = sp.residual;
        remaining -= sp.count;
        remvol = sub_p(remvol, vol, kCoordPrec);
    }
    counts[k - 1] = remaining;

    BitStream fs = BitStream::from_real(clamp_unit_open(x), kResidualBits);
    fs.make_extendable(kSaltCompose);
    size_t nonempty = 0, maxn = 0;
    for (size_t c : counts) {
        if (c) ++nonempty;
        maxn = std::max(maxn, c);
    }
    std::vector<std::array<Real, 2>> out;
    if (nonempty == 0) return out;
    auto subs = fs.deinterleave_extended(nonempty,
                                         maxn * static_cast<size_t>(poly.dim) * kPointStreamBits,
                                         kSaltTupleSplit + 1);
    size_t si = 0;
    for (size_t i = 0; i < k; ++i) {
        if (!counts[i]) continue;
        auto pts = multi_uniform_simplex(subs[si++], tris[i], counts[i], prec);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

BitStream polytope_n_points_inv(const std::vector<std::array<Real, 2>>& pts, const Polytope& poly,
                                mpfr_prec_t prec) {
    auto tris = poly.triangulate();
    size_t k = tris.size();
    if (k == 1) return multi_uniform_simplex_inv(pts, tris[0], prec);

    // Assign each point to the unique triangle whose strict interior holds it.
    std::vector<std::vector<std::array<Real, 2>>> bucket(k);
    for (const auto& p : pts) {
        int home = -1;
        for (size_t i = 0; i < k; ++i) {
            try {
                (void)barycentric(tris[i], p, prec, kEpsFace, true);
            } catch (const PointOnSharedFace&) {
                continue;
            } catch (const DegenerateConfiguration&) {
                continue;
            }
            if (home >= 0) throw PointOnSharedFace("point interior to two triangles");
            home = static_cast<int>(i);
        }
        if (home < 0) throw PointOnSharedFace("point on a triangulation face or outside");
        bucket[static_cast<size_t>(home)].push_back(p);
    }

    // Rebuild the per-simplex streams and interleave them back into the
    // rescaled residual stream.
    size_t nonempty = 0, maxn = 0;
    for (auto& b : bucket) {
        if (!b.empty()) ++nonempty;
        maxn = std::max(maxn, b.size());
    }
    size_t len_each = maxn * static_cast<size_t>(poly.dim) * kPointStreamBits;
    Real f(0.0, kBigPrec);
    if (nonempty > 0) {
        std::vector<BitStream> subs;
        size_t known = len_each;
        std::vector<BitStream> recs;
        for (size_t i = 0; i < k; ++i) {
            if (bucket[i].empty()) continue;
            BitStream rec = multi_uniform_simplex_inv(bucket[i], tris[i], prec);
            known = std::min(known, rec.size());
            recs.push_back(std::move(rec));
        }
        for (auto& r : recs) subs.push_back(r.take(known <= r.size() ? known : r.size()));
        BitStream fsbits = BitStream::interleave(subs);
        f = fsbits.value(kBigPrec);
    }

    // Fold the counts back through the nested binomial tables.
    Real remvol = poly.volume();
    size_t remaining = pts.size();
    std::vector<size_t> counts(k);
    for (size_t i = 0; i < k; ++i) counts[i] = bucket[i].size();
    std::vector<Real> probs;
    std::vector<long> rems;
    for (size_t i = 0; i + 1 < k; ++i) {
        Real vol = tris[i].volume();
        probs.push_back(div_p(vol, remvol, prec));
        rems.push_back(static_cast<long>(remaining));
        remaining -= counts[i];
        remvol = sub_p(remvol, vol, kCoordPrec);
    }
    Real x = f;
    for (size_t i = k - 1; i-- > 0;) {
        auto cdf = DiscreteCdf::binomial(rems[i], probs[i], prec);
        x = cdf.merge(counts[i], x, kBigPrec);
    }
    return BitStream::from_real(clamp_unit_open(x), kResidualBits);
}

CellSample pi_cell(const BitStream& u, const Polytope& cell, const Real& intensity,
                   mpfr_prec_t prec) {
    Real mean = mul_p(intensity, cell.volume(), prec);
    auto table = DiscreteCdf::poisson_cached(mean, prec);
    Real x = u.value_extended(kBigPrec, kBigPrec);
    auto sp = table->split(x, kBigPrec);

    CellSample out;
    out.count = sp.count;
    BitStream f = BitStream::from_real(clamp_unit_open(sp.residual), kResidualBits);
    f.make_extendable(kSaltCellSplit);
    if (sp.count == 0) {
        out.residual = f;
        return out;
    }
    auto halves = f.deinterleave_extended(2, kResidualBits / 2, kSaltCellSplit + 1);
    out.points = polytope_n_points(halves[0], cell, sp.count, prec);
    out.residual = halves[1];
    return out;
}

BitStream pi_cell_inv(const std::vector<std::array<Real, 2>>& pts, const BitStream& residual,
                      const Polytope& cell, const Real& intensity, size_t out_bits,
                      mpfr_prec_t prec) {
    Real mean = mul_p(intensity, cell.volume(), prec);
    auto table = DiscreteCdf::poisson_cached(mean, prec);
    size_t m = pts.size();

    Real f(0.0, kBigPrec);
    if (m == 0) {
        f = residual.value(kBigPrec);
    } else {
        BitStream ph = polytope_n_points_inv(pts, cell, prec);
        size_t half = kResidualBits / 2;
        size_t len = std::min({ph.size(), residual.size(), half});
        std::vector<BitStream> halves{ph.take(len), residual.take(len)};
        f = BitStream::interleave(halves).value(kBigPrec);
    }
    Real x = table->merge(m, f, kBigPrec);
    return BitStream::from_real(clamp_unit_open(x), out_bits);
}

}  // namespace ppiso
