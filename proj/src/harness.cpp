// SPDX-License-Identifier: Apache-2.0

#include "ppiso/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ppiso/bitstream.hpp"
#include "ppiso/errors.hpp"
#include "ppiso/partition.hpp"
#include "ppiso/polysample.hpp"

namespace ppiso {

namespace {

constexpr double kRoundTripTol = 0x1.0p-64;

Real domain_volume(const Domain& dom) {
    Real v = dom.sides[0];
    if (dom.dim == 2) v = mul_full(v, dom.sides[1]);
    return v;
}

Pt box_center(const Domain& dom) {
    if (dom.dim == 1) return Pt(dom.sides[0].half());
    return Pt(dom.sides[0].half(), dom.sides[1].half());
}

// Unit-volume cell i of the fixed 16-cell partition used by the count tests.
bool in_unit_cell(const Pt& p, int dim, int i) {
    if (dim == 1) return p.cd[0] >= i && p.cd[0] < i + 1;
    int cx = i % 4, cy = i / 4;
    return p.cd[0] >= cx && p.cd[0] < cx + 1 && p.cd[1] >= cy && p.cd[1] < cy + 1;
}

}  // namespace

PointPattern sample_poisson(const Domain& dom, double r, Rng& rng, int coordbits) {
    Real mean = mul_p(Real(r), domain_volume(dom), kWorkPrec);
    auto table = DiscreteCdf::poisson_cached(mean, kWorkPrec);
    BitStream u = BitStream::from_rng(rng, kBigPrec);
    std::size_t n = table->locate(u.value(kBigPrec));

    PointPattern out(dom, coordbits);
    for (std::size_t k = 0; k < n; ++k) {
        Pt p;
        for (int a = 0; a < dom.dim; ++a) {
            BitStream cb = BitStream::from_rng(rng, static_cast<std::size_t>(coordbits));
            p.c[a] = (dom.sides[a] * cb.value(kCoordPrec)).truncate_bits(coordbits);
        }
        p.sync();
        out.add(std::move(p));
    }
    out.check_simple();
    return out;
}

PointPattern resample_inside_globes(const PointPattern& mu, const GlobeSet& gs,
                                    double r, Rng& rng, bool special_only) {
    Real radius(1.0);
    PointPattern outside = restrict_selection(mu, gs, radius, special_only, true);
    PointPattern fresh = sample_poisson(mu.dom, r, rng, mu.coordbits);
    PointPattern inside = fresh.filter([&](const Pt& p) {
        return in_globes(gs, p, mu.dom, radius, special_only);
    });
    return PointPattern::pattern_sum(outside, inside);
}

TestReport poisson_suite(const std::vector<PointPattern>& patterns, double r,
                         const Domain& dom, double alpha) {
    if (patterns.size() < 100) throw InsufficientSamples("poisson_suite needs >= 100 patterns");
    TestReport rep;
    rep.suite = "poisson";
    {
        std::ostringstream cfg;
        cfg << "r=" << r << " dim=" << dom.dim << " n=" << patterns.size();
        rep.config = cfg.str();
    }
    const int nrec = 3 + dom.dim;
    const double a_bonf = alpha / nrec;

    // (i) counts chi-squared over 16 unit cells, pooled across realizations.
    std::vector<std::vector<long>> cellcounts(16);
    for (const auto& pat : patterns) {
        std::array<long, 16> c{};
        for (const auto& p : pat.pts)
            for (int i = 0; i < 16; ++i)
                if (in_unit_cell(p, dom.dim, i)) {
                    ++c[i];
                    break;
                }
        for (int i = 0; i < 16; ++i) cellcounts[i].push_back(c[i]);
    }
    {
        std::vector<double> hist;
        double nsamp = 0;
        for (const auto& cc : cellcounts)
            for (long v : cc) {
                if (static_cast<std::size_t>(v) + 1 > hist.size()) hist.resize(v + 1, 0.0);
                hist[v] += 1;
                nsamp += 1;
            }
        // Bin tail so every expected count is >= 5.
        std::vector<double> obs, exp;
        double tail = 1.0, tacc = 0;
        for (std::size_t k = 0; k < hist.size() + 8; ++k) {
            double pk = poisson_pmf(r, static_cast<unsigned>(k));
            double ek = nsamp * pk;
            double ok = k < hist.size() ? hist[k] : 0.0;
            tail -= pk;
            if (ek >= 5 && nsamp * tail >= 5) {
                obs.push_back(ok);
                exp.push_back(ek);
            } else {
                tacc += ok;
                for (std::size_t j = k + 1; j < hist.size(); ++j) tacc += hist[j];
                obs.push_back(tacc);
                exp.push_back(nsamp * (tail + pk));
                break;
            }
        }
        auto [stat, p] = chi2_gof(obs, exp);
        rep.add_p("counts_chi2_16cells", stat, p, a_bonf, static_cast<std::size_t>(nsamp));
    }

    // (ii) pairwise covariance of disjoint cell counts: max |z| over 8 pairs.
    {
        double maxz = 0;
        std::size_t n = patterns.size();
        for (int t = 0; t < 8; ++t) {
            std::vector<double> a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = static_cast<double>(cellcounts[2 * t][i]);
                b[i] = static_cast<double>(cellcounts[2 * t + 1][i]);
            }
            maxz = std::max(maxz, std::fabs(pearson(a, b)) * std::sqrt(static_cast<double>(n)));
        }
        double p = std::min(1.0, 16 * normal_sf(maxz));  // Bonferroni over 8 two-sided tests
        rep.add_p("count_independence_max_z", maxz, p, a_bonf, n);
    }

    // (iii) void probability of the unit ball at the domain center.
    {
        Pt c = box_center(dom);
        std::size_t voids = 0;
        for (const auto& pat : patterns)
            if (pat.count_in_ball(c, Real(1.0)) == 0) ++voids;
        double vol = dom.dim == 1 ? 2.0 : 3.14159265358979323846;
        double p0 = std::exp(-r * vol);
        double n = static_cast<double>(patterns.size());
        double z = (voids / n - p0) / std::sqrt(p0 * (1 - p0) / n);
        rep.add("void_probability_3sigma", z, 2 * normal_sf(std::fabs(z)), 3.0,
                std::fabs(z) <= 3.0, patterns.size());
    }

    // (iv) KS uniformity of normalized coordinates, per axis.
    for (int a = 0; a < dom.dim; ++a) {
        std::vector<double> u;
        std::size_t total = 0;
        for (const auto& pat : patterns) total += pat.size();
        std::size_t stride = std::max<std::size_t>(1, total / 200000);
        std::size_t k = 0;
        double side = dom.sides[a].d();
        for (const auto& pat : patterns)
            for (const auto& p : pat.pts)
                if (k++ % stride == 0) u.push_back(p.cd[a] / side);
        auto [stat, p] = ks_uniform(std::move(u));
        rep.add_p(a == 0 ? "coord_ks_x" : "coord_ks_y", stat, p, a_bonf, k / stride);
    }
    return rep;
}

TestReport independence_suite(
    const std::vector<std::pair<PointPattern, PointPattern>>& pairs,
    double alpha, std::uint64_t seed) {
    if (pairs.size() < 100) throw InsufficientSamples("independence_suite needs >= 100 pairs");
    TestReport rep;
    rep.suite = "independence";
    rep.config = "n=" + std::to_string(pairs.size());
    const double a_bonf = alpha / 3;

    std::size_t n = pairs.size();
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<double>(pairs[i].first.size());
        b[i] = static_cast<double>(pairs[i].second.size());
    }

    double rho = pearson(a, b);
    double bound = 3.0 / std::sqrt(static_cast<double>(n));
    rep.add("count_correlation", rho, 2 * normal_sf(std::fabs(rho) * std::sqrt((double)n)),
            bound, std::fabs(rho) <= bound, n, seed);

    // Contingency chi-squared on tertile-binned counts.
    {
        auto tertiles = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return std::pair<double, double>{v[v.size() / 3], v[(2 * v.size()) / 3]};
        };
        auto [a1, a2] = tertiles(a);
        auto [b1, b2] = tertiles(b);
        auto bin = [](double x, double t1, double t2) { return x <= t1 ? 0 : (x <= t2 ? 1 : 2); };
        double table[3][3] = {};
        for (std::size_t i = 0; i < n; ++i) table[bin(a[i], a1, a2)][bin(b[i], b1, b2)] += 1;
        double rowm[3] = {}, colm[3] = {};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                rowm[i] += table[i][j];
                colm[j] += table[i][j];
            }
        double stat = 0;
        int cells = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double e = rowm[i] * colm[j] / n;
                if (e < 1) continue;
                stat += (table[i][j] - e) * (table[i][j] - e) / e;
                ++cells;
            }
        double dof = std::max(1, cells - 5);  // (r-1)(c-1) = 4 when all 9 cells used
        rep.add_p("contingency_chi2", stat, chi2_sf(stat, dof), a_bonf, n, seed);
    }

    rep.add_p("permutation_test", std::fabs(rho),
              permutation_corr_p(a, b, 200, seed), a_bonf, n, seed);
    return rep;
}

TestReport equivariance_suite(const std::function<PointPattern(const PointPattern&)>& map,
                              const std::vector<PointPattern>& patterns,
                              const std::vector<Isometry>& family, double tol) {
    TestReport rep;
    rep.suite = "equivariance";
    rep.config = "trials=" + std::to_string(patterns.size()) + " tol=" + std::to_string(tol);
    double maxerr = 0;
    std::size_t skipped = 0, onesided = 0, tested = 0;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const Isometry& g = family[i % family.size()];
        PointPattern lhs, rhs;
        int got = 0;
        try {
            lhs = map(patterns[i].apply(g));
            got |= 1;
        } catch (const NoSpecialGlobes&) {
        }
        try {
            rhs = map(patterns[i]).apply(g);
            got |= 2;
        } catch (const NoSpecialGlobes&) {
        }
        if (got == 0) {
            ++skipped;  // both sides reject: consistent, not a violation
            continue;
        }
        if (got != 3) {
            ++onesided;  // rejection must itself be equivariant
            continue;
        }
        maxerr = std::max(maxerr, PointPattern::max_matched_error(lhs, rhs));
        ++tested;
    }
    rep.add("max_deviation", maxerr, maxerr, tol, maxerr <= tol && onesided == 0, tested);
    rep.add("rejections", static_cast<double>(skipped), 0, 0, true, patterns.size());
    rep.add("one_sided_rejections", static_cast<double>(onesided), 0, 0, onesided == 0,
            patterns.size());
    return rep;
}

TestReport roundtrip_suite(const std::vector<PointPattern>& patterns,
                           const SelectionParams& params, double r, double s,
                           FrameMode mode) {
    TestReport rep;
    rep.suite = "roundtrip";
    rep.config = "n=" + std::to_string(patterns.size()) + " r=" + std::to_string(r) +
                 " s=" + std::to_string(s);
    std::size_t rejected = 0, degenerate = 0, bad = 0, ok = 0;
    double maxpsi = 0, maxphi = 0;
    for (const auto& pat : patterns) {
        try {
            IsoOutput out = psi(pat, r, s, params, mode);
            PointPattern back = psi_inv(out, params);
            double e1 = PointPattern::max_matched_error(back, pat);
            maxpsi = std::max(maxpsi, e1);

            PointPattern nu = phi(pat, r, s, params, mode);
            PointPattern back2 = phi_inv(nu, r, s, params, mode);
            double e2 = PointPattern::max_matched_error(back2, pat);
            maxphi = std::max(maxphi, e2);

            if (e1 <= kRoundTripTol && e2 <= kRoundTripTol)
                ++ok;
            else
                ++bad;
        } catch (const NoSpecialGlobes&) {
            ++rejected;
        } catch (const DegenerateConfiguration&) {
            ++degenerate;
        } catch (const ThinComponent&) {
            ++degenerate;
        }
    }
    rep.add("psi_roundtrip_maxerr", maxpsi, maxpsi, kRoundTripTol, maxpsi <= kRoundTripTol, ok);
    rep.add("phi_roundtrip_maxerr", maxphi, maxphi, kRoundTripTol, maxphi <= kRoundTripTol, ok);
    rep.add("failures", static_cast<double>(bad), 0, 0, bad == 0, patterns.size());
    rep.add("rejected_or_degenerate", static_cast<double>(rejected + degenerate), 0, 0, true,
            patterns.size());
    return rep;
}

double coding_window_estimate(const PointPattern& mu, const SelectionParams& params,
                              double r, double s, const std::vector<double>& radii,
                              int resamples, Rng& rng, FrameMode mode) {
    if (mu.dom.torus) throw WindowExhausted("coding-window estimation needs a box domain");
    const Domain& dom = mu.dom;
    Pt c = box_center(dom);

    PointPattern base = phi(mu, r, s, params, mode);
    PointPattern base1 = base.filter([&](const Pt& p) {
        return dist_cmp(p, c, dom, Real(1.0)) <= 0;
    });

    for (double radius : radii) {
        Real rad(radius);
        PointPattern inside = mu.filter([&](const Pt& p) {
            return dist_cmp(p, c, dom, rad) <= 0;
        });
        bool all_agree = true;
        for (int t = 0; t < resamples && all_agree; ++t) {
            Rng sub = rng.fork("coding-window", static_cast<std::uint64_t>(t) * 1000003 +
                                                    static_cast<std::uint64_t>(radius));
            PointPattern fresh = sample_poisson(dom, r, sub, mu.coordbits);
            PointPattern outside = fresh.filter([&](const Pt& p) {
                return dist_cmp(p, c, dom, rad) > 0;
            });
            PointPattern spliced = PointPattern::pattern_sum(inside, outside);
            try {
                PointPattern nu = phi(spliced, r, s, params, mode);
                PointPattern nu1 = nu.filter([&](const Pt& p) {
                    return dist_cmp(p, c, dom, Real(1.0)) <= 0;
                });
                if (PointPattern::max_matched_error(nu1, base1) > 1e-9) all_agree = false;
            } catch (const NoSpecialGlobes&) {
                all_agree = false;
            } catch (const DegenerateConfiguration&) {
                all_agree = false;
            }
        }
        if (all_agree) return radius;
    }
    throw WindowExhausted("no tested radius confirmed the coding window");
}

Prop24Result prop24_bound(double r, double s, long M) {
    if (!(s > r) || r <= 0 || M < 1)
        throw DegenerateConfiguration("bound requires 0 < r < s and M >= 1");
    Prop24Result out;
    out.ell = static_cast<long>(std::floor(M * r / (s - r))) + 1;
    const mpfr_prec_t p = 256;
    auto lhs_at = [&](long l) {
        return exp_p(Real(-2.0 * (M + l) * r), p);
    };
    auto rhs_at = [&](long l) { return exp_p(Real(-2.0 * l * s), p); };
    // Guard against floating slop at an integer boundary of Mr/(s-r).
    while (!(lhs_at(out.ell) > rhs_at(out.ell))) ++out.ell;
    while (out.ell > 1 && lhs_at(out.ell - 1) > rhs_at(out.ell - 1)) --out.ell;
    out.lhs = lhs_at(out.ell).d();
    out.rhs = rhs_at(out.ell).d();
    return out;
}

}  // namespace ppiso
