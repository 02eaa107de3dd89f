// SPDX-License-Identifier: Apache-2.0

#include "ppiso/partition.hpp"

#include <map>
#include <string>

namespace ppiso {

DiscreteCdf DiscreteCdf::poisson(const Real& mean, mpfr_prec_t prec) {
    if (mean.sign() <= 0) throw Error("poisson table: mean must be positive");
    DiscreteCdf t;
    // Tail threshold 2^-(prec-8).
    Real eps(prec);
    mpfr_set_ui_2exp(eps.get(), 1, -(prec - 8), MPFR_RNDN);
    Real one(1.0, prec);

    Real pmf = exp_p(-Real(mean), prec);  // P(X = 0)
    Real cum(0.0, prec);
    t.p_.push_back(cum);
    unsigned long m = 0;
    // Hard cap keeps runaway means from exhausting memory; desk-scale means
    // stay far below it.
    const unsigned long cap = 4u << 20;
    while (true) {
        cum = add_p(cum, pmf, prec);
        t.p_.push_back(cum);
        ++m;
        if (one - cum < eps) break;
        if (m > cap) throw Error("poisson table: mean too large");
        pmf = div_p(mul_p(pmf, mean, prec), Real(static_cast<long>(m), prec), prec);
    }
    return t;
}

DiscreteCdf DiscreteCdf::binomial(long n, const Real& prob, mpfr_prec_t prec) {
    DiscreteCdf t;
    t.closed_ = true;
    Real q = Real(1.0, prec) - prob;
    // pmf(0) = q^n, then ratio pmf(k+1)/pmf(k) = (n-k)/(k+1) * p/q.
    Real pmf = pow_p(q, Real(static_cast<long>(n), prec), prec);
    Real cum(0.0, prec);
    t.p_.push_back(cum);
    Real ratio_pq = div_p(prob, q, prec);
    for (long k = 0; k <= n; ++k) {
        cum = add_p(cum, pmf, prec);
        t.p_.push_back(cum);
        if (k < n) {
            Real f = div_p(Real(n - k, prec), Real(k + 1, prec), prec);
            pmf = mul_p(mul_p(pmf, f, prec), ratio_pq, prec);
        }
    }
    // Snap the final breakpoint to exactly 1 so the top interval is well formed.
    t.p_.back() = Real(1.0, prec);
    return t;
}

std::shared_ptr<const DiscreteCdf> DiscreteCdf::poisson_cached(const Real& mean, mpfr_prec_t prec) {
    static std::map<std::string, std::shared_ptr<const DiscreteCdf>> cache;
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra@%ld", mean.get(), static_cast<long>(prec));
    std::string key(s);
    mpfr_free_str(s);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ptr = std::make_shared<const DiscreteCdf>(poisson(mean, prec));
    if (cache.size() > 64) cache.clear();
    cache[key] = ptr;
    return ptr;
}

size_t DiscreteCdf::locate(const Real& x) const {
    if (x.sign() < 0) throw TailOverflow("discrete locate: negative value");
    if (x >= p_.back()) {
        if (closed_) return p_.size() - 2;  // top interval absorbs rounding slack
        throw TailOverflow("discrete locate: value past table tail");
    }
    size_t lo = 0, hi = p_.size() - 1;  // invariant: p_[lo] <= x < p_[hi]
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (p_[mid] <= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

DiscreteCdf::Split DiscreteCdf::split(const Real& x, mpfr_prec_t residual_prec) const {
    size_t m = locate(x);
    Real gap = p_[m + 1] - p_[m];
    if (gap.sign() <= 0) throw TailOverflow("discrete split: degenerate interval");
    Real f = div_p(sub_p(x, p_[m], residual_prec), gap, residual_prec);
    if (f.sign() < 0) mpfr_set_zero(f.get(), 1);
    if (f.cmp(1.0) >= 0) {
        mpfr_set_ui_2exp(f.get(), 1, 0, MPFR_RNDN);
        mpfr_nextbelow(f.get());
    }
    return {m, f};
}

Real DiscreteCdf::merge(size_t m, const Real& residual, mpfr_prec_t prec) const {
    if (m + 1 >= p_.size()) throw TailOverflow("discrete merge: count past table");
    Real gap = p_[m + 1] - p_[m];
    return add_p(p_[m], mul_p(residual, gap, prec), prec);
}

}  // namespace ppiso
