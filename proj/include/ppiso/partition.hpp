// SPDX-License-Identifier: Apache-2.0
//
// Discrete distributions as ordered partitions of [0,1).  A table holds
// breakpoints p[m] = P(X < m); locating a payload value x in [p[m], p[m+1])
// yields the count m and the rescaled residual f = (x - p[m]) / (p[m+1]-p[m]),
// which carries all remaining randomness.  The split is injective and has an
// exact inverse merge(m, f) = p[m] + f * gap.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ppiso/errors.hpp"
#include "ppiso/real.hpp"

namespace ppiso {

class DiscreteCdf {
public:
    // Poisson table: breakpoints until the right tail drops below
    // 2^-(prec - 8); values landing past the last breakpoint raise
    // TailOverflow.
    static DiscreteCdf poisson(const Real& mean, mpfr_prec_t prec = kWorkPrec);
    // Binomial(n, prob) table (full support, last breakpoint is 1 up to
    // rounding; the final interval absorbs the rounding slack).
    static DiscreteCdf binomial(long n, const Real& prob, mpfr_prec_t prec = kWorkPrec);

    // Shared, memoized Poisson tables (the pipeline reuses a handful of means
    // many times).
    static std::shared_ptr<const DiscreteCdf> poisson_cached(const Real& mean,
                                                             mpfr_prec_t prec = kWorkPrec);

    size_t max_count() const { return p_.size() - 1; }
    const Real& breakpoint(size_t m) const { return p_[m]; }

    // Largest m with p[m] <= x.  x must be in [0, p[max]).
    size_t locate(const Real& x) const;

    struct Split {
        size_t count;
        Real residual;  // in [0,1)
    };
    Split split(const Real& x, mpfr_prec_t residual_prec) const;
    Real merge(size_t m, const Real& residual, mpfr_prec_t prec) const;

private:
    std::vector<Real> p_;  // p_[m] = P(X < m), m = 0 .. K; support 0..K-1
    bool closed_ = false;  // true if p_[K] is intended to be exactly 1
};

}  // namespace ppiso
