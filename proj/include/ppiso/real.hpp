// SPDX-License-Identifier: Apache-2.0
//
// Thin RAII wrapper over MPFR.  Coordinates are dyadic rationals held at
// kCoordPrec bits so that the additive operations the pipeline performs on
// them (translation, negation, halving, torus wrap) are *exact*; transcendental
// steps (CDF inversions) round at the requested working precision.

#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "ppiso/errors.hpp"

namespace ppiso {

// Working precision for CDF / partition-table arithmetic.
inline constexpr mpfr_prec_t kWorkPrec = 192;
// Storage precision for coordinates: large enough that sums and differences of
// domain-sized dyadics with kDefaultCoordBits fractional bits stay exact.
inline constexpr mpfr_prec_t kCoordPrec = 320;
// Default number of fractional bits of freshly sampled coordinates.
inline constexpr int kDefaultCoordBits = 128;

class Real {
public:
    Real() { mpfr_init2(v_, kWorkPrec); mpfr_set_zero(v_, 1); }
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double d, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, d, MPFR_RNDN); }
    explicit Real(double d) : Real(d, kCoordPrec) {}
    Real(long n, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, n, MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    double d() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long lround() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }

    int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
    int cmp(double x) const { return mpfr_cmp_d(v_, x); }
    bool operator<(const Real& o) const { return cmp(o) < 0; }
    bool operator<=(const Real& o) const { return cmp(o) <= 0; }
    bool operator>(const Real& o) const { return cmp(o) > 0; }
    bool operator>=(const Real& o) const { return cmp(o) >= 0; }
    bool operator==(const Real& o) const { return cmp(o) == 0; }
    bool operator!=(const Real& o) const { return cmp(o) != 0; }

    static mpfr_prec_t joint(const Real& a, const Real& b) {
        return a.prec() > b.prec() ? a.prec() : b.prec();
    }

    Real operator+(const Real& o) const { Real r(joint(*this, o)); mpfr_add(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator-(const Real& o) const { Real r(joint(*this, o)); mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator*(const Real& o) const { Real r(joint(*this, o)); mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator/(const Real& o) const { Real r(joint(*this, o)); mpfr_div(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator-() const { Real r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }

    Real abs() const { Real r(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    // Exact halving / doubling (power-of-two scaling never rounds).
    Real half() const { Real r(prec()); mpfr_div_2si(r.v_, v_, 1, MPFR_RNDN); return r; }
    Real ldexp(long e) const { Real r(prec()); mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN); return r; }

    // Truncate to `bits` fractional binary digits (toward -inf), exact.
    Real truncate_bits(int bits) const {
        Real r(prec());
        mpfr_mul_2si(r.v_, v_, bits, MPFR_RNDN);
        mpfr_floor(r.v_, r.v_);
        mpfr_div_2si(r.v_, r.v_, bits, MPFR_RNDN);
        return r;
    }

    std::string str(int digits = 25) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", digits, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

private:
    mpfr_t v_;
};

// Full-precision (exact) product and square, for exact squared distances.
inline Real mul_full(const Real& a, const Real& b) {
    Real r(a.prec() + b.prec());
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
inline Real sqr_full(const Real& a) { return mul_full(a, a); }

inline Real add_p(const Real& a, const Real& b, mpfr_prec_t p) { Real r(p); mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real sub_p(const Real& a, const Real& b, mpfr_prec_t p) { Real r(p); mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real mul_p(const Real& a, const Real& b, mpfr_prec_t p) { Real r(p); mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real div_p(const Real& a, const Real& b, mpfr_prec_t p) { Real r(p); mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }

inline Real sqrt_p(const Real& a, mpfr_prec_t p) { Real r(p); mpfr_sqrt(r.get(), a.get(), MPFR_RNDN); return r; }
inline Real exp_p(const Real& a, mpfr_prec_t p) { Real r(p); mpfr_exp(r.get(), a.get(), MPFR_RNDN); return r; }
inline Real log_p(const Real& a, mpfr_prec_t p) { Real r(p); mpfr_log(r.get(), a.get(), MPFR_RNDN); return r; }
inline Real pow_p(const Real& a, const Real& e, mpfr_prec_t p) { Real r(p); mpfr_pow(r.get(), a.get(), e.get(), MPFR_RNDN); return r; }
inline Real atan2_p(const Real& y, const Real& x, mpfr_prec_t p) { Real r(p); mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN); return r; }
inline Real cos_p(const Real& a, mpfr_prec_t p) { Real r(p); mpfr_cos(r.get(), a.get(), MPFR_RNDN); return r; }
inline Real sin_p(const Real& a, mpfr_prec_t p) { Real r(p); mpfr_sin(r.get(), a.get(), MPFR_RNDN); return r; }
inline Real pi_p(mpfr_prec_t p) { Real r(p); mpfr_const_pi(r.get(), MPFR_RNDN); return r; }

// x^(1/k) for positive x, k >= 1.
inline Real root_p(const Real& a, unsigned long k, mpfr_prec_t p) {
    Real r(p);
#if MPFR_VERSION_MAJOR >= 4
    mpfr_rootn_ui(r.get(), a.get(), k, MPFR_RNDN);
#else
    mpfr_root(r.get(), a.get(), k, MPFR_RNDN);
#endif
    return r;
}

}  // namespace ppiso
