// SPDX-License-Identifier: Apache-2.0

#include "ppiso/ballmap.hpp"

#include "ppiso/errors.hpp"

namespace ppiso {

namespace {

// Map a value in [0,1) (half-open) ensuring representability for streams.
Real clamp_unit(Real v) {
    if (v.sign() < 0) mpfr_set_zero(v.get(), 1);
    if (v.cmp(1.0) >= 0) {
        mpfr_set_ui(v.get(), 1, MPFR_RNDN);
        mpfr_nextbelow(v.get());
    }
    return v;
}

}  // namespace

BitStream ball_to_interval(const std::array<Real, 3>& z, int dim, int bits, mpfr_prec_t prec) {
    if (dim == 1) {
        if (z[0].cmp(1.0) > 0 || z[0].cmp(-1.0) < 0) throw OutsideBall();
        Real u = (z[0] + Real(1.0)).half();  // exact on dyadics
        return BitStream::from_real(clamp_unit(u), static_cast<size_t>(bits));
    }

    // Exact norm check via full-precision squares.
    Real nsq = sqr_full(z[0]) + sqr_full(z[1]);
    if (dim == 3) nsq += sqr_full(z[2]);
    if (nsq.cmp(1.0) > 0) throw OutsideBall();

    std::vector<BitStream> parts;
    if (dim == 2) {
        Real u0 = nsq;  // F0(R) = R^2
        Real theta = atan2_p(z[1], z[0], prec);
        Real twopi = pi_p(prec).ldexp(1);
        Real u1 = div_p(theta, twopi, prec);
        if (u1.sign() < 0) u1 += Real(1.0, prec);
        parts.push_back(BitStream::from_real(clamp_unit(u0), static_cast<size_t>(bits)));
        parts.push_back(BitStream::from_real(clamp_unit(u1), static_cast<size_t>(bits)));
    } else {
        Real r = sqrt_p(nsq, prec);
        Real u0 = mul_p(nsq, r, prec);  // R^3
        Real rho = sqrt_p(sqr_full(z[0]) + sqr_full(z[1]), prec);
        Real theta1 = atan2_p(rho, z[2], prec);  // polar angle in [0, pi]
        Real u1 = sub_p(Real(1.0, prec), cos_p(theta1, prec), prec).half();
        Real theta2 = atan2_p(z[1], z[0], prec);
        Real twopi = pi_p(prec).ldexp(1);
        Real u2 = div_p(theta2, twopi, prec);
        if (u2.sign() < 0) u2 += Real(1.0, prec);
        parts.push_back(BitStream::from_real(clamp_unit(u0), static_cast<size_t>(bits)));
        parts.push_back(BitStream::from_real(clamp_unit(u1), static_cast<size_t>(bits)));
        parts.push_back(BitStream::from_real(clamp_unit(u2), static_cast<size_t>(bits)));
    }
    return BitStream::interleave(parts);
}

std::array<Real, 3> interval_to_ball(const BitStream& u, int dim, mpfr_prec_t prec) {
    std::array<Real, 3> z{Real(0.0), Real(0.0), Real(0.0)};
    if (dim == 1) {
        Real v = u.value(prec);
        z[0] = v.ldexp(1) - Real(1.0);  // exact inverse of (z+1)/2
        return z;
    }
    auto parts = u.deinterleave(static_cast<size_t>(dim));
    Real twopi = pi_p(prec).ldexp(1);
    if (dim == 2) {
        Real u0 = parts[0].value(prec), u1 = parts[1].value(prec);
        Real r = sqrt_p(u0, prec);
        Real theta = mul_p(u1, twopi, prec);
        z[0] = mul_p(r, cos_p(theta, prec), prec);
        z[1] = mul_p(r, sin_p(theta, prec), prec);
    } else {
        Real u0 = parts[0].value(prec), u1 = parts[1].value(prec), u2 = parts[2].value(prec);
        Real r = root_p(u0, 3, prec);
        // cos(theta1) = 1 - 2 u1
        Real c = sub_p(Real(1.0, prec), u1.ldexp(1), prec);
        Real ssq = sub_p(Real(1.0, prec), mul_p(c, c, prec), prec);
        if (ssq.sign() < 0) mpfr_set_zero(ssq.get(), 1);
        Real s = sqrt_p(ssq, prec);
        Real theta2 = mul_p(u2, twopi, prec);
        z[0] = mul_p(mul_p(r, s, prec), cos_p(theta2, prec), prec);
        z[1] = mul_p(mul_p(r, s, prec), sin_p(theta2, prec), prec);
        z[2] = mul_p(r, c, prec);
    }
    return z;
}

}  // namespace ppiso
