// SPDX-License-Identifier: Apache-2.0
//
// Isometries of the observation domain.  On a torus only translations composed
// with hyperoctahedral maps (signed coordinate permutations) act; on a box any
// orthogonal part is accepted for analysis purposes.  Hyperoctahedral parts
// with dyadic translations act *exactly* on dyadic coordinates.

#pragma once

#include <array>

#include "ppiso/domain.hpp"
#include "ppiso/errors.hpp"
#include "ppiso/real.hpp"

namespace ppiso {

struct Isometry {
    int dim = 1;
    std::array<std::array<Real, 2>, 2> Q{{{Real(1.0), Real(0.0)}, {Real(0.0), Real(1.0)}}};
    std::array<Real, 2> t{Real(0.0), Real(0.0)};

    static Isometry identity(int dim) {
        Isometry g;
        g.dim = dim;
        return g;
    }
    static Isometry translation(int dim, Real tx, Real ty = Real(0.0)) {
        Isometry g = identity(dim);
        g.t = {std::move(tx), std::move(ty)};
        return g;
    }
    // code indexes the hyperoctahedral group: d=1 -> 2 elements (+-1);
    // d=2 -> 8 elements (swap bit | sign bits).
    static Isometry hyperoctahedral(int dim, int code) {
        Isometry g = identity(dim);
        if (dim == 1) {
            g.Q[0][0] = Real(code & 1 ? -1.0 : 1.0);
        } else {
            bool swap = code & 4;
            double s0 = (code & 1) ? -1.0 : 1.0;
            double s1 = (code & 2) ? -1.0 : 1.0;
            g.Q = {{{Real(swap ? 0.0 : s0), Real(swap ? s0 : 0.0)},
                    {Real(swap ? s1 : 0.0), Real(swap ? 0.0 : s1)}}};
        }
        return g;
    }
    static Isometry rotation2(const Real& angle, mpfr_prec_t p = kWorkPrec) {
        Isometry g = identity(2);
        Real c = cos_p(angle, p), s = sin_p(angle, p);
        g.Q = {{{c, -s}, {s, c}}};
        return g;
    }

    // True if Q is a signed permutation matrix (entries in {-1,0,1}).
    bool hyperoctahedral_part() const {
        auto ok = [](const Real& v) {
            return v.is_zero() || v == Real(1.0) || v == Real(-1.0);
        };
        if (dim == 1) return ok(Q[0][0]) && !Q[0][0].is_zero();
        int nz = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (!ok(Q[i][j])) return false;
                if (!Q[i][j].is_zero()) ++nz;
            }
        return nz == 2 && (Q[0][0].is_zero() == Q[1][1].is_zero()) &&
               (Q[0][1].is_zero() == Q[1][0].is_zero()) &&
               (Q[0][0].is_zero() != Q[0][1].is_zero());
    }
    bool swaps_axes() const {
        return dim == 2 && Q[0][0].is_zero() && !Q[0][1].is_zero();
    }

    std::array<Real, 2> apply_linear(const std::array<Real, 2>& x) const {
        if (dim == 1) return {Q[0][0] * x[0], Real(0.0)};
        return {Q[0][0] * x[0] + Q[0][1] * x[1], Q[1][0] * x[0] + Q[1][1] * x[1]};
    }

    Pt apply(const Pt& p, const Domain& dom) const {
        if (dom.torus) {
            if (!hyperoctahedral_part())
                throw UnsupportedIsometryOnTorus();
            if (swaps_axes() && dom.sides[0] != dom.sides[1])
                throw UnsupportedIsometryOnTorus("axis swap on anisotropic torus");
        }
        auto y = apply_linear(p.c);
        Pt out;
        for (int a = 0; a < dom.dim; ++a) {
            Real v = y[a] + t[a];
            out.c[a] = dom.torus ? wrap_coord(std::move(v), dom.sides[a]) : std::move(v);
        }
        out.sync();
        return out;
    }

    Isometry inverse() const {
        Isometry g = identity(dim);
        // Q is orthogonal: inverse of the linear part is the transpose.
        g.Q = {{{Q[0][0], Q[1][0]}, {Q[0][1], Q[1][1]}}};
        auto mt = g.apply_linear(t);
        g.t = {-mt[0], -mt[1]};
        return g;
    }

    Isometry compose(const Isometry& inner) const {  // (*this) o inner
        Isometry g = identity(dim);
        if (dim == 1) {
            g.Q[0][0] = Q[0][0] * inner.Q[0][0];
        } else {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    g.Q[i][j] = Q[i][0] * inner.Q[0][j] + Q[i][1] * inner.Q[1][j];
        }
        auto qt = apply_linear(inner.t);
        g.t = {qt[0] + t[0], qt[1] + t[1]};
        return g;
    }
};

}  // namespace ppiso
