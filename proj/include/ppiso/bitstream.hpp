// SPDX-License-Identifier: Apache-2.0
//
// Finite binary payload streams.  A BitStream is a finite 0/1 sequence whose
// value is sum_i b_i 2^-(i+1) in [0,1); trailing zeros are significant (the
// length is part of the data).  Streams may be *extendable*: bits past the
// stored ones are produced by a counter-mode PRF keyed on the stored bits, so
// the extension is a pure function of the data it extends.  This is the
// finite-precision stand-in for the infinite binary expansions the underlying
// construction assumes; it preserves injectivity (the leading bits are the
// true bits), equivariance (the key depends only on frame-relative data) and
// inversion (the inverse recomputes the same extension).

#pragma once

#include <gmp.h>

#include <cstdint>
#include <vector>

#include "ppiso/errors.hpp"
#include "ppiso/real.hpp"
#include "ppiso/rng.hpp"

namespace ppiso {

class BitStream {
public:
    BitStream() = default;

    static BitStream zeros(size_t nbits) {
        BitStream s;
        s.nbits_ = nbits;
        s.words_.assign((nbits + 63) / 64, 0);
        return s;
    }

    static BitStream from_bits(const std::vector<int>& bits) {
        BitStream s = zeros(bits.size());
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) s.words_[i / 64] |= (1ULL << (63 - i % 64));
        return s;
    }

    static BitStream from_rng(Rng& rng, size_t nbits) {
        BitStream s;
        s.nbits_ = nbits;
        s.words_.resize((nbits + 63) / 64);
        for (auto& w : s.words_) w = rng.word();
        s.mask_tail();
        return s;
    }

    // Leading `nbits` bits of the binary expansion of x in [0,1).
    static BitStream from_real(const Real& x, size_t nbits) {
        BitStream s = zeros(nbits);
        if (x.sign() < 0 || x.cmp(1.0) >= 0) throw OutsideBall("from_real: value not in [0,1)");
        mpz_t t;
        mpz_init(t);
        Real scaled = x.ldexp(static_cast<long>(nbits));
        mpfr_get_z(t, scaled.get(), MPFR_RNDD);
        for (size_t i = 0; i < nbits; ++i)
            if (mpz_tstbit(t, static_cast<mp_bitcnt_t>(nbits - 1 - i)))
                s.words_[i / 64] |= (1ULL << (63 - i % 64));
        mpz_clear(t);
        return s;
    }

    size_t size() const { return nbits_; }
    bool extendable() const { return extendable_; }
    uint64_t key() const { return key_; }
    const std::vector<uint64_t>& words() const { return words_; }

    int bit(size_t i) const {
        if (i < nbits_) return (words_[i / 64] >> (63 - i % 64)) & 1;
        if (!extendable_) throw TailOverflow("bit index past end of non-extendable stream");
        size_t j = i - nbits_;
        uint64_t w = splitmix64(key_ ^ (0xD1B54A32D192ED03ULL * (j / 64 + 1)));
        return (w >> (63 - j % 64)) & 1;
    }

    void make_extendable(uint64_t salt) {
        uint64_t h = fnv1a64(words_.data(), words_.size() * sizeof(uint64_t), 0xCBF29CE484222325ULL ^ salt);
        key_ = splitmix64(h ^ (0x9E3779B97F4A7C15ULL * nbits_));
        extendable_ = true;
    }

    // Value of the stored bits (exact when prec >= nbits_).
    Real value(mpfr_prec_t prec) const {
        Real r(prec == 0 ? mpfr_prec_t(nbits_ > 1 ? nbits_ : 2) : prec);
        mpfr_set_zero(r.get(), 1);
        for (size_t k = words_.size(); k-- > 0;) {
            mpfr_div_2si(r.get(), r.get(), 64, MPFR_RNDN);
            mpfr_add_ui(r.get(), r.get(), 0, MPFR_RNDN);
            // add word as two 32-bit halves (mpfr_add_ui takes unsigned long, 64-bit here)
            mpfr_add_ui(r.get(), r.get(), static_cast<unsigned long>(words_[k] & 0xFFFFFFFFULL), MPFR_RNDN);
            Real hi(prec);
            mpfr_set_ui(hi.get(), static_cast<unsigned long>(words_[k] >> 32), MPFR_RNDN);
            mpfr_mul_2si(hi.get(), hi.get(), 32, MPFR_RNDN);
            mpfr_add(r.get(), r.get(), hi.get(), MPFR_RNDN);
        }
        mpfr_div_2si(r.get(), r.get(), 64, MPFR_RNDN);
        return r;
    }

    // Value of the first `total` bits, drawing on the PRF extension as needed.
    Real value_extended(size_t total, mpfr_prec_t prec) const {
        if (total <= nbits_) return take(total).value(prec);
        BitStream full = take(total);
        return full.value(prec);
    }

    // First n bits as a plain stored stream (extension materialized if used).
    BitStream take(size_t n) const {
        BitStream s = zeros(n);
        size_t stored = n < nbits_ ? n : nbits_;
        for (size_t k = 0; k < (stored + 63) / 64; ++k) s.words_[k] = words_[k];
        s.mask_tail_at(stored);
        for (size_t i = stored; i < n; ++i)
            if (bit(i)) s.words_[i / 64] |= (1ULL << (63 - i % 64));
        return s;
    }

    // Interleave: output bit j comes from parts[j % n] at index j / n.  Part
    // lengths must form a valid staircase (len_i in {q, q+1}, long parts first)
    // so the interleave is the exact inverse of deinterleave.
    static BitStream interleave(const std::vector<BitStream>& parts) {
        size_t n = parts.size(), total = 0;
        for (const auto& p : parts) total += p.size();
        BitStream s = zeros(total);
        for (size_t j = 0; j < total; ++j) {
            size_t i = j % n, k = j / n;
            if (k >= parts[i].size()) throw NotBracketed("interleave: part lengths are not a staircase");
            if (parts[i].bit(k)) s.words_[j / 64] |= (1ULL << (63 - j % 64));
        }
        return s;
    }

    // Split the stored bits round-robin into n streams (Eq.-style b_n).
    std::vector<BitStream> deinterleave(size_t n) const {
        std::vector<BitStream> parts;
        parts.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            size_t len = nbits_ > i ? (nbits_ - i + n - 1) / n : 0;
            parts.push_back(zeros(len));
        }
        for (size_t j = 0; j < nbits_; ++j)
            if (bit(j)) parts[j % n].words_[(j / n) / 64] |= (1ULL << (63 - (j / n) % 64));
        return parts;
    }

    // Round-robin split with a fixed per-part length, drawing on the extension
    // when the stored bits run out.  Each part inherits extendability keyed on
    // its own bits (so downstream consumers can extend further).
    std::vector<BitStream> deinterleave_extended(size_t n, size_t len_each, uint64_t salt) const {
        std::vector<BitStream> parts;
        parts.reserve(n);
        for (size_t i = 0; i < n; ++i) parts.push_back(zeros(len_each));
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < len_each; ++k)
                if (bit(k * n + i)) parts[i].words_[k / 64] |= (1ULL << (63 - k % 64));
            parts[i].make_extendable(salt + i);
        }
        return parts;
    }

    bool operator==(const BitStream& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }
    bool operator!=(const BitStream& o) const { return !(*this == o); }

    // Number of leading bits on which the two streams agree.
    size_t common_prefix(const BitStream& o) const {
        size_t n = nbits_ < o.nbits_ ? nbits_ : o.nbits_;
        for (size_t k = 0; k * 64 < n; ++k) {
            uint64_t x = words_[k] ^ o.words_[k];
            if (x) {
                size_t p = k * 64 + static_cast<size_t>(__builtin_clzll(x));
                return p < n ? p : n;
            }
        }
        return n;
    }

private:
    void mask_tail() { mask_tail_at(nbits_); }
    void mask_tail_at(size_t n) {
        if (n % 64 && !words_.empty())
            words_[n / 64] &= ~uint64_t{0} << (64 - n % 64);
        for (size_t k = (n + 63) / 64; k < words_.size(); ++k) words_[k] = 0;
    }

    std::vector<uint64_t> words_;
    size_t nbits_ = 0;
    bool extendable_ = false;
    uint64_t key_ = 0;
};

}  // namespace ppiso
