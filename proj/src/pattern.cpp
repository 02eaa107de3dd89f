// SPDX-License-Identifier: Apache-2.0

#include "ppiso/pattern.hpp"

#include <gmp.h>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ppiso {

std::string dyadic_to_decimal(const Real& x, int bits) {
    // x = n / 2^bits exactly; print n * 5^bits with a decimal point `bits`
    // digits from the right.  This is the exact decimal expansion.
    mpz_t n, five;
    mpz_inits(n, five, nullptr);
    Real scaled = x.ldexp(bits);
    mpfr_get_z(n, scaled.get(), MPFR_RNDN);  // exact for in-contract values
    bool neg = mpz_sgn(n) < 0;
    mpz_abs(n, n);
    mpz_ui_pow_ui(five, 5, static_cast<unsigned long>(bits));
    mpz_mul(n, n, five);
    char* raw = mpz_get_str(nullptr, 10, n);
    std::string digits(raw);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(raw, digits.size() + 1);
    mpz_clears(n, five, nullptr);

    if (static_cast<int>(digits.size()) <= bits)
        digits.insert(0, bits + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - bits) + "." + digits.substr(digits.size() - bits);
    // Trim trailing zeros (value-preserving), keep at least one fraction digit.
    size_t last = out.find_last_not_of('0');
    if (out[last] == '.') ++last;
    out.erase(last + 1);
    return neg ? "-" + out : out;
}

Real decimal_to_dyadic(const std::string& s, int bits) {
    std::string t = s;
    bool neg = !t.empty() && t[0] == '-';
    if (neg || (!t.empty() && t[0] == '+')) t.erase(0, 1);
    size_t dot = t.find('.');
    std::string digits = t;
    int frac = 0;
    if (dot != std::string::npos) {
        frac = static_cast<int>(t.size() - dot - 1);
        digits = t.substr(0, dot) + t.substr(dot + 1);
    }
    if (digits.empty()) digits = "0";

    mpz_t D, q, r, ten;
    mpz_inits(D, q, r, ten, nullptr);
    mpz_set_str(D, digits.c_str(), 10);
    // D / 10^frac = n / 2^bits  =>  n = D * 2^bits / 10^frac, rounded to nearest.
    mpz_mul_2exp(D, D, static_cast<mp_bitcnt_t>(bits));
    mpz_ui_pow_ui(ten, 10, static_cast<unsigned long>(frac));
    mpz_fdiv_qr(q, r, D, ten);
    mpz_mul_2exp(r, r, 1);
    if (mpz_cmp(r, ten) >= 0) mpz_add_ui(q, q, 1);

    Real out(kCoordPrec);
    mpfr_set_z(out.get(), q, MPFR_RNDN);
    mpfr_div_2si(out.get(), out.get(), bits, MPFR_RNDN);
    if (neg) mpfr_neg(out.get(), out.get(), MPFR_RNDN);
    mpz_clears(D, q, r, ten, nullptr);
    return out;
}

std::string PointPattern::to_csv() const {
    std::ostringstream os;
    os << "# dim=" << dom.dim << " domain=" << (dom.torus ? "torus" : "box") << " sides=";
    for (int a = 0; a < dom.dim; ++a)
        os << (a ? "," : "") << dyadic_to_decimal(dom.sides[a], coordbits);
    os << " coordbits=" << coordbits << "\n";
    for (const auto& p : pts) {
        os << dyadic_to_decimal(p.c[0], coordbits);
        if (dom.dim == 2) os << "," << dyadic_to_decimal(p.c[1], coordbits);
        os << "\n";
    }
    return os.str();
}

PointPattern PointPattern::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# dim=", 0) != 0)
        throw Error("csv: missing header");

    auto field = [&line](const std::string& key) {
        size_t p = line.find(key + "=");
        if (p == std::string::npos) throw Error("csv: header missing " + key);
        size_t start = p + key.size() + 1;
        size_t end = line.find(' ', start);
        return line.substr(start, end == std::string::npos ? end : end - start);
    };

    int dim = std::stoi(field("dim"));
    bool torus = field("domain") == "torus";
    int bits = std::stoi(field("coordbits"));
    std::string sides = field("sides");
    size_t comma = sides.find(',');

    Domain dom;
    dom.dim = dim;
    dom.torus = torus;
    dom.sides[0] = decimal_to_dyadic(comma == std::string::npos ? sides : sides.substr(0, comma), bits);
    if (dim == 2) {
        if (comma == std::string::npos) throw Error("csv: dim=2 needs two sides");
        dom.sides[1] = decimal_to_dyadic(sides.substr(comma + 1), bits);
    }

    PointPattern pat(dom, bits);
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t c = line.find(',');
        Pt p;
        p.c[0] = decimal_to_dyadic(c == std::string::npos ? line : line.substr(0, c), bits);
        if (dim == 2) {
            if (c == std::string::npos) throw Error("csv: dim=2 needs two columns");
            p.c[1] = decimal_to_dyadic(line.substr(c + 1), bits);
        }
        p.sync();
        pat.pts.push_back(std::move(p));
    }
    return pat;
}

double PointPattern::max_matched_error(PointPattern a, PointPattern b) {
    if (a.size() != b.size()) return 1e300;
    a.sort_canonical();
    b.sort_canonical();
    double worst = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        for (int ax = 0; ax < a.dom.dim; ++ax) {
            double e = std::fabs((a.pts[i].c[ax] - b.pts[i].c[ax]).d());
            if (a.dom.torus) {
                double s = a.dom.sides[ax].d();
                e = std::min(e, std::fabs(s - e));
            }
            worst = std::max(worst, e);
        }
    }
    return worst;
}

}  // namespace ppiso
