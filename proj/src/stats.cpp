// SPDX-License-Identifier: Apache-2.0

#include "ppiso/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ppiso/rng.hpp"

namespace ppiso {

namespace {

// Regularized incomplete gamma functions, series + continued fraction
// (double precision is ample for p-values).
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1;
    if (x == 0) return 1;
    if (x < a + 1) return 1 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

}  // namespace

double chi2_sf(double x, double dof) { return gamma_q(dof / 2, x / 2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double ks_sf(double d, std::size_t n) {
    if (d <= 0) return 1;
    double sn = std::sqrt(static_cast<double>(n));
    double lam = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0;
    for (int j = 1; j <= 100; ++j) {
        double term = 2 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lam * lam);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double poisson_pmf(double mean, unsigned k) {
    return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

std::pair<double, double> chi2_gof(const std::vector<double>& observed,
                                   const std::vector<double>& expected,
                                   int extra_constraints) {
    double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i)
        stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    double dof = static_cast<double>(observed.size()) - 1 - extra_constraints;
    return {stat, chi2_sf(stat, std::max(dof, 1.0))};
}

std::pair<double, double> ks_uniform(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    std::size_t n = samples.size();
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
        d = std::max({d, samples[i] - lo, hi - samples[i]});
    }
    return {d, ks_sf(d, n)};
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0 || sbb == 0) return 0;
    return sab / std::sqrt(saa * sbb);
}

double permutation_corr_p(const std::vector<double>& a, const std::vector<double>& b,
                          int reps, std::uint64_t seed) {
    double obs = std::fabs(pearson(a, b));
    Rng rng(seed);
    std::vector<double> bp = b;
    int extreme = 0;
    for (int t = 0; t < reps; ++t) {
        for (std::size_t i = bp.size(); i > 1; --i)
            std::swap(bp[i - 1], bp[rng.below(i)]);
        if (std::fabs(pearson(a, bp)) >= obs) ++extreme;
    }
    return (extreme + 1.0) / (reps + 1.0);
}

std::string TestReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["config"] = config;
    j["records"] = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json jr;
        jr["name"] = r.name;
        jr["statistic"] = r.statistic;
        jr["p_value"] = r.p_value;
        jr["threshold"] = r.threshold;
        jr["pass"] = r.pass;
        if (r.n) jr["n"] = r.n;
        if (r.seed) jr["seed"] = r.seed;
        j["records"].push_back(jr);
    }
    j["verdict"] = verdict() ? "pass" : "fail";
    return j.dump(2);
}

}  // namespace ppiso
