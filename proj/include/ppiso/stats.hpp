// SPDX-License-Identifier: Apache-2.0
//
// Statistical primitives and the machine-readable test-report plumbing used
// by the verification suites: chi-squared and Kolmogorov-Smirnov tail
// probabilities, normal z-tests, Pearson correlation, a permutation test for
// paired counts, and the TestReport JSON schema.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ppiso {

// Upper-tail probabilities.
double chi2_sf(double x, double dof);       // regularized upper incomplete gamma
double normal_sf(double z);                 // one-sided standard normal
double ks_sf(double d, std::size_t n);      // Kolmogorov statistic tail, n samples

double poisson_pmf(double mean, unsigned k);

// Chi-squared goodness of fit of observed integer counts against expected
// (same length, expected > 0); returns (statistic, p) with dof = len-1-extra.
std::pair<double, double> chi2_gof(const std::vector<double>& observed,
                                   const std::vector<double>& expected, int extra_constraints = 0);

// KS test of samples in [0,1) against the uniform law.
std::pair<double, double> ks_uniform(std::vector<double> samples);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided permutation p-value for the correlation of paired samples.
double permutation_corr_p(const std::vector<double>& a, const std::vector<double>& b,
                          int reps, std::uint64_t seed);

struct TestRecord {
    std::string name;
    double statistic = 0;
    double p_value = 0;   // or residual for exactness checks
    double threshold = 0; // alpha after Bonferroni, or residual budget
    bool pass = false;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

struct TestReport {
    std::string suite;
    std::string config;
    std::vector<TestRecord> records;

    bool verdict() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
    void add(std::string name, double stat, double p, double threshold, bool pass,
             std::size_t n = 0, std::uint64_t seed = 0) {
        records.push_back({std::move(name), stat, p, threshold, pass, n, seed});
    }
    // p-value record judged against alpha (already Bonferroni-adjusted).
    void add_p(std::string name, double stat, double p, double alpha,
               std::size_t n = 0, std::uint64_t seed = 0) {
        records.push_back({std::move(name), stat, p, alpha, p > alpha, n, seed});
    }
    std::string to_json() const;
};

}  // namespace ppiso
