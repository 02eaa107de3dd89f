// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth samplers and the verification suites: Poisson generation from
// counter-mode RNG streams, distributional batteries (counts, void
// probabilities, coordinate uniformity), pairwise-independence tests,
// equivariance and round-trip audits, the empirical coding-window search and
// the analytic no-fixed-window bound.

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ppiso/iso.hpp"
#include "ppiso/pattern.hpp"
#include "ppiso/rng.hpp"
#include "ppiso/selection.hpp"
#include "ppiso/stats.hpp"

namespace ppiso {

// Poisson(r) pattern on the domain: count from a Poisson partition table fed
// by an RNG payload stream, coordinates dyadic at `coordbits`.  Deterministic
// per Rng state.
PointPattern sample_poisson(const Domain& dom, double r, Rng& rng,
                            int coordbits = kDefaultCoordBits);

// Replace the points inside the union of (special) globes by a fresh
// Poisson(r) pattern restricted to that union; everything else untouched.
PointPattern resample_inside_globes(const PointPattern& mu, const GlobeSet& gs,
                                    double r, Rng& rng, bool special_only = false);

// Battery versus Poisson(r): counts chi-squared over a fixed 16-cell unit
// partition, pairwise count-covariance z-tests, void probability of a fixed
// unit ball, and KS uniformity of normalized coordinates.
TestReport poisson_suite(const std::vector<PointPattern>& patterns, double r,
                         const Domain& dom, double alpha = 0.01);

// Pairwise independence of paired patterns: count correlation, contingency
// chi-squared on coarse counts, permutation test.
TestReport independence_suite(
    const std::vector<std::pair<PointPattern, PointPattern>>& pairs,
    double alpha = 0.01, std::uint64_t seed = 1);

// map(g mu) versus g map(mu) for each pattern/isometry pair; realizations
// where both sides reject (no special globes) are skipped and counted.
TestReport equivariance_suite(const std::function<PointPattern(const PointPattern&)>& map,
                              const std::vector<PointPattern>& patterns,
                              const std::vector<Isometry>& family, double tol);

// psi/psi_inv and phi/phi_inv round trips at the given intensities.
TestReport roundtrip_suite(const std::vector<PointPattern>& patterns,
                           const SelectionParams& params, double r, double s,
                           FrameMode mode = FrameMode::kIsometry);

// Smallest radius in `radii` (ascending) such that `resamples` independent
// re-randomizations outside the ball around the box center leave
// phi(mu) restricted to the central unit ball unchanged.  Throws
// WindowExhausted when no radius is confirmed.
double coding_window_estimate(const PointPattern& mu, const SelectionParams& params,
                              double r, double s, const std::vector<double>& radii,
                              int resamples, Rng& rng,
                              FrameMode mode = FrameMode::kIsometry);

// Smallest integer l with exp(-2(M+l)r) > exp(-2ls) (requires s > r), plus
// both sides evaluated in extended precision.
struct Prop24Result {
    long ell = 0;
    double lhs = 0, rhs = 0;
};
Prop24Result prop24_bound(double r, double s, long M);

}  // namespace ppiso
