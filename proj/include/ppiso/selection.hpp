// SPDX-License-Identifier: Apache-2.0
//
// Isometry-equivariant selection rule.  A location x is a pre-seed of a
// pattern when
//   (i)  the closed shell L(x, shell_in, shell_out) holds no pattern point,
//   (ii) every ball of radius cover_radius whose center z satisfies
//        halo_in + rho <= |z - x| <= shell_in - rho contains a pattern point
//        (the halo of x is rho-densely covered).
// Two pre-seeds are related when their distance is <= relation_dist; a
// validated parameter set guarantees the dichotomy: any two pre-seeds are
// either related or at distance >= far.  Relation classes therefore have
// diameter <= relation_dist; the seed of a class is the center of its
// smallest enclosing ball, and the globe of a seed c is the closed unit ball
// around c.  A globe holding exactly one pattern point is special.
//
// d=1 computes the pre-seed region exactly by interval algebra on the circle;
// d=2 uses certified conservative subdivision down to resolution delta_seed,
// with disk-coverage tests at finitely many candidate points.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppiso/pattern.hpp"

namespace ppiso {

inline constexpr double kDeltaSeed = 0.015625;  // 2^-6 subdivision floor (d=2)

struct SelectionParams {
    double halo_in = 0;
    double shell_in = 0;
    double shell_out = 0;
    double cover_radius = 0;
    double relation_dist = 0;
    double locality_radius = 0;
    double globe_radius = 1.0;
    std::string preset = "custom";

    // Small validated constants (all dyadic so exact arithmetic applies).
    static SelectionParams desk(int dim);
    // Constants sized for the asymptotic argument; pre-seeds are then
    // astronomically rare on any simulable window.
    static SelectionParams paper(int dim);

    static SelectionParams from_json(const std::string& text);
    std::string to_json() const;
};

struct DichotomyBounds {
    bool ok = false;
    double near_dist = 0;  // related iff distance <= near_dist
    double far_dist = 0;   // unrelated pre-seeds certified at distance >= far_dist
    std::string reason;    // failure explanation when !ok
};

// Geometric validity oracle: certifies that every distance in
// (near, far) between two hypothetical pre-seeds is excluded (one of them
// would force a point into the other's empty shell).
DichotomyBounds dichotomy(const SelectionParams& p, int dim);

// Full invariant check (throws DegenerateConfiguration with a message when a
// constraint fails): dichotomy, halo admits interior cover balls, globes
// cannot influence any pre-seed predicate of their own or foreign classes.
void validate_params(const SelectionParams& p, int dim);

bool is_preseed(const PointPattern& mu, const Pt& x, const SelectionParams& p);

struct Globe {
    Pt center;
    bool special = false;
    std::optional<Pt> unique_point;  // set iff special
};

struct GlobeSet {
    std::vector<Globe> globes;
    bool dichotomy_observed = true;  // no pre-seed pair landed in (near, far)

    size_t size() const { return globes.size(); }
    std::vector<size_t> special_indices() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < globes.size(); ++i)
            if (globes[i].special) out.push_back(i);
        return out;
    }
};

// Pre-seed region -> relation classes -> seeds -> globes, ordered by distance
// of the center to the origin (ties broken lexicographically).
GlobeSet seed_set(const PointPattern& mu, const SelectionParams& p);

// Membership in the union of (special) globes: closed unit balls.
bool in_globes(const GlobeSet& gs, const Pt& z, const Domain& dom, const Real& radius,
               bool special_only);

// Restriction of a pattern to the union of (special) globes or its complement.
PointPattern restrict_selection(const PointPattern& mu, const GlobeSet& gs, const Real& radius,
                                bool special_only, bool complement);

std::string globes_to_json(const GlobeSet& gs, int dim, int coordbits);

}  // namespace ppiso
