// SPDX-License-Identifier: Apache-2.0
//
// Voronoi tessellation over the centers of the special globes (the sites),
// with cells kept in lifted coordinates around their site: on a torus each
// cell is the intersection of bisector half-spaces against every replica of
// every site in the 3^d neighboring fundamental domains, which tiles the
// torus exactly.  Also the explicit coding-radius bound: blocks of side-length
// ell = 100 * (shell_out + 1) along each axis must show three special-globe
// hits on each side of the center.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "ppiso/pattern.hpp"
#include "ppiso/polytope.hpp"
#include "ppiso/selection.hpp"

namespace ppiso {

struct Tessellation {
    Domain dom;
    std::vector<Pt> sites;        // special-globe centers, selection order
    std::vector<Polytope> cells;  // lifted around each site
};

// Sites are the special globes of `gs`; throws NoSites when there are none,
// CellTooLargeForTorus when a torus cell (with >= 2 sites) reaches half the
// period.  A single site on a torus owns the whole fundamental domain.
Tessellation build_tessellation(const GlobeSet& gs, const Domain& dom);

// Index of the unique nearest site; exact distance comparisons, exact ties
// raise DegenerateConfiguration.
size_t cell_of(const Tessellation& t, const Pt& z);

// Coordinates of z lifted into the Euclidean frame of cell i (each axis
// wrapped to within half a period of the site).
std::array<Real, 2> lift_to_cell(const Tessellation& t, size_t i, const Pt& z);

std::string tessellation_to_json(const Tessellation& t, const GlobeSet& gs, int coordbits);

struct CodingRadius {
    double ell = 0;
    std::array<long, 2> T{0, 0};
    double w = 0;  // 8 * ell * (T[0] + ... + T[dim-1])
};

// Smallest per-axis block counts with three special-globe hits on each side
// of the window center; throws WindowExhausted when the box is used up first.
// Box domains only.
CodingRadius coding_radius(const PointPattern& mu, const SelectionParams& p);

// True iff the tessellations of mu and mu2 agree on every cell that meets
// the unit ball around the window center (sites and cell vertices within
// eps).  Box domains only.
bool local_determination_check(const PointPattern& mu, const PointPattern& mu2,
                               const SelectionParams& p, double eps = kEpsGeom);

}  // namespace ppiso
