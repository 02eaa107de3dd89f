// SPDX-License-Identifier: Apache-2.0
//
// Selection rule: parameter validation, the dichotomy oracle, pre-seed
// predicates on hand-built configurations, and the invariance properties the
// isomorphism depends on.

#include "doctest.h"

#include <cmath>

#include "ppiso/harness.hpp"
#include "ppiso/selection.hpp"

using namespace ppiso;

namespace {

// A d=1 pattern with exactly one planted pre-seed class around `x0`:
// one covering point per halo side (asymmetric offsets), one globe point,
// and distant bystanders.
PointPattern planted_d1(double x0, const Domain& dom) {
    PointPattern mu(dom, 256);
    mu.add(Pt(Real(x0 - 1.3125)));    // left halo cover point
    mu.add(Pt(Real(x0 + 1.28125)));   // right halo cover point
    mu.add(Pt(Real(x0 + 0.0625)));    // globe content (the unique point)
    mu.add(Pt(Real(x0 - 20.0)));
    mu.add(Pt(Real(x0 + 17.0)));
    mu.add(Pt(Real(x0 + 24.5)));
    return mu;
}

// A d=2 pattern with one planted pre-seed at `c`: a jittered ring of 96
// points at radius 1.59375 (rho-covering the halo annulus with a fat margin)
// plus a single globe point.
PointPattern planted_d2(double cx, double cy, const Domain& dom) {
    PointPattern mu(dom, 256);
    const double rad = 1.59375;
    for (int i = 0; i < 40; ++i) {
        double th = 2.0 * M_PI * i / 40.0 + 0.01 * std::sin(7.0 * i + 1.0);
        mu.add(Pt(Real(cx + rad * std::cos(th)).truncate_bits(256),
                  Real(cy + rad * std::sin(th)).truncate_bits(256)));
    }
    mu.add(Pt(Real(cx + 0.109375), Real(cy + 0.046875)));  // globe content
    mu.add(Pt(Real(cx + 6.5), Real(cy + 5.25)));           // bystander
    return mu;
}

}  // namespace

TEST_CASE("preset parameters pass the full invariant check") {
    for (int dim : {1, 2}) {
        CHECK_NOTHROW(validate_params(SelectionParams::desk(dim), dim));
        CHECK_NOTHROW(validate_params(SelectionParams::paper(dim), dim));
    }
}

TEST_CASE("invalid parameters are rejected with reasons") {
    SelectionParams p = SelectionParams::desk(1);
    p.shell_in = p.halo_in;  // no interior cover ball
    CHECK_THROWS_AS(validate_params(p, 1), DegenerateConfiguration);

    p = SelectionParams::desk(1);
    p.relation_dist = p.cover_radius;  // 2 rho > relation_dist
    CHECK_THROWS_AS(validate_params(p, 1), DegenerateConfiguration);

    p = SelectionParams::desk(1);
    p.locality_radius = 1.0;
    CHECK_THROWS_AS(validate_params(p, 1), DegenerateConfiguration);

    p = SelectionParams::desk(1);
    p.shell_out = p.shell_in + 1.0;  // dichotomy gap opens
    CHECK_THROWS_AS(validate_params(p, 1), DegenerateConfiguration);
}

TEST_CASE("dichotomy oracle certifies the desk presets") {
    for (int dim : {1, 2}) {
        auto b = dichotomy(SelectionParams::desk(dim), dim);
        CHECK(b.ok);
        CHECK(b.near_dist == SelectionParams::desk(dim).relation_dist);
        CHECK(b.far_dist > b.near_dist + 2.0);
    }
}

TEST_CASE("selection params json round trip") {
    SelectionParams p = SelectionParams::desk(1);
    SelectionParams q = SelectionParams::from_json(p.to_json());
    CHECK(q.halo_in == p.halo_in);
    CHECK(q.shell_in == p.shell_in);
    CHECK(q.shell_out == p.shell_out);
    CHECK(q.cover_radius == p.cover_radius);
    CHECK(q.relation_dist == p.relation_dist);
    CHECK(q.locality_radius == p.locality_radius);
    CHECK(q.preset == p.preset);
}

TEST_CASE("empty pattern has no pre-seeds") {
    Domain dom = Domain::torus1(Real(100.0));
    PointPattern mu(dom, 256);
    CHECK(!is_preseed(mu, Pt(Real(50.0)), SelectionParams::desk(1)));
    CHECK(seed_set(mu, SelectionParams::desk(1)).size() == 0);
}

TEST_CASE("planted d=1 pre-seed is found and the globe is special") {
    Domain dom = Domain::torus1(Real(100.0));
    SelectionParams p = SelectionParams::desk(1);
    PointPattern mu = planted_d1(50.0, dom);
    CHECK(is_preseed(mu, Pt(Real(50.0)), p));
    // A position whose shell holds a halo point is not a pre-seed.
    CHECK(!is_preseed(mu, Pt(Real(53.0)), p));

    GlobeSet gs = seed_set(mu, p);
    REQUIRE(gs.size() == 1);
    CHECK(gs.globes[0].special);
    CHECK(std::abs(gs.globes[0].center.cd[0] - 50.0) < 0.25);
    REQUIRE(gs.globes[0].unique_point.has_value());
    CHECK(gs.globes[0].unique_point->cd[0] == doctest::Approx(50.0625));
    CHECK(gs.dichotomy_observed);
}

TEST_CASE("planted d=1 globe with two content points is not special") {
    Domain dom = Domain::torus1(Real(100.0));
    SelectionParams p = SelectionParams::desk(1);
    PointPattern mu = planted_d1(50.0, dom);
    mu.add(Pt(Real(49.8125)));  // second globe point
    GlobeSet gs = seed_set(mu, p);
    REQUIRE(gs.size() == 1);
    CHECK(!gs.globes[0].special);
}

TEST_CASE("planted d=2 pre-seed is found and the globe is special") {
    Domain dom = Domain::torus2(Real(16.0), Real(16.0));
    SelectionParams p = SelectionParams::desk(2);
    PointPattern mu = planted_d2(8.0, 8.0, dom);
    CHECK(is_preseed(mu, Pt(Real(8.0), Real(8.0)), p));
    GlobeSet gs = seed_set(mu, p);
    REQUIRE(gs.size() == 1);
    CHECK(gs.globes[0].special);
    CHECK(std::hypot(gs.globes[0].center.cd[0] - 8.0, gs.globes[0].center.cd[1] - 8.0) < 0.25);
    REQUIRE(gs.globes[0].unique_point.has_value());
}

TEST_CASE("globe disjointness and dichotomy over random realizations") {
    Domain dom = Domain::torus1(Real(2000.0));
    SelectionParams p = SelectionParams::desk(1);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        Rng rng(19, "sel", i);
        PointPattern mu = sample_poisson(dom, 1.0, rng);
        GlobeSet gs = seed_set(mu, p);
        CHECK(gs.dichotomy_observed);
        for (size_t a = 0; a < gs.size(); ++a)
            for (size_t b = a + 1; b < gs.size(); ++b) {
                CHECK(dist_cmp(gs.globes[a].center, gs.globes[b].center, dom, Real(2.0)) > 0);
                ++checked;
            }
    }
    CHECK(checked > 0);
}

TEST_CASE("globe-interior re-randomization leaves the seed set unchanged") {
    Domain dom = Domain::torus1(Real(2000.0));
    SelectionParams p = SelectionParams::desk(1);
    int with_globes = 0;
    for (int i = 0; i < 40 && with_globes < 12; ++i) {
        Rng rng(23, "sel", i);
        PointPattern mu = sample_poisson(dom, 1.0, rng);
        GlobeSet gs = seed_set(mu, p);
        if (gs.size() == 0) continue;
        ++with_globes;
        Rng rr = rng.fork("resample");
        PointPattern z = resample_inside_globes(mu, gs, 1.0, rr);
        GlobeSet gz = seed_set(z, p);
        REQUIRE(gz.size() == gs.size());
        for (size_t k = 0; k < gs.size(); ++k)
            CHECK(std::abs(gz.globes[k].center.cd[0] - gs.globes[k].center.cd[0]) < 1e-9);
    }
    CHECK(with_globes >= 5);
}

TEST_CASE("restrict_selection splits the pattern") {
    Domain dom = Domain::torus1(Real(100.0));
    SelectionParams p = SelectionParams::desk(1);
    PointPattern mu = planted_d1(50.0, dom);
    GlobeSet gs = seed_set(mu, p);
    REQUIRE(gs.size() == 1);
    Real one(1.0);
    PointPattern inside = restrict_selection(mu, gs, one, false, false);
    PointPattern outside = restrict_selection(mu, gs, one, false, true);
    CHECK(inside.size() == 1);
    CHECK(outside.size() == mu.size() - 1);
    CHECK(in_globes(gs, *gs.globes[0].unique_point, dom, one, false));
    CHECK(!in_globes(gs, Pt(Real(30.0)), dom, one, false));
}

TEST_CASE("globes_to_json shape") {
    Domain dom = Domain::torus1(Real(100.0));
    PointPattern mu = planted_d1(50.0, dom);
    GlobeSet gs = seed_set(mu, SelectionParams::desk(1));
    std::string j = globes_to_json(gs, 1, 256);
    CHECK(j.find("\"seeds\"") != std::string::npos);
    CHECK(j.find("\"special\"") != std::string::npos);
    CHECK(j.find("\"points\"") != std::string::npos);
}
