// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point: Poisson sampling, the isomorphism pipeline
// (apply / invert / phi), selection mapping, verification suites, and the
// analytic no-fixed-window bound.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 no special globe
// in a realization, 3 degenerate configuration, 4 verification-suite failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppiso/errors.hpp"
#include "ppiso/harness.hpp"
#include "ppiso/iso.hpp"
#include "ppiso/selection.hpp"
#include "ppiso/tessellation.hpp"

namespace {

using namespace ppiso;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

// "torus:2000" (d=1) or "torus:60x60" / "box:12.5x12.5" (d=2).
Domain parse_domain(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw Error("domain spec needs shape:sides");
    std::string shape = s.substr(0, colon), sides = s.substr(colon + 1);
    bool torus = shape == "torus";
    if (!torus && shape != "box") throw Error("domain shape must be torus or box");
    auto x = sides.find('x');
    if (x == std::string::npos) {
        Real len = decimal_to_dyadic(sides, 20);
        return torus ? Domain::torus1(len) : Domain::box1(len);
    }
    Real a = decimal_to_dyadic(sides.substr(0, x), 20);
    Real b = decimal_to_dyadic(sides.substr(x + 1), 20);
    return torus ? Domain::torus2(a, b) : Domain::box2(a, b);
}

SelectionParams load_params(const std::string& params_path, const std::string& preset, int dim) {
    if (!params_path.empty()) return SelectionParams::from_json(slurp(params_path));
    if (preset == "desk") return SelectionParams::desk(dim);
    if (preset == "paper") return SelectionParams::paper(dim);
    throw Error("unknown preset " + preset);
}

FrameMode parse_mode(const std::string& m) {
    if (m == "isometry") return FrameMode::kIsometry;
    if (m == "translation") return FrameMode::kTranslation;
    throw Error("mode must be isometry or translation");
}

Domain default_domain(int dim) {
    return dim == 1 ? Domain::torus1(Real(2000.0)) : Domain::torus2(Real(60.0), Real(60.0));
}

// ---------------------------------------------------------------- suites --

TestReport suite_distribution(int dim, const Domain& dom, double r, int reps,
                              std::uint64_t seed) {
    std::vector<PointPattern> pats;
    pats.reserve(reps);
    for (int i = 0; i < reps; ++i) {
        Rng rng(seed, "verify-dist", static_cast<std::uint64_t>(i));
        pats.push_back(sample_poisson(dom, r, rng));
    }
    TestReport rep = poisson_suite(pats, r, dom);
    rep.config += " dim=" + std::to_string(dim);
    return rep;
}

TestReport suite_independence(const Domain& dom, double r, double s,
                              const SelectionParams& params, int reps,
                              std::uint64_t seed) {
    std::vector<std::pair<PointPattern, PointPattern>> pairs;
    int rejected = 0;
    for (int i = 0; i < reps; ++i) {
        Rng rng(seed, "verify-indep", static_cast<std::uint64_t>(i));
        PointPattern mu = sample_poisson(dom, r, rng);
        try {
            IsoOutput out = psi(mu, r, s, params);
            pairs.emplace_back(std::move(out.first), std::move(out.second));
        } catch (const NoSpecialGlobes&) {
            ++rejected;
        } catch (const DegenerateConfiguration&) {
            ++rejected;
        }
    }
    TestReport rep = independence_suite(pairs, 0.01, seed);
    rep.add("rejected_realizations", rejected, 0, 0, true,
            static_cast<std::size_t>(reps), seed);
    return rep;
}

TestReport suite_equivariance(int dim, const Domain& dom, double r, double s,
                              const SelectionParams& params, int reps,
                              std::uint64_t seed) {
    std::vector<PointPattern> pats;
    for (int i = 0; i < reps; ++i) {
        Rng rng(seed, "verify-equi", static_cast<std::uint64_t>(i));
        pats.push_back(sample_poisson(dom, r, rng));
    }
    std::vector<Isometry> family;
    if (dim == 1) {
        Rng rng(seed, "verify-equi-iso");
        for (int k = 0; k < 16; ++k) {
            // Dyadic torus translations act exactly on dyadic coordinates.
            Real t = (dom.sides[0] * BitStream::from_rng(rng, 20).value(64)).truncate_bits(20);
            family.push_back(Isometry::translation(1, t));
        }
    } else {
        for (int code = 0; code < 8; ++code) family.push_back(Isometry::hyperoctahedral(2, code));
    }
    double tol = dim == 1 ? 0.0 : 4 * kDeltaSeed;
    auto map1 = [&](const PointPattern& m) { return psi(m, r, s, params).first; };
    auto map2 = [&](const PointPattern& m) { return psi(m, r, s, params).second; };
    TestReport rep = equivariance_suite(map1, pats, family, tol);
    TestReport rep2 = equivariance_suite(map2, pats, family, tol);
    for (auto& rec : rep2.records) {
        rec.name = "second_" + rec.name;
        rep.records.push_back(rec);
    }
    rep.suite = "equivariance";
    rep.config = "dim=" + std::to_string(dim) + " reps=" + std::to_string(reps);
    return rep;
}

TestReport suite_roundtrip(const Domain& dom, double r, double s,
                           const SelectionParams& params, int reps, std::uint64_t seed) {
    std::vector<PointPattern> pats;
    for (int i = 0; i < reps; ++i) {
        Rng rng(seed, "verify-rt", static_cast<std::uint64_t>(i));
        pats.push_back(sample_poisson(dom, r, rng));
    }
    return roundtrip_suite(pats, params, r, s);
}

TestReport suite_selection(const Domain& dom, double r, const SelectionParams& params,
                           int reps, std::uint64_t seed) {
    TestReport rep;
    rep.suite = "selection";
    rep.config = "reps=" + std::to_string(reps);
    long disjoint_viol = 0, dicho_viol = 0, rerand_viol = 0, splice_viol = 0;
    long with_seeds = 0;
    for (int i = 0; i < reps; ++i) {
        Rng rng(seed, "verify-sel", static_cast<std::uint64_t>(i));
        PointPattern mu = sample_poisson(dom, r, rng);
        GlobeSet gs;
        try {
            gs = seed_set(mu, params);
        } catch (const DegenerateConfiguration&) {
            continue;
        } catch (const ThinComponent&) {
            continue;
        }
        if (gs.globes.empty()) continue;
        ++with_seeds;
        if (!gs.dichotomy_observed) ++dicho_viol;
        for (std::size_t a = 0; a + 1 < gs.globes.size(); ++a)
            for (std::size_t b = a + 1; b < gs.globes.size(); ++b)
                if (dist_cmp(gs.globes[a].center, gs.globes[b].center, dom, Real(2.0)) < 0)
                    ++disjoint_viol;

        // Globe interiors re-randomized: the seed set must not move.
        Rng rr = rng.fork("rerand");
        PointPattern z = resample_inside_globes(mu, gs, r, rr, false);
        try {
            GlobeSet gz = seed_set(z, params);
            bool same = gz.globes.size() == gs.globes.size();
            for (std::size_t k = 0; same && k < gs.globes.size(); ++k)
                same = gz.globes[k].center == gs.globes[k].center;
            if (!same) ++rerand_viol;
        } catch (const std::exception&) {
            ++rerand_viol;
        }

        // Locality splice: the pattern beyond locality_radius of a seed does
        // not affect that seed.
        const Pt& c0 = gs.globes[0].center;
        Real loc(params.locality_radius);
        Rng sp = rng.fork("splice");
        PointPattern fresh = sample_poisson(dom, r, sp, mu.coordbits);
        PointPattern spliced = PointPattern::pattern_sum(
            mu.filter([&](const Pt& p) { return dist_cmp(p, c0, dom, loc) <= 0; }),
            fresh.filter([&](const Pt& p) { return dist_cmp(p, c0, dom, loc) > 0; }));
        try {
            GlobeSet gsp = seed_set(spliced, params);
            bool found = false;
            for (const auto& g : gsp.globes) found = found || g.center == c0;
            if (!found) ++splice_viol;
        } catch (const std::exception&) {
            ++splice_viol;
        }
    }
    rep.add("globe_disjointness_violations", disjoint_viol, 0, 0, disjoint_viol == 0,
            with_seeds);
    rep.add("dichotomy_gap_violations", dicho_viol, 0, 0, dicho_viol == 0, with_seeds);
    rep.add("globe_rerandomization_violations", rerand_viol, 0, 0, rerand_viol == 0,
            with_seeds);
    rep.add("locality_splice_violations", splice_viol, 0, 0, splice_viol == 0, with_seeds);
    rep.add("realizations_with_seeds", with_seeds, 0, 0, with_seeds > 0,
            static_cast<std::size_t>(reps));
    return rep;
}

TestReport suite_codingwindow(const Domain& dom, double r, double s,
                              const SelectionParams& params, int reps,
                              std::uint64_t seed) {
    TestReport rep;
    rep.suite = "codingwindow";
    rep.config = "reps=" + std::to_string(reps);
    long finite = 0, exhausted = 0;
    double wsum = 0, wmax = 0;
    for (int i = 0; i < reps; ++i) {
        Rng rng(seed, "verify-cw", static_cast<std::uint64_t>(i));
        PointPattern mu = sample_poisson(dom, r, rng);
        try {
            CodingRadius cr = coding_radius(mu, params);
            ++finite;
            wsum += cr.w;
            wmax = std::max(wmax, cr.w);
        } catch (const WindowExhausted&) {
            ++exhausted;
        } catch (const DegenerateConfiguration&) {
            ++exhausted;
        }
    }
    (void)s;
    rep.add("finite_radius_fraction", reps ? double(finite) / reps : 0, 0, 0.99,
            finite >= reps * 99 / 100, static_cast<std::size_t>(reps), seed);
    rep.add("mean_w", finite ? wsum / finite : 0, 0, 0, finite > 0, finite);
    rep.add("max_w", wmax, 0, 0, true, finite);
    rep.add("window_exhausted", exhausted, 0, 0, true, static_cast<std::size_t>(reps));
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finitary isomorphisms of finite-domain Poisson point patterns"};
    app.require_subcommand(1);

    // --- sample ---
    auto* c_sample = app.add_subcommand("sample", "Draw a Poisson point pattern");
    int s_dim = 1;
    double s_r = 1.0;
    std::string s_domain, s_out;
    std::uint64_t s_seed = 1;
    int s_coordbits = kDefaultCoordBits;
    c_sample->add_option("--dim", s_dim)->check(CLI::Range(1, 2));
    c_sample->add_option("--intensity", s_r)->required();
    c_sample->add_option("--domain", s_domain, "torus:L | box:LxW")->required();
    c_sample->add_option("--seed", s_seed);
    c_sample->add_option("--coordbits", s_coordbits);
    c_sample->add_option("--out", s_out)->required();

    // --- iso ---
    auto* c_iso = app.add_subcommand("iso", "Isomorphism pipeline");
    c_iso->require_subcommand(1);
    auto* c_apply = c_iso->add_subcommand("apply", "psi: pattern -> independent pair");
    auto* c_invert = c_iso->add_subcommand("invert", "psi^-1: pair -> pattern");
    auto* c_phi = c_iso->add_subcommand("phi", "intensity-changing isomorphism");
    std::string i_in, i_params, i_mode = "isometry", i_out_r, i_out_s, i_preset = "desk";
    std::string v_in_r, v_in_s, v_out;
    double i_s = 2.0, i_r = 1.0;
    c_apply->add_option("--in", i_in)->required();
    c_apply->add_option("--target-intensity", i_s)->required();
    c_apply->add_option("--source-intensity", i_r);
    c_apply->add_option("--mode", i_mode);
    c_apply->add_option("--params", i_params);
    c_apply->add_option("--preset", i_preset);
    c_apply->add_option("--out-r", i_out_r)->required();
    c_apply->add_option("--out-s", i_out_s)->required();
    c_invert->add_option("--in-r", v_in_r)->required();
    c_invert->add_option("--in-s", v_in_s)->required();
    c_invert->add_option("--target-intensity", i_s)->required();
    c_invert->add_option("--source-intensity", i_r);
    c_invert->add_option("--mode", i_mode);
    c_invert->add_option("--params", i_params);
    c_invert->add_option("--preset", i_preset);
    c_invert->add_option("--out", v_out)->required();
    c_phi->add_option("--in", i_in)->required();
    c_phi->add_option("--r", i_r)->required();
    c_phi->add_option("--s", i_s)->required();
    c_phi->add_option("--mode", i_mode);
    c_phi->add_option("--params", i_params);
    c_phi->add_option("--preset", i_preset);
    c_phi->add_option("--out", v_out)->required();

    // --- selection map ---
    auto* c_sel = app.add_subcommand("selection", "Selection rule");
    auto* c_map = c_sel->add_subcommand("map", "Globes (and cells) of a pattern");
    std::string m_in, m_params, m_preset = "desk", m_out, m_tess;
    c_map->add_option("--in", m_in)->required();
    c_map->add_option("--params", m_params);
    c_map->add_option("--preset", m_preset);
    c_map->add_option("--out", m_out)->required();
    c_map->add_option("--tessellation", m_tess, "also write the Voronoi cells");

    // --- verify ---
    auto* c_verify = app.add_subcommand("verify", "Verification suites");
    std::string f_suite = "all", f_preset = "desk", f_report, f_domain;
    int f_dim = 1, f_reps = 500;
    double f_r = 1.0, f_s = 2.0;
    std::uint64_t f_seed = 1;
    c_verify->add_option("--suite", f_suite,
                         "distribution|independence|equivariance|roundtrip|selection|codingwindow|all");
    c_verify->add_option("--dim", f_dim)->check(CLI::Range(1, 2));
    c_verify->add_option("--preset", f_preset);
    c_verify->add_option("--reps", f_reps);
    c_verify->add_option("--seed", f_seed);
    c_verify->add_option("--r", f_r);
    c_verify->add_option("--s", f_s);
    c_verify->add_option("--domain", f_domain, "override the default domain");
    c_verify->add_option("--report", f_report);

    // --- prop24 ---
    auto* c_p24 = app.add_subcommand("prop24", "No fixed coding window: smallest valid l");
    double p_r = 1, p_s = 2;
    long p_m = 1;
    c_p24->add_option("--r", p_r)->required();
    c_p24->add_option("--s", p_s)->required();
    c_p24->add_option("--M", p_m)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse the library's per-error exit codes onto the documented
        // contract: 0 for --help, 1 for any usage/config problem.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*c_sample) {
            Domain dom = parse_domain(s_domain);
            if (dom.dim != s_dim && !s_domain.empty()) s_dim = dom.dim;
            Rng rng(s_seed, "sample");
            PointPattern mu = sample_poisson(dom, s_r, rng, s_coordbits);
            spill(s_out, mu.to_csv());
        } else if (*c_apply) {
            PointPattern mu = PointPattern::from_csv(slurp(i_in));
            SelectionParams p = load_params(i_params, i_preset, mu.dom.dim);
            IsoOutput out = psi(mu, i_r, i_s, p, parse_mode(i_mode));
            spill(i_out_r, out.first.to_csv());
            spill(i_out_s, out.second.to_csv());
        } else if (*c_invert) {
            IsoOutput out;
            out.first = PointPattern::from_csv(slurp(v_in_r));
            out.second = PointPattern::from_csv(slurp(v_in_s));
            out.mode = parse_mode(i_mode);
            out.r = i_r;
            out.s = i_s;
            SelectionParams p = load_params(i_params, i_preset, out.first.dom.dim);
            spill(v_out, psi_inv(out, p).to_csv());
        } else if (*c_phi) {
            PointPattern mu = PointPattern::from_csv(slurp(i_in));
            SelectionParams p = load_params(i_params, i_preset, mu.dom.dim);
            spill(v_out, phi(mu, i_r, i_s, p, parse_mode(i_mode)).to_csv());
        } else if (*c_map) {
            PointPattern mu = PointPattern::from_csv(slurp(m_in));
            SelectionParams p = load_params(m_params, m_preset, mu.dom.dim);
            GlobeSet gs = seed_set(mu, p);
            spill(m_out, globes_to_json(gs, mu.dom.dim, mu.coordbits));
            if (!m_tess.empty()) {
                Tessellation t = build_tessellation(gs, mu.dom);
                spill(m_tess, tessellation_to_json(t, gs, mu.coordbits));
            }
        } else if (*c_verify) {
            Domain dom = f_domain.empty() ? default_domain(f_dim) : parse_domain(f_domain);
            f_dim = dom.dim;
            SelectionParams p = load_params("", f_preset, f_dim);
            std::vector<TestReport> reps;
            auto want = [&](const std::string& s) { return f_suite == s || f_suite == "all"; };
            if (want("distribution"))
                reps.push_back(suite_distribution(f_dim, dom, f_r, f_reps, f_seed));
            if (want("independence"))
                reps.push_back(suite_independence(dom, f_r, f_s, p, f_reps, f_seed));
            if (want("equivariance"))
                reps.push_back(suite_equivariance(f_dim, dom, f_r, f_s, p, f_reps, f_seed));
            if (want("roundtrip"))
                reps.push_back(suite_roundtrip(dom, f_r, f_s, p, f_reps, f_seed));
            if (want("selection"))
                reps.push_back(suite_selection(dom, f_r, p, f_reps, f_seed));
            if (want("codingwindow"))
                reps.push_back(suite_codingwindow(dom, f_r, f_s, p, f_reps, f_seed));
            bool all_pass = true;
            std::ostringstream out;
            out << "[\n";
            for (std::size_t i = 0; i < reps.size(); ++i) {
                all_pass = all_pass && reps[i].verdict();
                out << reps[i].to_json() << (i + 1 < reps.size() ? ",\n" : "\n");
            }
            out << "]\n";
            if (!f_report.empty())
                spill(f_report, out.str());
            else
                std::cout << out.str();
            for (const auto& r : reps)
                std::cerr << r.suite << ": " << (r.verdict() ? "pass" : "FAIL") << "\n";
            if (!all_pass) return 4;
        } else if (*c_p24) {
            Prop24Result res = prop24_bound(p_r, p_s, p_m);
            std::cout << "{ \"ell\": " << res.ell << ", \"lhs\": " << res.lhs
                      << ", \"rhs\": " << res.rhs << " }\n";
        }
    } catch (const NoSpecialGlobes& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateConfiguration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ThinComponent& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
