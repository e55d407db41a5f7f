#include "mtp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json17.hpp"
#include "mtp/coefficients.hpp"
#include "mtp/fields.hpp"
#include "mtp/friedrichs.hpp"
#include "mtp/io.hpp"
#include "mtp/solver.hpp"
#include "mtp/transport.hpp"

namespace mtp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

TypeChangeCoefficient make_tc(const RunConfig& cfg) {
    if (cfg.k_form == "parabolic") return TypeChangeCoefficient::parabolic();
    if (cfg.k_form == "zero-sigma") return TypeChangeCoefficient::zero_sigma();
    throw std::invalid_argument("unknown K form '" + cfg.k_form + "'");
}

MultiplierField make_mf(const RunConfig& cfg) {
    if (cfg.mult_kind == "dilation") return MultiplierField::dilation(cfg.m, cfg.mu, cfg.delta);
    if (cfg.mult_kind == "cc-example") return MultiplierField::cc_example(cfg.cc.M, cfg.cc.eps);
    throw std::invalid_argument("unknown multiplier kind '" + cfg.mult_kind + "'");
}

Domain make_domain(const RunConfig& cfg, const TypeChangeCoefficient& tc) {
    if (!cfg.domain_path.empty()) {
        std::ifstream in(cfg.domain_path);
        if (!in) throw std::invalid_argument("cannot read domain file '" + cfg.domain_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return domain_from_json(ss.str());
    }
    if (cfg.domain_builtin == "cc-example") return build_cc_example_domain(cfg.cc);
    if (cfg.domain_builtin == "box") return make_box_domain(cfg.box_lo, cfg.box_hi, &tc);
    throw std::invalid_argument("unknown builtin domain '" + cfg.domain_builtin + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_report(const RunConfig& cfg, const nlohmann::json& j) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text(std::filesystem::path(cfg.out_dir) / "report.json", dump_json17(j));
}

nlohmann::json condition_json(const ConditionResult& c) {
    return {{"label", c.label},
            {"where", c.where},
            {"margin", c.margin},
            {"pass", c.pass},
            {"worst_point", {c.worst_point.x, c.worst_point.y}}};
}

std::vector<Vec2> interior_samples(const Domain& dom, int n, std::uint64_t seed) {
    std::vector<Vec2> pts;
    std::mt19937_64 rng(seed);
    auto bb = dom.bounding_box();
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x), uy(bb.lo.y, bb.hi.y);
    int guard = 0;
    while (static_cast<int>(pts.size()) < n && guard < 1000 * n) {
        Vec2 p{ux(rng), uy(rng)};
        ++guard;
        if (dom.contains(p)) pts.push_back(p);
    }
    return pts;
}

std::vector<double> sample_bump(const Grid& grid, const SmoothBump& bump) {
    std::vector<double> u(static_cast<size_t>(grid.nx()) * grid.ny(), 0.0);
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            u[grid.lattice_index(i, j)] = bump.value(grid.node(i, j));
    return u;
}

int run_example_cc(const RunConfig& cfg) {
    Domain dom = build_cc_example_domain(cfg.cc);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(std::filesystem::path(cfg.out_dir) / "domain.json", domain_to_json(dom));
    std::ostringstream csv;
    write_polygon_csv(csv, dom);
    write_text(std::filesystem::path(cfg.out_dir) / "polygon.csv", csv.str());

    nlohmann::json rep;
    rep["subcommand"] = "example-cc";
    rep["M"] = cfg.cc.M;
    rep["eps"] = cfg.cc.eps;
    rep["delta0"] = cfg.cc.delta0;
    rep["delta1"] = cfg.cc.delta1;
    rep["signed_area"] = dom.signed_area();
    rep["n_arcs"] = dom.arcs().size();
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& a : dom.arcs())
        arcs.push_back({{"name", a.name()}, {"class", to_string(a.cls())}});
    rep["arcs"] = arcs;
    write_report(cfg, rep);
    std::cout << "example-cc: wrote domain.json, polygon.csv (area "
              << dom.signed_area() << ")\n";
    return kExitOk;
}

int run_classify(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);

    bool all_ok = true;
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& arc : dom.arcs()) {
        Vec2 mid = arc.position(0.5);
        double k_mid = tc.k(mid);
        bool ok = true;
        switch (arc.cls()) {
            case ArcClass::Elliptic:
            case ArcClass::EllipticSmoothing: ok = k_mid > 0.0; break;
            case ArcClass::Characteristic:
            case ArcClass::HyperbolicNoncharacteristic: ok = k_mid < 0.0; break;
            case ArcClass::Sonic: ok = std::abs(k_mid) <= 1e-12; break;
        }
        all_ok = all_ok && ok;
        arcs.push_back({{"name", arc.name()},
                        {"class", to_string(arc.cls())},
                        {"K_midpoint", k_mid},
                        {"consistent", ok}});
    }

    auto bb = dom.bounding_box();
    SigmaReport sig = validate_sigma(tc, bb.lo.y, bb.hi.y, 513);
    nlohmann::json sigma = nlohmann::json::array();
    for (const auto& c : sig.conditions) {
        sigma.push_back({{"label", c.label},
                         {"pass", c.pass},
                         {"worst_y", c.worst_y},
                         {"worst_violation", c.worst_value}});
        all_ok = all_ok && c.pass;
    }

    nlohmann::json rep;
    rep["subcommand"] = "classify";
    rep["arcs"] = arcs;
    rep["sigma_conditions"] = sigma;
    rep["signed_area"] = dom.signed_area();
    rep["bounding_box"] = {{"lo", {bb.lo.x, bb.lo.y}}, {"hi", {bb.hi.x, bb.hi.y}}};
    rep["pass"] = all_ok;
    write_report(cfg, rep);
    std::cout << "classify: " << (all_ok ? "PASS" : "FAIL") << "\n";
    return all_ok ? kExitOk : kExitCheckFailed;
}

int run_check_spd(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    MultiplierField mf = make_mf(cfg);
    auto variant = cfg.variant == "PF" ? FirstOrderSystem::Variant::PF
                                       : FirstOrderSystem::Variant::Standard;
    FirstOrderSystem sys = build_cold_plasma_system(tc, cfg.kappa1, cfg.kappa2, variant);
    MultipliedSystem ms(sys, MultiplierMatrix::for_system(mf, sys));

    std::vector<Vec2> pts = interior_samples(dom, cfg.n_interior, cfg.seed);
    SpdReport spd = check_symmetric_positive(ms, pts);

    nlohmann::json rep;
    rep["subcommand"] = "check-spd";
    rep["n_samples"] = spd.n_samples;
    rep["min_eigenvalue"] = spd.min_eigenvalue;
    rep["argmin"] = {spd.argmin.x, spd.argmin.y};
    rep["conditions"] = nlohmann::json::array(
        {{{"label", "(Q1)"},
          {"margin", spd.min_q11},
          {"pass", spd.min_q11 > 0.0},
          {"worst_point", {spd.argmin_q11.x, spd.argmin_q11.y}}},
         {{"label", "(Q2)"},
          {"margin", spd.min_det},
          {"pass", spd.min_det > 0.0},
          {"worst_point", {spd.argmin_det.x, spd.argmin_det.y}}}});
    rep["pass"] = spd.pass;
    write_report(cfg, rep);
    std::cout << "check-spd: " << (spd.pass ? "PASS" : "FAIL") << " (min eigenvalue "
              << spd.min_eigenvalue << ")\n";
    return spd.pass ? kExitOk : kExitCheckFailed;
}

int run_check_admissible(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    MultiplierField mf = make_mf(cfg);
    auto variant = cfg.variant == "PF" ? FirstOrderSystem::Variant::PF
                                       : FirstOrderSystem::Variant::Standard;
    Theorem3Report rep3 =
        verify_theorem3(dom, tc, cfg.kappa1, cfg.kappa2, mf, cfg.n_quad, cfg.n_interior, cfg.seed,
                        variant);

    nlohmann::json rep;
    rep["subcommand"] = "check-admissible";
    rep["n_interior_samples"] = rep3.n_interior_samples;
    rep["n_boundary_nodes"] = rep3.n_boundary_nodes;
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : rep3.conditions) conds.push_back(condition_json(c));
    rep["conditions"] = conds;
    rep["pass"] = rep3.pass;
    write_report(cfg, rep);
    std::cout << "check-admissible: " << (rep3.pass ? "PASS" : "FAIL") << " ("
              << rep3.conditions.size() << " conditions)\n";
    for (const auto& c : rep3.conditions)
        if (!c.pass)
            std::cout << "  FAIL " << c.label << " on " << c.where << " margin " << c.margin
                      << " at (" << c.worst_point.x << ", " << c.worst_point.y << ")\n";
    return rep3.pass ? kExitOk : kExitCheckFailed;
}

int run_transport(const RunConfig& cfg) {
    if (cfg.mult_kind != "dilation")
        throw std::invalid_argument("transport: requires the dilation multiplier (b=mx, c=mu y)");
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    MultiplierField mf = make_mf(cfg);
    Grid grid(dom, cfg.h);

    std::vector<double> u;
    if (cfg.forcing_kind == "bump") {
        u = sample_bump(grid, {{cfg.bump_cx, cfg.bump_cy}, cfg.bump_r, cfg.bump_amp});
    } else if (cfg.forcing_kind == "csv") {
        std::ifstream in(cfg.forcing_csv);
        if (!in) throw std::invalid_argument("cannot read forcing csv '" + cfg.forcing_csv + "'");
        u = read_field_csv(in, grid);
    } else if (cfg.forcing_kind == "zero") {
        u.assign(static_cast<size_t>(grid.nx()) * grid.ny(), 0.0);
    } else {
        throw std::invalid_argument("unknown forcing kind '" + cfg.forcing_kind + "'");
    }

    TransportResult tr = solve_transport(mf, dom, grid, u);

    // Finite-difference residual H v - u on nodes with a full stencil,
    // restricted to the support of u.
    double num = 0.0, den = 0.0;
    const double h = grid.h();
    for (auto [i, j] : grid.active_nodes()) {
        if (u[grid.lattice_index(i, j)] == 0.0) continue;
        if (grid.node_index(i + 1, j) < 0 || grid.node_index(i - 1, j) < 0 ||
            grid.node_index(i, j + 1) < 0 || grid.node_index(i, j - 1) < 0)
            continue;
        auto f = mf.eval(grid.node(i, j));
        double vx = (tr.v[grid.lattice_index(i + 1, j)] - tr.v[grid.lattice_index(i - 1, j)]) /
                    (2 * h);
        double vy = (tr.v[grid.lattice_index(i, j + 1)] - tr.v[grid.lattice_index(i, j - 1)]) /
                    (2 * h);
        double hv = f.a * tr.v[grid.lattice_index(i, j)] + f.b * vx + f.c * vy;
        double r = hv - u[grid.lattice_index(i, j)];
        num += r * r;
        den += u[grid.lattice_index(i, j)] * u[grid.lattice_index(i, j)];
    }
    double rel_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;

    std::filesystem::create_directories(cfg.out_dir);
    std::ostringstream csv;
    write_field_csv(csv, grid, tr.v);
    write_text(std::filesystem::path(cfg.out_dir) / "field.csv", csv.str());

    nlohmann::json rep;
    rep["subcommand"] = "transport";
    rep["h"] = cfg.h;
    rep["n_nodes"] = grid.n_active();
    rep["n_capped"] = tr.n_capped;
    rep["rel_residual_on_support"] = rel_residual;
    bool pass = tr.n_capped == 0;
    rep["pass"] = pass;
    write_report(cfg, rep);
    std::cout << "transport: " << (pass ? "PASS" : "FAIL") << " residual " << rel_residual << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int run_solve(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    DiscreteProblem dp = assemble(dom, tc, cfg.h);

    Vector F;
    if (cfg.forcing_kind == "bump") {
        SmoothBump bump{{cfg.bump_cx, cfg.bump_cy}, cfg.bump_r, cfg.bump_amp};
        F = load_vector(dp, [&](Vec2 p) { return bump.value(p); });
    } else if (cfg.forcing_kind == "csv") {
        std::ifstream in(cfg.forcing_csv);
        if (!in) throw std::invalid_argument("cannot read forcing csv '" + cfg.forcing_csv + "'");
        Grid& grid = dp.grid;
        std::vector<double> f = read_field_csv(in, grid);
        F = load_vector(dp, [&](Vec2 p) { return grid.interpolate(f, p); });
    } else if (cfg.forcing_kind == "zero") {
        F = Vector::Zero(dp.grid.n_active());
    } else {
        throw std::invalid_argument("unknown forcing kind '" + cfg.forcing_kind + "'");
    }

    SolveResult sol = solve_closed_dirichlet(dp, F);
    std::vector<double> lattice = dp.grid.scatter(sol.u);

    std::filesystem::create_directories(cfg.out_dir);
    std::ostringstream csv;
    write_field_csv(csv, dp.grid, lattice);
    write_text(std::filesystem::path(cfg.out_dir) / "solution.csv", csv.str());

    nlohmann::json rep;
    rep["subcommand"] = "solve";
    rep["h"] = cfg.h;
    rep["n_dofs"] = dp.grid.n_active();
    rep["cg_iterations"] = sol.cg_iterations;
    rep["residual_Hneg1"] = sol.residual_Hneg1;
    rep["rel_normal_residual"] = sol.rel_normal_residual;
    rep["norm_L2_wK"] = norm_L2_wK(dp, sol.u);
    rep["norm_H10_K"] = norm_H10_K(dp, sol.u);
    rep["pass"] = sol.converged;
    write_report(cfg, rep);
    std::cout << "solve: " << (sol.converged ? "PASS" : "FAIL") << " residual "
              << sol.residual_Hneg1 << " in " << sol.cg_iterations << " iterations\n";
    return sol.converged ? kExitOk : kExitCheckFailed;
}

int run_lemma1(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    DiscreteProblem dp = assemble(dom, tc, cfg.h);

    KernelProbe kp = kernel_probe(dp);
    nlohmann::json rep;
    rep["subcommand"] = "lemma1";
    rep["h"] = cfg.h;
    rep["n_dofs"] = dp.grid.n_active();
    rep["kernel_found"] = kp.kernel_found;
    rep["kernel_ratio"] = kp.smallest_ratio;
    if (kp.kernel_found) {
        rep["error"] = "discrete kernel of A: uniqueness-failure witness";
        rep["pass"] = false;
        write_report(cfg, rep);
        std::cout << "lemma1: FAIL (discrete kernel found)\n";
        return kExitCheckFailed;
    }

    Lemma1Estimate est = estimate_lemma1_constant(dp, cfg.n_trials, cfg.seed);
    double sup_eigen = lemma1_sup_ratio_eigen(dp);
    rep["max_ratio"] = est.max_ratio;
    rep["mean_ratio"] = est.mean_ratio;
    rep["n_trials"] = est.n_trials;
    rep["sup_ratio_eigen"] = sup_eigen;
    rep["pass"] = true;
    write_report(cfg, rep);
    std::cout << "lemma1: PASS sup ratio " << sup_eigen << " (sampled max " << est.max_ratio
              << ")\n";
    return kExitOk;
}

int run_poincare(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    DiscreteProblem dp = assemble(dom, tc, cfg.h);
    PoincareEstimate est = estimate_poincare_constant(dp);

    nlohmann::json rep;
    rep["subcommand"] = "poincare";
    rep["h"] = cfg.h;
    rep["n_dofs"] = dp.grid.n_active();
    rep["lambda"] = est.lambda;
    rep["inv_lambda"] = est.inv_lambda;
    rep["iterations"] = est.iterations;
    rep["pass"] = est.converged;
    write_report(cfg, rep);
    std::cout << "poincare: lambda " << est.lambda << "\n";
    return est.converged ? kExitOk : kExitCheckFailed;
}

int run_energy_identity(const RunConfig& cfg) {
    if (cfg.mult_kind != "dilation")
        throw std::invalid_argument("energy-identity: requires the dilation multiplier");
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    MultiplierField mf = make_mf(cfg);
    EnergyCoefficients ec = lemma1_coefficients(cfg.m, cfg.mu, cfg.delta);

    std::mt19937_64 rng(cfg.seed);
    auto bb = dom.bounding_box();
    std::uniform_real_distribution<double> ucx(bb.lo.x + 0.3 * (bb.hi.x - bb.lo.x),
                                               bb.hi.x - 0.3 * (bb.hi.x - bb.lo.x));
    std::uniform_real_distribution<double> ucy(bb.lo.y + 0.3 * (bb.hi.y - bb.lo.y),
                                               bb.hi.y - 0.3 * (bb.hi.y - bb.lo.y));
    std::uniform_real_distribution<double> ur(0.1, 0.2);

    nlohmann::json fields = nlohmann::json::array();
    bool pass = true;
    for (int trial = 0; trial < 3; ++trial) {
        SmoothBump bump{{ucx(rng), ucy(rng)}, ur(rng) * std::min(bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y), 1.0};
        nlohmann::json per_h = nlohmann::json::array();
        for (double hh : {cfg.h * 2.0, cfg.h}) {
            Grid grid(dom, hh);
            std::vector<double> v = sample_bump(grid, bump);
            EnergyIdentityTerms terms = energy_identity_terms(grid, v, ec, mf, tc, dom);
            double rel = terms.interior != 0.0 ? terms.defect / std::abs(terms.interior) : 0.0;
            per_h.push_back({{"h", hh},
                             {"lhs", terms.lhs},
                             {"boundary", terms.boundary},
                             {"interior", terms.interior},
                             {"defect", terms.defect},
                             {"rel_defect", rel},
                             {"min_boundary_integrand", terms.min_boundary_integrand}});
            pass = pass && terms.min_boundary_integrand >= -1e-8;
        }
        fields.push_back({{"center", {bump.center.x, bump.center.y}},
                          {"radius", bump.radius},
                          {"levels", per_h}});
    }

    nlohmann::json rep;
    rep["subcommand"] = "energy-identity";
    rep["fields"] = fields;
    rep["pass"] = pass;
    write_report(cfg, rep);
    std::cout << "energy-identity: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int run_convergence(const RunConfig& cfg) {
    TypeChangeCoefficient tc = make_tc(cfg);
    Domain dom = make_domain(cfg, tc);
    SmoothBump bump{{cfg.bump_cx, cfg.bump_cy}, cfg.bump_r, cfg.bump_amp};
    ManufacturedSolution ms{[bump](Vec2 p) { return bump.value(p); },
                            [bump, tc](Vec2 p) { return apply_L(tc, bump, p); }};
    std::vector<ConvergenceRow> rows = convergence_study(dom, tc, ms, cfg.mesh_hs);

    bool decreasing = true;
    for (size_t i = 1; i < rows.size(); ++i)
        decreasing = decreasing && rows[i].err_L2_wK < rows[i - 1].err_L2_wK;

    nlohmann::json table = nlohmann::json::array();
    for (const auto& r : rows)
        table.push_back({{"h", r.h},
                         {"n_dofs", r.n_dofs},
                         {"err_L2_wK", r.err_L2_wK},
                         {"residual_Hneg1", r.residual_Hneg1},
                         {"rate", r.rate}});
    nlohmann::json rep;
    rep["subcommand"] = "convergence";
    rep["table"] = table;
    rep["pass"] = decreasing;
    write_report(cfg, rep);
    std::cout << "convergence: " << (decreasing ? "PASS" : "FAIL") << "\n";
    for (const auto& r : rows)
        std::cout << "  h=" << r.h << " err=" << r.err_L2_wK << " rate=" << r.rate << "\n";
    return decreasing ? kExitOk : kExitCheckFailed;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RunConfig cfg;
    cfg.subcommand = j.value("subcommand", "");
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        if (d.contains("path")) cfg.domain_path = d["path"];
        if (d.contains("builtin")) cfg.domain_builtin = d["builtin"];
        cfg.cc.M = d.value("M", cfg.cc.M);
        cfg.cc.eps = d.value("eps", cfg.cc.eps);
        cfg.cc.delta0 = d.value("delta0", cfg.cc.delta0);
        cfg.cc.delta1 = d.value("delta1", cfg.cc.delta1);
        if (d.contains("lo")) cfg.box_lo = {d["lo"][0], d["lo"][1]};
        if (d.contains("hi")) cfg.box_hi = {d["hi"][0], d["hi"][1]};
    }
    if (j.contains("K")) cfg.k_form = j["K"].value("form", cfg.k_form);
    if (j.contains("multiplier")) {
        const auto& m = j["multiplier"];
        cfg.mult_kind = m.value("kind", cfg.mult_kind);
        cfg.m = m.value("m", cfg.m);
        cfg.mu = m.value("mu", cfg.mu);
        cfg.delta = m.value("delta", cfg.delta);
        cfg.cc.M = m.value("M", cfg.cc.M);
        cfg.cc.eps = m.value("eps", cfg.cc.eps);
    }
    cfg.kappa1 = j.value("kappa1", cfg.kappa1);
    cfg.kappa2 = j.value("kappa2", cfg.kappa2);
    cfg.variant = j.value("variant", cfg.variant);
    cfg.h = j.value("h", cfg.h);
    if (j.contains("samples")) {
        cfg.n_quad = j["samples"].value("quad", cfg.n_quad);
        cfg.n_interior = j["samples"].value("interior", cfg.n_interior);
        cfg.n_trials = j["samples"].value("trials", cfg.n_trials);
    }
    if (j.contains("meshes")) cfg.mesh_hs = j["meshes"].get<std::vector<double>>();
    if (j.contains("forcing")) {
        const auto& f = j["forcing"];
        cfg.forcing_kind = f.value("kind", cfg.forcing_kind);
        cfg.bump_cx = f.value("cx", cfg.bump_cx);
        cfg.bump_cy = f.value("cy", cfg.bump_cy);
        cfg.bump_r = f.value("R", cfg.bump_r);
        cfg.bump_amp = f.value("amp", cfg.bump_amp);
        cfg.forcing_csv = f.value("path", cfg.forcing_csv);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_dir = j.value("out", cfg.out_dir);
    return cfg;
}

int run(const RunConfig& cfg) {
    try {
        if (cfg.subcommand == "example-cc") return run_example_cc(cfg);
        if (cfg.subcommand == "classify") return run_classify(cfg);
        if (cfg.subcommand == "check-spd") return run_check_spd(cfg);
        if (cfg.subcommand == "check-admissible") return run_check_admissible(cfg);
        if (cfg.subcommand == "transport") return run_transport(cfg);
        if (cfg.subcommand == "solve") return run_solve(cfg);
        if (cfg.subcommand == "lemma1") return run_lemma1(cfg);
        if (cfg.subcommand == "poincare") return run_poincare(cfg);
        if (cfg.subcommand == "energy-identity") return run_energy_identity(cfg);
        if (cfg.subcommand == "convergence") return run_convergence(cfg);
        std::cerr << "unknown subcommand '" << cfg.subcommand << "'\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"mtp: verification workflows for mixed-type cold-plasma boundary value problems"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (overrides flags)");

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--domain", cfg.domain_path, "domain JSON path");
        sub->add_option("--builtin", cfg.domain_builtin, "builtin domain: cc-example | box");
        sub->add_option("--M", cfg.cc.M, "cc-example multiplier constant");
        sub->add_option("--eps", cfg.cc.eps, "cc-example epsilon");
        sub->add_option("--delta0", cfg.cc.delta0, "corner smoothing size");
        sub->add_option("--delta1", cfg.cc.delta1, "junction smoothing size");
        sub->add_option("--K", cfg.k_form, "K form: parabolic | zero-sigma");
        sub->add_option("--multiplier", cfg.mult_kind, "multiplier kind: dilation | cc-example");
        sub->add_option("--m", cfg.m, "dilation m");
        sub->add_option("--mu", cfg.mu, "dilation mu");
        sub->add_option("--delta", cfg.delta, "dilation delta");
        sub->add_option("--kappa1", cfg.kappa1, "zeroth-order kappa1");
        sub->add_option("--kappa2", cfg.kappa2, "zeroth-order kappa2");
        sub->add_option("--variant", cfg.variant, "system variant: standard | PF");
        sub->add_option("--h", cfg.h, "mesh size");
        sub->add_option("--quad", cfg.n_quad, "boundary quadrature nodes per arc");
        sub->add_option("--interior", cfg.n_interior, "interior sample count");
        sub->add_option("--trials", cfg.n_trials, "random trial count");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--forcing", cfg.forcing_kind, "forcing kind: bump | csv | zero");
        sub->add_option("--forcing-csv", cfg.forcing_csv, "forcing CSV path");
        sub->add_option("--meshes", cfg.mesh_hs, "mesh sizes for convergence");
    };

    const char* names[] = {"example-cc", "classify",  "check-spd", "check-admissible", "transport",
                           "solve",      "lemma1",    "poincare",  "energy-identity",  "convergence"};
    for (const char* n : names) add_common(app.add_subcommand(n));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config '" << config_path << "'\n";
            return kExitUsage;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            RunConfig file_cfg = parse_config_json(ss.str());
            if (!app.get_subcommands().empty() && file_cfg.subcommand.empty())
                file_cfg.subcommand = app.get_subcommands().front()->get_name();
            return run(file_cfg);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    return run(cfg);
}

}  // namespace mtp
