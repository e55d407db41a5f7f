#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtp/geo2.hpp"
#include "mtp/geometry.hpp"

namespace mtp {

/// Parsed run configuration. Exit contract of run(): 0 all checks pass /
/// solve converged, 1 configuration or usage error, 2 check failure.
struct RunConfig {
    std::string subcommand;

    // Domain: a JSON file, or a builtin.
    std::string domain_path;                  // non-empty wins
    std::string domain_builtin = "cc-example";  // "cc-example" | "box"
    CcExampleParams cc;
    Vec2 box_lo{0.0, -0.5};
    Vec2 box_hi{1.0, 0.5};

    // Coefficients.
    std::string k_form = "zero-sigma";  // "parabolic" | "zero-sigma"
    std::string mult_kind = "cc-example";  // "dilation" | "cc-example"
    double m = 4.0, mu = 1.0, delta = 0.25;
    double kappa1 = 1.0, kappa2 = 0.0;
    std::string variant = "standard";  // "standard" | "PF"

    // Discretization and sampling.
    double h = 1.0 / 32.0;
    int n_quad = 200;
    int n_interior = 2000;
    int n_trials = 16;
    std::vector<double> mesh_hs{1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};

    // Forcing / source term.
    std::string forcing_kind = "bump";  // "bump" | "csv" | "zero"
    double bump_cx = 0.22, bump_cy = 0.26, bump_r = 0.2, bump_amp = 1.0;
    std::string forcing_csv;

    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

RunConfig parse_config_json(const std::string& text);

/// Dispatches the subcommand and writes the report artifacts under out_dir.
int run(const RunConfig& cfg);

/// argv front end (flags or --config <path>).
int cli_main(int argc, char** argv);

}  // namespace mtp
