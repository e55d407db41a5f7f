#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mtp/coefficients.hpp"
#include "mtp/geometry.hpp"
#include "mtp/solver.hpp"

namespace mtp {

struct TrajectoryOptions {
    double t_cap = 60.0;       // flow-time cap
    double rel_tol = 1e-10;    // step-doubling error target
    double max_move = 0.1;     // largest position change per step
    double cell_size = 0.0;    // additional per-step position bound (0 = off)
    double exit_tol = 1e-10;   // bisection tolerance on the exit point
};

struct Trajectory {
    std::vector<Vec2> points;
    std::vector<double> times;
    bool exited = false;
    Vec2 exit_point;
    double exit_time = 0.0;
    bool capped = false;
};

/// Integrates d(x,y)/ds = +-(b,c) from p0 until the path leaves the closed
/// domain (forward outflow) or the time cap is reached (backward paths of a
/// star-shaped domain never exit; the cap is reported).
Trajectory trace_trajectory(const MultiplierField& mf, const Domain& dom, Vec2 p0, int direction,
                            const TrajectoryOptions& opt = {});

/// Flow invariant x^mu / y^m of the dilation field (b,c) = (m x, mu y).
double characteristic_invariant(const MultiplierField& mf, Vec2 p);

struct TransportResult {
    std::vector<double> v;  // full lattice, zero off the mask
    int n_capped = 0;       // nodes whose trajectory hit the time cap
};

/// Solves H v = a v + b v_x + c v_y = u with v = 0 at the outflow boundary:
/// each node is traced forward to its exit point and
/// v(p) = -int_0^S e^{a s} u(path(s)) ds accumulated along the way, with u
/// interpolated bilinearly from the lattice.
TransportResult solve_transport(const MultiplierField& mf, const Domain& dom, const Grid& grid,
                                std::span<const double> u_lattice,
                                const TrajectoryOptions& opt = {});

/// v(x,y) = phi(x^mu / y^m) * y^{|a|/mu}; requires y != 0 (and y > 0 unless
/// the exponent is an integer).
double homogeneous_closed_form(const std::function<double(double)>& phi, double m, double mu,
                               double a, Vec2 p);

struct PathSample {
    double s = 0.0;
    Vec2 p;
    double v = 0.0;
};

/// Values of v along the forward flow from p0 with initial value v0, where v
/// obeys dv/ds = u - a v along trajectories. Samples are returned at the
/// requested flow times (ascending).
std::vector<PathSample> integrate_along_flow(const MultiplierField& mf, Vec2 p0, double v0,
                                             const std::function<double(Vec2)>& u,
                                             std::span<const double> s_values,
                                             const TrajectoryOptions& opt = {});

struct OriginLimitReport {
    std::vector<double> radii;
    std::vector<double> shell_max;
    bool pass = false;
    double tol = 0.0;
};

/// Max |v| on shrinking radius shells, with the shell points taken where the
/// curves y = C x^{mu/m} (one per constant) cross each radius.
OriginLimitReport verify_origin_limit(const std::function<double(Vec2)>& v, double m, double mu,
                                      std::span<const double> curve_constants, double r0,
                                      int n_shells, double tol);

struct EnergyIdentityTerms {
    double lhs = 0.0;       // (v, L H v) in weak form
    double boundary = 0.0;  // (1/2) contour integral of (K v_x^2 + v_y^2)(c dx - b dy)
    double interior = 0.0;  // integral of alpha v_x^2 + gamma v_y^2
    double defect = 0.0;    // |lhs - boundary - interior|
    double min_boundary_integrand = 0.0;
};

/// Midpoint-quadrature evaluation of the three energy-identity terms for a
/// nodal field v (full lattice, zero outside the mask). Derivatives are
/// central differences; the contour term samples them bilinearly.
EnergyIdentityTerms energy_identity_terms(const Grid& grid, std::span<const double> v_lattice,
                                          const EnergyCoefficients& ec, const MultiplierField& mf,
                                          const TypeChangeCoefficient& tc, const Domain& dom,
                                          int n_boundary_quad = 2048);

}  // namespace mtp
