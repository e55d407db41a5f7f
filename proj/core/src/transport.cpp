#include "mtp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mtp/parallel.hpp"

namespace mtp {

namespace {

struct FlowState {
    Vec2 p;
    double extra = 0.0;  // path integral (solve) or v value (along-flow)
};

/// One classical RK4 step of p' = dir (b,c), extra' = g(s, p, extra).
template <typename G>
FlowState rk4_step(const MultiplierField& mf, double dir, const G& g, double s, FlowState st,
                   double h) {
    auto f = [&](double si, FlowState x) -> FlowState {
        auto e = mf.eval(x.p);
        return {{dir * e.b, dir * e.c}, g(si, x)};
    };
    FlowState k1 = f(s, st);
    FlowState k2 = f(s + 0.5 * h, {st.p + k1.p * (0.5 * h), st.extra + 0.5 * h * k1.extra});
    FlowState k3 = f(s + 0.5 * h, {st.p + k2.p * (0.5 * h), st.extra + 0.5 * h * k2.extra});
    FlowState k4 = f(s + h, {st.p + k3.p * h, st.extra + h * k3.extra});
    FlowState out;
    out.p = st.p + (k1.p + k2.p * 2.0 + k3.p * 2.0 + k4.p) * (h / 6.0);
    out.extra = st.extra + (k1.extra + 2.0 * k2.extra + 2.0 * k3.extra + k4.extra) * (h / 6.0);
    return out;
}

template <typename G>
double step_error(const MultiplierField& mf, double dir, const G& g, double s, const FlowState& st,
                  double h, FlowState& accepted) {
    FlowState full = rk4_step(mf, dir, g, s, st, h);
    FlowState half = rk4_step(mf, dir, g, s, st, 0.5 * h);
    half = rk4_step(mf, dir, g, s + 0.5 * h, half, 0.5 * h);
    double err = std::max({std::abs(full.p.x - half.p.x) / (1.0 + std::abs(half.p.x)),
                           std::abs(full.p.y - half.p.y) / (1.0 + std::abs(half.p.y)),
                           std::abs(full.extra - half.extra) / (1.0 + std::abs(half.extra))});
    // Local extrapolation of the two half steps.
    accepted.p = half.p + (half.p - full.p) / 15.0;
    accepted.extra = half.extra + (half.extra - full.extra) / 15.0;
    return err / 15.0;
}

double initial_step(const MultiplierField& mf, Vec2 p, const TrajectoryOptions& opt) {
    auto e = mf.eval(p);
    double speed = std::hypot(e.b, e.c) + 1e-30;
    double bound = opt.max_move;
    if (opt.cell_size > 0.0) bound = std::min(bound, opt.cell_size);
    return bound / speed;
}

}  // namespace

Trajectory trace_trajectory(const MultiplierField& mf, const Domain& dom, Vec2 p0, int direction,
                            const TrajectoryOptions& opt) {
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("trace_trajectory: direction must be +1 or -1");
    if (!dom.contains(p0))
        throw std::invalid_argument("trace_trajectory: start point outside the closed domain");

    Trajectory tr;
    tr.points.push_back(p0);
    tr.times.push_back(0.0);

    auto g_zero = [](double, const FlowState&) { return 0.0; };
    double dir = static_cast<double>(direction);
    FlowState st{p0, 0.0};
    double s = 0.0;
    double h = initial_step(mf, p0, opt);

    while (s < opt.t_cap) {
        h = std::min(h, opt.t_cap - s);
        FlowState next;
        double err = step_error(mf, dir, g_zero, s, st, h, next);
        if (err > opt.rel_tol && h > 1e-15) {
            h *= 0.5;
            continue;
        }
        // Cap the move length.
        double move = (next.p - st.p).norm();
        double bound = opt.cell_size > 0.0 ? std::min(opt.max_move, opt.cell_size) : opt.max_move;
        if (move > bound && h > 1e-15) {
            h *= 0.5;
            continue;
        }

        if (!dom.contains(next.p)) {
            // Bisect the step length down to the boundary crossing.
            double lo = 0.0, hi = h;
            auto e = mf.eval(st.p);
            double speed = std::hypot(e.b, e.c) + 1e-30;
            FlowState at_lo = st;
            for (int it = 0; it < 200 && (hi - lo) * speed > opt.exit_tol; ++it) {
                double mid = 0.5 * (lo + hi);
                FlowState trial = rk4_step(mf, dir, g_zero, s, st, mid);
                if (dom.contains(trial.p)) {
                    lo = mid;
                    at_lo = trial;
                } else {
                    hi = mid;
                }
            }
            tr.exited = true;
            tr.exit_point = at_lo.p;
            tr.exit_time = s + lo;
            tr.points.push_back(at_lo.p);
            tr.times.push_back(s + lo);
            return tr;
        }

        st = next;
        s += h;
        tr.points.push_back(st.p);
        tr.times.push_back(s);
        if (err < 0.1 * opt.rel_tol) h *= 2.0;
    }
    tr.capped = true;
    return tr;
}

double characteristic_invariant(const MultiplierField& mf, Vec2 p) {
    if (mf.kind() != MultiplierField::Kind::Dilation)
        throw std::invalid_argument("characteristic_invariant: requires the dilation field");
    if (p.y == 0.0) throw std::domain_error("characteristic_invariant: undefined on y = 0");
    double num = std::pow(std::abs(p.x), mf.mu());
    double den = std::pow(std::abs(p.y), mf.m());
    return num / den;
}

TransportResult solve_transport(const MultiplierField& mf, const Domain& dom, const Grid& grid,
                                std::span<const double> u_lattice, const TrajectoryOptions& opt_in) {
    if (u_lattice.size() != static_cast<size_t>(grid.nx()) * grid.ny())
        throw std::invalid_argument("solve_transport: u must be a full-lattice field");
    TrajectoryOptions opt = opt_in;
    if (opt.cell_size == 0.0) opt.cell_size = grid.h();

    TransportResult out;
    out.v.assign(u_lattice.size(), 0.0);
    const double a = mf.a();
    std::vector<int> capped(grid.n_active(), 0);

    parallel_for(grid.n_active(), [&](int k) {
        auto [i, j] = grid.active_nodes()[k];
        Vec2 p0 = grid.node(i, j);
        auto g_int = [&](double s, const FlowState& x) {
            return std::exp(a * s) * grid.interpolate(u_lattice, x.p);
        };

        FlowState st{p0, 0.0};
        double s = 0.0;
        double h = initial_step(mf, p0, opt);
        bool done = false;
        while (s < opt.t_cap) {
            h = std::min(h, opt.t_cap - s);
            FlowState next;
            double err = step_error(mf, +1.0, g_int, s, st, h, next);
            if (err > opt.rel_tol && h > 1e-15) {
                h *= 0.5;
                continue;
            }
            double move = (next.p - st.p).norm();
            double bound = std::min(opt.max_move, opt.cell_size);
            if (move > bound && h > 1e-15) {
                h *= 0.5;
                continue;
            }
            if (!dom.contains(next.p)) {
                double lo = 0.0, hi = h;
                FlowState at_lo = st;
                auto e = mf.eval(st.p);
                double speed = std::hypot(e.b, e.c) + 1e-30;
                for (int it = 0; it < 200 && (hi - lo) * speed > opt.exit_tol; ++it) {
                    double mid = 0.5 * (lo + hi);
                    FlowState trial = rk4_step(mf, +1.0, g_int, s, st, mid);
                    if (dom.contains(trial.p)) {
                        lo = mid;
                        at_lo = trial;
                    } else {
                        hi = mid;
                    }
                }
                st = at_lo;
                done = true;
                break;
            }
            st = next;
            s += h;
            if (err < 0.1 * opt.rel_tol) h *= 2.0;
        }
        if (!done) capped[k] = 1;
        out.v[grid.lattice_index(i, j)] = -st.extra;
    });

    for (int c : capped) out.n_capped += c;
    return out;
}

double homogeneous_closed_form(const std::function<double(double)>& phi, double m, double mu,
                               double a, Vec2 p) {
    if (!(m > 0.0) || !(mu > 0.0))
        throw std::invalid_argument("homogeneous_closed_form: m, mu must be positive");
    if (p.y == 0.0) throw std::domain_error("homogeneous_closed_form: y = 0");
    double expo = std::abs(a) / mu;
    if (p.y < 0.0 && expo != std::floor(expo))
        throw std::domain_error("homogeneous_closed_form: y^(|a|/mu) undefined for y < 0");
    if (p.x < 0.0 && mu != std::floor(mu))
        throw std::domain_error("homogeneous_closed_form: x^mu undefined for x < 0");
    double s = std::pow(p.x, mu) / std::pow(p.y, m);
    return phi(s) * std::pow(p.y, expo);
}

std::vector<PathSample> integrate_along_flow(const MultiplierField& mf, Vec2 p0, double v0,
                                             const std::function<double(Vec2)>& u,
                                             std::span<const double> s_values,
                                             const TrajectoryOptions& opt) {
    const double a = mf.a();
    auto g_ode = [&](double, const FlowState& x) { return u(x.p) - a * x.extra; };

    std::vector<PathSample> samples;
    FlowState st{p0, v0};
    double s = 0.0;
    for (double target : s_values) {
        if (target < s)
            throw std::invalid_argument("integrate_along_flow: s_values must be ascending");
        while (s < target) {
            double h = std::min(initial_step(mf, st.p, opt), target - s);
            for (;;) {
                FlowState next;
                double err = step_error(mf, +1.0, g_ode, s, st, h, next);
                if (err > opt.rel_tol && h > 1e-15) {
                    h *= 0.5;
                    continue;
                }
                st = next;
                s += h;
                break;
            }
        }
        samples.push_back({s, st.p, st.extra});
    }
    return samples;
}

OriginLimitReport verify_origin_limit(const std::function<double(Vec2)>& v, double m, double mu,
                                      std::span<const double> curve_constants, double r0,
                                      int n_shells, double tol) {
    if (!(r0 > 0.0) || n_shells < 2)
        throw std::invalid_argument("verify_origin_limit: need r0 > 0 and >= 2 shells");
    OriginLimitReport rep;
    rep.tol = tol;
    double expo = mu / m;
    double r = r0;
    for (int k = 0; k < n_shells; ++k, r *= 0.5) {
        double worst = 0.0;
        for (double C : curve_constants) {
            // x on the curve y = C x^{mu/m} at distance r from the origin.
            auto f = [&](double x) { return x * x + C * C * std::pow(x, 2.0 * expo) - r * r; };
            double lo = 0.0, hi = r;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                (f(mid) < 0.0 ? lo : hi) = mid;
            }
            double x = 0.5 * (lo + hi);
            Vec2 p{x, C * std::pow(x, expo)};
            worst = std::max(worst, std::abs(v(p)));
        }
        rep.radii.push_back(r);
        rep.shell_max.push_back(worst);
    }
    bool mono = true;
    for (size_t k = 1; k < rep.shell_max.size(); ++k)
        if (rep.shell_max[k] > rep.shell_max[k - 1] + 1e-12) mono = false;
    rep.pass = mono && rep.shell_max.back() <= tol;
    return rep;
}

EnergyIdentityTerms energy_identity_terms(const Grid& grid, std::span<const double> v_lattice,
                                          const EnergyCoefficients& ec, const MultiplierField& mf,
                                          const TypeChangeCoefficient& tc, const Domain& dom,
                                          int n_boundary_quad) {
    const int nx = grid.nx(), ny = grid.ny();
    if (v_lattice.size() != static_cast<size_t>(nx) * ny)
        throw std::invalid_argument("energy_identity_terms: v must be a full-lattice field");
    const double h = grid.h();
    auto at = [&](int i, int j) { return v_lattice[grid.lattice_index(i, j)]; };

    // Nodal central differences and the transported field w = H v.
    std::vector<double> vx(v_lattice.size(), 0.0), vy(v_lattice.size(), 0.0),
        w(v_lattice.size(), 0.0);
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            size_t idx = grid.lattice_index(i, j);
            vx[idx] = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
            vy[idx] = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
            auto f = mf.eval(grid.node(i, j));
            w[idx] = f.a * at(i, j) + f.b * vx[idx] + f.c * vy[idx];
        }
    }

    EnergyIdentityTerms out;
    out.min_boundary_integrand = std::numeric_limits<double>::infinity();

    // Cell-center derivative of a nodal field from its four cell corners.
    auto cell_dx = [&](std::span<const double> fld, int ci, int cj) {
        return (fld[grid.lattice_index(ci + 1, cj)] + fld[grid.lattice_index(ci + 1, cj + 1)] -
                fld[grid.lattice_index(ci, cj)] - fld[grid.lattice_index(ci, cj + 1)]) /
               (2.0 * h);
    };
    auto cell_dy = [&](std::span<const double> fld, int ci, int cj) {
        return (fld[grid.lattice_index(ci, cj + 1)] + fld[grid.lattice_index(ci + 1, cj + 1)] -
                fld[grid.lattice_index(ci, cj)] - fld[grid.lattice_index(ci + 1, cj)]) /
               (2.0 * h);
    };

    for (int cj = 0; cj < ny - 1; ++cj) {
        for (int ci = 0; ci < nx - 1; ++ci) {
            if (!grid.cell_active(ci, cj)) continue;
            Vec2 c{grid.origin().x + (ci + 0.5) * h, grid.origin().y + (cj + 0.5) * h};
            double K = tc.k(c);
            double vxc = cell_dx(v_lattice, ci, cj);
            double vyc = cell_dy(v_lattice, ci, cj);
            double wxc = cell_dx(w, ci, cj);
            double wyc = cell_dy(w, ci, cj);
            out.lhs += -(K * wxc * vxc + wyc * vyc) * h * h;
            out.interior += (ec.alpha(tc, c) * vxc * vxc + ec.gamma * vyc * vyc) * h * h;
        }
    }

    // Contour term with bilinear samples of the nodal derivative fields.
    int per_arc = std::max(16, n_boundary_quad / static_cast<int>(dom.arcs().size()));
    for (const auto& arc : dom.arcs()) {
        double dt = 1.0 / per_arc;
        for (int i = 0; i < per_arc; ++i) {
            double t = (i + 0.5) * dt;
            Vec2 p = arc.position(t);
            Vec2 vel = arc.velocity(t);
            double vxb = grid.interpolate(vx, p);
            double vyb = grid.interpolate(vy, p);
            auto f = mf.eval(p);
            double K = tc.k(p);
            double density = (K * vxb * vxb + vyb * vyb) * (f.c * vel.x - f.b * vel.y);
            out.boundary += 0.5 * density * dt;
            out.min_boundary_integrand = std::min(out.min_boundary_integrand, density);
        }
    }

    out.defect = std::abs(out.lhs - out.boundary - out.interior);
    return out;
}

}  // namespace mtp
