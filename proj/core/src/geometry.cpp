#include "mtp/geometry.hpp"

#include "arc_builders.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mtp {

Vec2 flow_map(const DilationExponents& e, double t, Vec2 p) {
    if (t < 0.0) throw std::invalid_argument("flow_map: t must be >= 0");
    return {p.x * std::exp(-e.alpha_d * t), p.y * std::exp(-e.beta_d * t)};
}

std::string to_string(ArcClass c) {
    switch (c) {
        case ArcClass::Elliptic: return "elliptic";
        case ArcClass::EllipticSmoothing: return "elliptic-smoothing";
        case ArcClass::Sonic: return "sonic";
        case ArcClass::Characteristic: return "characteristic";
        case ArcClass::HyperbolicNoncharacteristic: return "hyperbolic-noncharacteristic";
    }
    return "?";
}

ArcClass arc_class_from_string(const std::string& s) {
    if (s == "elliptic") return ArcClass::Elliptic;
    if (s == "elliptic-smoothing") return ArcClass::EllipticSmoothing;
    if (s == "sonic") return ArcClass::Sonic;
    if (s == "characteristic") return ArcClass::Characteristic;
    if (s == "hyperbolic-noncharacteristic") return ArcClass::HyperbolicNoncharacteristic;
    throw std::invalid_argument("unknown arc class: " + s);
}

BoundaryArc::BoundaryArc(std::function<Vec2(double)> pos, std::function<Vec2(double)> vel,
                         ArcClass cls, std::string name, ArcDescriptor desc)
    : pos_(std::move(pos)), vel_(std::move(vel)), cls_(cls), name_(std::move(name)),
      desc_(std::move(desc)) {
    if (!pos_ || !vel_) throw std::invalid_argument("BoundaryArc: null parametrization");
}

Vec2 BoundaryArc::unit_tangent(double t) const {
    Vec2 v = vel_(t);
    double n = v.norm();
    if (n == 0.0)
        throw std::domain_error("BoundaryArc::unit_tangent: degenerate (zero-length) tangent on arc '" +
                                name_ + "'");
    return v / n;
}

BoundaryArc BoundaryArc::restrict(double t0, double t1, ArcClass cls, std::string name) const {
    if (!(t0 < t1) || t0 < 0.0 || t1 > 1.0)
        throw std::invalid_argument("BoundaryArc::restrict: need 0 <= t0 < t1 <= 1");
    auto base_pos = pos_;
    auto base_vel = vel_;
    double span = t1 - t0;
    ArcDescriptor d = desc_;
    double abs_t0 = desc_.t0 + t0 * (desc_.t1 - desc_.t0);
    double abs_t1 = desc_.t0 + t1 * (desc_.t1 - desc_.t0);
    d.t0 = abs_t0;
    d.t1 = abs_t1;
    return BoundaryArc(
        [base_pos, t0, span](double t) { return base_pos(t0 + t * span); },
        [base_vel, t0, span](double t) { return base_vel(t0 + t * span) * span; },
        cls, std::move(name), std::move(d));
}

Vec2 outward_normal(const BoundaryArc& arc, double t) {
    Vec2 tang = arc.unit_tangent(t);
    return {tang.y, -tang.x};
}

namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * s)).norm();
}

}  // namespace

Domain::Domain(std::vector<BoundaryArc> arcs, int polygon_resolution)
    : arcs_(std::move(arcs)), resolution_(std::max(polygon_resolution, 64)) {
    if (arcs_.empty()) throw std::invalid_argument("Domain: no arcs");

    const double kJoinTol = 1e-10;
    const int n_arcs = static_cast<int>(arcs_.size());
    for (int i = 0; i < n_arcs; ++i) {
        Vec2 end = arcs_[i].position(1.0);
        Vec2 next = arcs_[(i + 1) % n_arcs].position(0.0);
        if ((end - next).norm() > kJoinTol) {
            std::ostringstream os;
            os << "Domain: arcs '" << arcs_[i].name() << "' and '"
               << arcs_[(i + 1) % n_arcs].name() << "' do not join: gap "
               << (end - next).norm();
            throw std::invalid_argument(os.str());
        }
    }

    // Distribute polygon segments over arcs proportionally to estimated length.
    std::vector<double> lengths(n_arcs, 0.0);
    double total = 0.0;
    for (int i = 0; i < n_arcs; ++i) {
        Vec2 prev = arcs_[i].position(0.0);
        for (int j = 1; j <= 64; ++j) {
            Vec2 q = arcs_[i].position(j / 64.0);
            lengths[i] += (q - prev).norm();
            prev = q;
        }
        total += lengths[i];
    }
    if (total == 0.0) throw std::invalid_argument("Domain: degenerate boundary");

    for (int i = 0; i < n_arcs; ++i) {
        int n_seg = std::max(8, static_cast<int>(std::lround(resolution_ * lengths[i] / total)));
        for (int j = 0; j < n_seg; ++j) {
            polygon_.push_back(arcs_[i].position(static_cast<double>(j) / n_seg));
            polygon_arc_.push_back(i);
        }
    }

    bounds_.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    bounds_.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Vec2 p : polygon_) {
        bounds_.lo.x = std::min(bounds_.lo.x, p.x);
        bounds_.lo.y = std::min(bounds_.lo.y, p.y);
        bounds_.hi.x = std::max(bounds_.hi.x, p.x);
        bounds_.hi.y = std::max(bounds_.hi.y, p.y);
    }

    const int n = static_cast<int>(polygon_.size());
    for (int i = 0; i < n; ++i) {
        Vec2 a = polygon_[i];
        Vec2 b = polygon_[(i + 1) % n];
        signed_area_ += a.cross(b);
    }
    signed_area_ *= 0.5;
    if (signed_area_ <= 0.0)
        throw std::invalid_argument("Domain: boundary must be counterclockwise (signed area > 0)");

    build_raster();
}

int Domain::winding_number(Vec2 p) const {
    int wn = 0;
    const int n = static_cast<int>(polygon_.size());
    for (int i = 0; i < n; ++i) {
        Vec2 a = polygon_[i];
        Vec2 b = polygon_[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && (b - a).cross(p - a) > 0.0) ++wn;
        } else {
            if (b.y <= p.y && (b - a).cross(p - a) < 0.0) --wn;
        }
    }
    return wn;
}

double Domain::distance_to_polygon(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(polygon_.size());
    for (int i = 0; i < n; ++i) {
        d = std::min(d, segment_distance(p, polygon_[i], polygon_[(i + 1) % n]));
    }
    return d;
}

void Domain::build_raster() {
    raster_n_ = 256;
    Vec2 span = bounds_.hi - bounds_.lo;
    double pad = 0.02 * std::max(span.x, span.y) + 1e-12;
    raster_lo_ = bounds_.lo - Vec2{pad, pad};
    Vec2 hi = bounds_.hi + Vec2{pad, pad};
    raster_cell_ = {(hi.x - raster_lo_.x) / raster_n_, (hi.y - raster_lo_.y) / raster_n_};

    raster_state_.assign(static_cast<size_t>(raster_n_) * raster_n_, -1);
    raster_edges_.assign(raster_state_.size(), {});

    auto cell_of = [&](Vec2 p) -> std::pair<int, int> {
        int i = static_cast<int>(std::floor((p.x - raster_lo_.x) / raster_cell_.x));
        int j = static_cast<int>(std::floor((p.y - raster_lo_.y) / raster_cell_.y));
        return {i, j};
    };
    auto idx = [&](int i, int j) { return j * raster_n_ + i; };

    // Mark every cell overlapped by a boundary edge (with a one-cell halo so
    // that closure-tolerance queries near the boundary land in gray cells).
    const int n = static_cast<int>(polygon_.size());
    for (int e = 0; e < n; ++e) {
        Vec2 a = polygon_[e];
        Vec2 b = polygon_[(e + 1) % n];
        auto [ia, ja] = cell_of(a);
        auto [ib, jb] = cell_of(b);
        int i0 = std::max(0, std::min(ia, ib) - 1), i1 = std::min(raster_n_ - 1, std::max(ia, ib) + 1);
        int j0 = std::max(0, std::min(ja, jb) - 1), j1 = std::min(raster_n_ - 1, std::max(ja, jb) + 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                raster_state_[idx(i, j)] = 2;
                raster_edges_[idx(i, j)].push_back(e);
            }
    }

    // Classify the remaining cells component by component with one winding
    // test per component.
    for (int j = 0; j < raster_n_; ++j) {
        for (int i = 0; i < raster_n_; ++i) {
            if (raster_state_[idx(i, j)] != -1) continue;
            Vec2 center{raster_lo_.x + (i + 0.5) * raster_cell_.x,
                        raster_lo_.y + (j + 0.5) * raster_cell_.y};
            signed char state = winding_number(center) != 0 ? 1 : 0;
            std::deque<std::pair<int, int>> queue{{i, j}};
            raster_state_[idx(i, j)] = state;
            while (!queue.empty()) {
                auto [ci, cj] = queue.front();
                queue.pop_front();
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int ni = ci + di[k], nj = cj + dj[k];
                    if (ni < 0 || nj < 0 || ni >= raster_n_ || nj >= raster_n_) continue;
                    if (raster_state_[idx(ni, nj)] != -1) continue;
                    raster_state_[idx(ni, nj)] = state;
                    queue.push_back({ni, nj});
                }
            }
        }
    }
}

bool Domain::contains(Vec2 p, double boundary_tol) const {
    if (p.x < raster_lo_.x || p.y < raster_lo_.y ||
        p.x >= raster_lo_.x + raster_n_ * raster_cell_.x ||
        p.y >= raster_lo_.y + raster_n_ * raster_cell_.y) {
        return false;
    }
    int i = static_cast<int>(std::floor((p.x - raster_lo_.x) / raster_cell_.x));
    int j = static_cast<int>(std::floor((p.y - raster_lo_.y) / raster_cell_.y));
    i = std::clamp(i, 0, raster_n_ - 1);
    j = std::clamp(j, 0, raster_n_ - 1);
    signed char state = raster_state_[static_cast<size_t>(j) * raster_n_ + i];
    if (state == 0) return false;
    if (state == 1) return true;

    if (winding_number(p) != 0) return true;
    // Outside by winding; closure semantics admit points within tol of the
    // boundary. Only edges bucketed near this cell can be that close.
    const auto& local = raster_edges_[static_cast<size_t>(j) * raster_n_ + i];
    const int n = static_cast<int>(polygon_.size());
    for (int e : local) {
        if (segment_distance(p, polygon_[e], polygon_[(e + 1) % n]) <= boundary_tol) return true;
    }
    return false;
}

double Domain::signed_distance(Vec2 p) const {
    double d = distance_to_polygon(p);
    return winding_number(p) != 0 ? d : -d;
}

bool point_in_domain(const Domain& dom, Vec2 p) { return dom.contains(p); }

StarShapedReport check_star_shaped(const Domain& dom, const DilationExponents& e,
                                   int n_boundary_samples, int n_time_samples, double t_max,
                                   double tol) {
    if (n_boundary_samples < 1 || n_time_samples < 2)
        throw std::invalid_argument("check_star_shaped: need >= 1 boundary and >= 2 time samples");
    StarShapedReport rep;
    rep.worst_signed_distance = std::numeric_limits<double>::infinity();

    const auto& poly = dom.polygon();
    const int np = static_cast<int>(poly.size());
    for (int s = 0; s < n_boundary_samples; ++s) {
        Vec2 p0 = poly[static_cast<size_t>(s) * np / n_boundary_samples];
        for (int k = 0; k < n_time_samples; ++k) {
            double t = t_max * static_cast<double>(k) / (n_time_samples - 1);
            Vec2 q = flow_map(e, t, p0);
            double sd = dom.signed_distance(q);
            if (sd < rep.worst_signed_distance) {
                rep.worst_signed_distance = sd;
                rep.worst_point = q;
                rep.worst_start = p0;
                rep.worst_time = t;
            }
            if (sd < -tol && !rep.has_escape) {
                rep.has_escape = true;
                rep.escape_start = p0;
                rep.escape_time = t;
            }
        }
    }
    rep.pass = !rep.has_escape;
    return rep;
}

StarlikeReport check_starlike_arc(const BoundaryArc& arc, const MultiplierField& mf,
                                  StarlikeSense sense, int n_quad, double tol) {
    if (n_quad < 1) throw std::invalid_argument("check_starlike_arc: n_quad >= 1");
    StarlikeReport rep;
    rep.n_nodes = n_quad;
    rep.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_quad; ++i) {
        double t = (i + 0.5) / n_quad;
        Vec2 p = arc.position(t);
        Vec2 n = outward_normal(arc, t);
        auto f = mf.eval(p);
        double v = 0.0;
        switch (sense) {
            case StarlikeSense::NonNegative: v = f.b * n.x + f.c * n.y; break;
            case StarlikeSense::NonPositive: v = -(f.b * n.x + f.c * n.y); break;
            case StarlikeSense::FlippedB: v = -f.b * n.x + f.c * n.y; break;
        }
        if (v < rep.margin) {
            rep.margin = v;
            rep.worst_t = t;
            rep.worst_point = p;
        }
    }
    rep.pass = rep.margin >= -tol;
    return rep;
}

CharacteristicCurve characteristic_curve(const TypeChangeCoefficient& tc, Vec2 p0, int branch,
                                         const CharacteristicStepControl& ctl) {
    if (branch != 1 && branch != -1)
        throw std::invalid_argument("characteristic_curve: branch must be +1 or -1");
    double k0 = tc.k(p0);
    if (!(k0 < 0.0))
        throw std::invalid_argument("characteristic_curve: start point must be hyperbolic (K < 0)");

    CharacteristicCurve out;
    out.points.push_back(p0);

    // dx/dy = -branch * sqrt(-K); the curve advances with dy of sign -branch,
    // so x is nondecreasing toward the sonic curve.
    auto slope = [&](double x, double y) {
        double mk = -tc.k({x, y});
        return -branch * std::sqrt(std::max(0.0, mk));
    };
    auto rk4 = [&](double x, double y, double dy) {
        double k1 = slope(x, y);
        double k2 = slope(x + 0.5 * dy * k1, y + 0.5 * dy);
        double k3 = slope(x + 0.5 * dy * k2, y + 0.5 * dy);
        double k4 = slope(x + dy * k3, y + dy);
        return x + dy / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    double x = p0.x, y = p0.y;
    double h = std::abs(ctl.h0);
    const double dir = -static_cast<double>(branch);

    for (int step = 0; step < ctl.max_steps; ++step) {
        double mk = -tc.k({x, y});
        if (mk < ctl.k_stop) {
            // Project the final vertex onto the sonic curve.
            Vec2 last = out.points.back();
            Vec2 end{tc.sigma(y), y};
            if ((end - last).norm() > 0.0) out.points.push_back(end);
            out.reached_sonic = true;
            return out;
        }
        if (ctl.box_lo && ctl.box_hi) {
            if (x < ctl.box_lo->x || y < ctl.box_lo->y || x > ctl.box_hi->x || y > ctl.box_hi->y) {
                out.note = "left clipping box";
                return out;
            }
        }

        double dy = dir * h;
        double x_full = rk4(x, y, dy);
        double x_half = rk4(x, y, 0.5 * dy);
        x_half = rk4(x_half, y + 0.5 * dy, 0.5 * dy);
        double err = std::abs(x_full - x_half) / 15.0;
        double scale = ctl.tol * (1.0 + std::abs(x));
        bool overshoot = tc.k({x_half, y + dy}) > 0.0;
        if ((err <= scale && !overshoot) || h <= ctl.min_step) {
            if (h <= ctl.min_step && (err > scale || overshoot)) {
                out.note = "step-size underflow near the sonic curve";
                return out;
            }
            x = x_half + (x_half - x_full) / 15.0;
            y += dy;
            if (tc.k({x, y}) > 0.0) x = tc.sigma(y);  // clamp round-off overshoot
            out.points.push_back({x, y});
            if (err < 0.1 * scale) h = std::min(2.0 * h, std::abs(ctl.h0) * 100.0);
        } else {
            h = std::max(0.5 * h, ctl.min_step);
        }
    }
    out.note = "step cap reached";
    return out;
}

namespace detail {

BoundaryArc segment_arc(Vec2 a, Vec2 b, ArcClass cls, std::string name) {
    ArcDescriptor d;
    d.kind = "segment";
    d.points = {a, b};
    return BoundaryArc([a, b](double t) { return a + (b - a) * t; },
                       [a, b](double) { return b - a; }, cls, std::move(name), std::move(d));
}

BoundaryArc circle_arc(Vec2 center, double r, double phi0, double phi1, ArcClass cls,
                       std::string name) {
    ArcDescriptor d;
    d.kind = "circle";
    d.params = {{"cx", center.x}, {"cy", center.y}, {"r", r}, {"phi0", phi0}, {"phi1", phi1}};
    auto pos = [=](double t) {
        double phi = phi0 + t * (phi1 - phi0);
        return Vec2{center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
    };
    auto vel = [=](double t) {
        double phi = phi0 + t * (phi1 - phi0);
        double dphi = phi1 - phi0;
        return Vec2{-r * std::sin(phi) * dphi, r * std::cos(phi) * dphi};
    };
    return BoundaryArc(pos, vel, cls, std::move(name), std::move(d));
}

BoundaryArc hermite_arc(Vec2 p0, Vec2 m0, Vec2 p1, Vec2 m1, ArcClass cls, std::string name) {
    ArcDescriptor d;
    d.kind = "hermite";
    d.points = {p0, m0, p1, m1};
    auto pos = [=](double t) {
        double t2 = t * t, t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1;
        double h10 = t3 - 2 * t2 + t;
        double h01 = -2 * t3 + 3 * t2;
        double h11 = t3 - t2;
        return p0 * h00 + m0 * h10 + p1 * h01 + m1 * h11;
    };
    auto vel = [=](double t) {
        double t2 = t * t;
        double g00 = 6 * t2 - 6 * t;
        double g10 = 3 * t2 - 4 * t + 1;
        double g01 = -6 * t2 + 6 * t;
        double g11 = 3 * t2 - 2 * t;
        return p0 * g00 + m0 * g10 + p1 * g01 + m1 * g11;
    };
    return BoundaryArc(pos, vel, cls, std::move(name), std::move(d));
}

/// y = -branch * 2(sqrt(-x) - 2) written as x(y) = -(2 - s y/2)^2 with s = branch.
BoundaryArc cc_characteristic_arc(int s, double y0, double y1, std::string name) {
    ArcDescriptor d;
    d.kind = "cc-characteristic";
    d.params = {{"s", static_cast<double>(s)}, {"y0", y0}, {"y1", y1}};
    auto pos = [=](double t) {
        double y = y0 + t * (y1 - y0);
        double w = 2.0 - s * y / 2.0;
        return Vec2{-w * w, y};
    };
    auto vel = [=](double t) {
        double y = y0 + t * (y1 - y0);
        double dy = y1 - y0;
        double w = 2.0 - s * y / 2.0;
        return Vec2{s * w * dy, dy};
    };
    return BoundaryArc(pos, vel, ArcClass::Characteristic, std::move(name), std::move(d));
}

BoundaryArc polyline_arc(std::vector<Vec2> pts, ArcClass cls, std::string name) {
    if (pts.size() < 2) throw std::invalid_argument("polyline_arc: need >= 2 points");
    ArcDescriptor d;
    d.kind = "polyline";
    d.points = pts;
    const int n_seg = static_cast<int>(pts.size()) - 1;
    auto pos = [pts, n_seg](double t) {
        double s = std::clamp(t, 0.0, 1.0) * n_seg;
        int i = std::min(static_cast<int>(s), n_seg - 1);
        double f = s - i;
        return pts[i] + (pts[i + 1] - pts[i]) * f;
    };
    auto vel = [pts, n_seg](double t) {
        double s = std::clamp(t, 0.0, 1.0) * n_seg;
        int i = std::min(static_cast<int>(s), n_seg - 1);
        return (pts[i + 1] - pts[i]) * static_cast<double>(n_seg);
    };
    return BoundaryArc(pos, vel, cls, std::move(name), std::move(d));
}

}  // namespace detail

namespace {

using detail::cc_characteristic_arc;
using detail::circle_arc;
using detail::hermite_arc;
using detail::segment_arc;

/// First zero crossing of the starlike form b n1 + c n2 along an arc, if any.
std::optional<double> starlike_form_crossing(const BoundaryArc& arc, const MultiplierField& mf) {
    auto g = [&](double t) {
        Vec2 p = arc.position(t);
        Vec2 n = outward_normal(arc, t);
        auto f = mf.eval(p);
        return f.b * n.x + f.c * n.y;
    };
    const int n_scan = 256;
    double prev_t = 0.0, prev_g = g(0.0);
    for (int i = 1; i <= n_scan; ++i) {
        double t = static_cast<double>(i) / n_scan;
        double gt = g(t);
        if (prev_g == 0.0) return prev_t;
        if (prev_g * gt < 0.0) {
            double lo = prev_t, hi = t;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if (g(mid) * prev_g > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_t = t;
        prev_g = gt;
    }
    return std::nullopt;
}

}  // namespace

Domain build_cc_example_domain(const CcExampleParams& prm) {
    if (!(prm.delta0 > 0.0) || !(prm.delta1 > 0.0) || prm.delta0 >= 0.5 || prm.delta1 >= 0.5)
        throw std::invalid_argument("build_cc_example_domain: smoothing sizes must lie in (0, 0.5)");
    MultiplierField mf = MultiplierField::cc_example(prm.M, prm.eps);

    // Corner trim at x = -4 + delta0; the characteristics pass that abscissa
    // at y = +-ystar.
    const double ystar = 2.0 * (2.0 - std::sqrt(4.0 - prm.delta0));
    const double theta1 = prm.delta1 / 4.0;  // circle arc length trimmed near (0,+-4) is delta1

    const double pi = 3.14159265358979323846;
    const double phi_lo = -pi / 2 + theta1;
    const double phi_hi = pi / 2 - theta1;

    BoundaryArc ell_main = circle_arc({0, 0}, 4.0, phi_lo, phi_hi, ArcClass::Elliptic, "elliptic-main");

    // Upper junction rounding: from the circle end to (0,4), where the upper
    // characteristic starts with a vertical tangent.
    Vec2 p_up{4.0 * std::sin(theta1), 4.0 * std::cos(theta1)};
    Vec2 t_up{-std::cos(theta1), std::sin(theta1)};
    Vec2 q_up{0.0, 4.0};
    Vec2 t_q_up{0.0, -1.0};
    double len_up = (q_up - p_up).norm();
    BoundaryArc round_up =
        hermite_arc(p_up, t_up * len_up, q_up, t_q_up * len_up, ArcClass::EllipticSmoothing, "upper-rounding");

    // Upper characteristic from (0,4) down to the corner trim point.
    BoundaryArc gamma_minus = cc_characteristic_arc(+1, 4.0, ystar, "gamma-minus");

    // Noncharacteristic corner rounding near (-4, 0).
    Vec2 a_pt{-(4.0 - prm.delta0), ystar};
    Vec2 b_pt{-(4.0 - prm.delta0), -ystar};
    Vec2 t_a = Vec2{-(2.0 - ystar / 2.0), -1.0}.normalized();
    Vec2 t_b = Vec2{(2.0 - ystar / 2.0), -1.0}.normalized();
    double len_c = (b_pt - a_pt).norm();
    BoundaryArc corner = hermite_arc(a_pt, t_a * len_c, b_pt, t_b * len_c,
                                     ArcClass::HyperbolicNoncharacteristic, "corner-smoothing");

    // Lower characteristic from the corner down to (0,-4).
    BoundaryArc gamma_plus = cc_characteristic_arc(-1, -ystar, -4.0, "gamma-plus");

    // Lower junction rounding: from (0,-4) back onto the circle.
    Vec2 p_low{4.0 * std::sin(theta1), -4.0 * std::cos(theta1)};
    Vec2 t_low{std::cos(theta1), std::sin(theta1)};
    Vec2 q_low{0.0, -4.0};
    Vec2 t_q_low{0.0, -1.0};
    double len_low = (p_low - q_low).norm();
    BoundaryArc round_low = hermite_arc(q_low, t_q_low * len_low, p_low, t_low * len_low,
                                        ArcClass::EllipticSmoothing, "lower-rounding");

    // Split each junction rounding where b n1 + c n2 changes sign, so the
    // piece adjacent to the circle keeps the nonnegative form and the piece
    // meeting the sonic endpoints carries the nonpositive one.
    std::vector<BoundaryArc> arcs;
    arcs.push_back(ell_main);

    if (auto t_split = starlike_form_crossing(round_up, mf);
        t_split && *t_split > 1e-9 && *t_split < 1.0 - 1e-9) {
        arcs.push_back(round_up.restrict(0.0, *t_split, ArcClass::Elliptic, "upper-junction"));
        arcs.push_back(round_up.restrict(*t_split, 1.0, ArcClass::EllipticSmoothing, "upper-smoothing"));
    } else {
        arcs.push_back(round_up);
    }

    arcs.push_back(gamma_minus);
    arcs.push_back(corner);
    arcs.push_back(gamma_plus);

    if (auto t_split = starlike_form_crossing(round_low, mf);
        t_split && *t_split > 1e-9 && *t_split < 1.0 - 1e-9) {
        arcs.push_back(round_low.restrict(0.0, *t_split, ArcClass::EllipticSmoothing, "lower-smoothing"));
        arcs.push_back(round_low.restrict(*t_split, 1.0, ArcClass::Elliptic, "lower-junction"));
    } else {
        arcs.push_back(round_low);
    }

    Domain dom(std::move(arcs), prm.polygon_resolution);

    // The corner rounding must not spill past the characteristic vertex.
    for (Vec2 p : dom.polygon()) {
        if (p.x < -4.0)
            throw std::invalid_argument("build_cc_example_domain: smoothing parameters too large, boundary passes x = -4");
    }

    // Arc class tags must agree with the sign of K = x at arc midpoints.
    TypeChangeCoefficient tc = TypeChangeCoefficient::zero_sigma();
    for (const auto& arc : dom.arcs()) {
        double k_mid = tc.k(arc.position(0.5));
        bool ok = true;
        switch (arc.cls()) {
            case ArcClass::Elliptic:
            case ArcClass::EllipticSmoothing: ok = k_mid > 0.0; break;
            case ArcClass::Characteristic:
            case ArcClass::HyperbolicNoncharacteristic: ok = k_mid < 0.0; break;
            case ArcClass::Sonic: ok = std::abs(k_mid) <= 1e-12; break;
        }
        if (!ok)
            throw std::invalid_argument("build_cc_example_domain: smoothing parameters too large, arc '" +
                                        arc.name() + "' lost its class");
    }
    return dom;
}

Domain make_box_domain(Vec2 lo, Vec2 hi, const TypeChangeCoefficient* tc, int polygon_resolution) {
    if (!(lo.x < hi.x) || !(lo.y < hi.y)) throw std::invalid_argument("make_box_domain: empty box");
    Vec2 bl = lo, br{hi.x, lo.y}, tr = hi, tl{lo.x, hi.y};
    auto cls_of = [&](Vec2 mid) {
        if (!tc) return ArcClass::Elliptic;
        switch (classify_point(*tc, mid)) {
            case PointClass::Elliptic: return ArcClass::Elliptic;
            case PointClass::Sonic: return ArcClass::Sonic;
            case PointClass::Hyperbolic: return ArcClass::HyperbolicNoncharacteristic;
        }
        return ArcClass::Elliptic;
    };
    std::vector<BoundaryArc> arcs;
    arcs.push_back(segment_arc(bl, br, cls_of((bl + br) * 0.5), "bottom"));
    arcs.push_back(segment_arc(br, tr, cls_of((br + tr) * 0.5), "right"));
    arcs.push_back(segment_arc(tr, tl, cls_of((tr + tl) * 0.5), "top"));
    arcs.push_back(segment_arc(tl, bl, cls_of((tl + bl) * 0.5), "left"));
    return Domain(std::move(arcs), polygon_resolution);
}

}  // namespace mtp
