#include "mtp/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mtp {

FirstOrderSystem::FirstOrderSystem(TypeChangeCoefficient tc, double kappa1, double kappa2,
                                   Variant variant)
    : tc_(std::move(tc)), kappa1_(kappa1), kappa2_(kappa2), variant_(variant) {}

Mat2 FirstOrderSystem::A1(Vec2 p) const {
    double K = tc_.k(p);
    return variant_ == Variant::Standard ? Mat2::diag(K, -1.0) : Mat2::diag(K, 1.0);
}

Mat2 FirstOrderSystem::A2(Vec2) const {
    return variant_ == Variant::Standard ? Mat2{0, 1, 1, 0} : Mat2{0, -1, -1, 0};
}

Mat2 FirstOrderSystem::B(Vec2) const { return {kappa1_, kappa2_, 0.0, 0.0}; }

Mat2 FirstOrderSystem::A1_x(Vec2 p) const { return Mat2::diag(tc_.kx(p), 0.0); }

FirstOrderSystem build_cold_plasma_system(const TypeChangeCoefficient& tc, double kappa1,
                                          double kappa2, FirstOrderSystem::Variant variant) {
    return FirstOrderSystem(tc, kappa1, kappa2, variant);
}

MultiplierMatrix::MultiplierMatrix(MultiplierField mf, Coupling coupling)
    : mf_(std::move(mf)), coupling_(coupling) {}

MultiplierMatrix MultiplierMatrix::for_system(const MultiplierField& mf,
                                              const FirstOrderSystem& sys) {
    return MultiplierMatrix(mf, sys.variant() == FirstOrderSystem::Variant::Standard
                                    ? Coupling::Minus
                                    : Coupling::Plus);
}

Mat2 MultiplierMatrix::eval(Vec2 p, double K) const {
    auto f = mf_.eval(p);
    double s = coupling_ == Coupling::Minus ? -1.0 : 1.0;
    return {f.b, s * f.c * K, f.c, f.b};
}

double MultiplierMatrix::det(Vec2 p, double K) const {
    auto f = mf_.eval(p);
    return coupling_ == Coupling::Minus ? f.b * f.b + f.c * f.c * K : f.b * f.b - f.c * f.c * K;
}

bool MultiplierMatrix::invertible(Vec2 p, double K, double tol) const {
    auto f = mf_.eval(p);
    double scale = f.b * f.b + f.c * f.c * (1.0 + std::abs(K));
    return std::abs(det(p, K)) > tol * (1.0 + scale);
}

MultipliedSystem::MultipliedSystem(FirstOrderSystem sys, MultiplierMatrix e)
    : sys_(std::move(sys)), e_(std::move(e)) {}

Mat2 MultipliedSystem::EA1(Vec2 p) const {
    double K = sys_.tc().k(p);
    return e_.eval(p, K) * sys_.A1(p);
}

Mat2 MultipliedSystem::EA2(Vec2 p) const {
    double K = sys_.tc().k(p);
    return e_.eval(p, K) * sys_.A2(p);
}

Mat2 MultipliedSystem::EB(Vec2 p) const {
    double K = sys_.tc().k(p);
    return e_.eval(p, K) * sys_.B(p);
}

Mat2 MultipliedSystem::Q(Vec2 p, DerivativeMode mode, double fd_h) const {
    Mat2 symEB2 = EB(p).sym() * 2.0;
    if (mode == DerivativeMode::CentralDifference) {
        Vec2 ex{fd_h, 0.0}, ey{0.0, fd_h};
        Mat2 dEA1 = (EA1(p + ex) - EA1(p - ex)) * (0.5 / fd_h);
        Mat2 dEA2 = (EA2(p + ey) - EA2(p - ey)) * (0.5 / fd_h);
        return symEB2 - dEA1 - dEA2;
    }

    auto tce = sys_.tc().eval(p);
    auto f = e_.field().eval(p);
    double s = e_.coupling() == MultiplierMatrix::Coupling::Minus ? -1.0 : 1.0;

    // d/dx (E A1) = E_x A1 + E A1_x ;  d/dy (E A2) = E_y A2 (A2 constant).
    Mat2 Ex{f.bx, s * (f.cx * tce.k + f.c * tce.kx), f.cx, f.bx};
    Mat2 Ey{f.by, s * (f.cy * tce.k + f.c * tce.ky), f.cy, f.by};
    Mat2 E = e_.eval(p, tce.k);
    Mat2 dEA1 = Ex * sys_.A1(p) + E * sys_.A1_x(p);
    Mat2 dEA2 = Ey * sys_.A2(p);
    return symEB2 - dEA1 - dEA2;
}

MultipliedSystem apply_multiplier(const MultiplierMatrix& e, const FirstOrderSystem& sys,
                                  std::span<const Vec2> check_points, double tol) {
    std::vector<Vec2> bad;
    for (Vec2 p : check_points) {
        if (!e.invertible(p, sys.tc().k(p), tol)) bad.push_back(p);
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "apply_multiplier: E singular at " << bad.size() << " point(s):";
        for (size_t i = 0; i < bad.size() && i < 8; ++i)
            os << " (" << bad[i].x << "," << bad[i].y << ")";
        throw std::invalid_argument(os.str());
    }
    return MultipliedSystem(sys, e);
}

SpdReport check_symmetric_positive(const MultipliedSystem& ms, std::span<const Vec2> samples,
                                   MultipliedSystem::DerivativeMode mode, double fd_h) {
    SpdReport rep;
    rep.n_samples = static_cast<int>(samples.size());
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    rep.min_q11 = std::numeric_limits<double>::infinity();
    rep.min_det = std::numeric_limits<double>::infinity();
    for (Vec2 p : samples) {
        Mat2 q = ms.Q(p, mode, fd_h);
        double lo = sym_eigenvalues(q)[0];
        if (lo < rep.min_eigenvalue) {
            rep.min_eigenvalue = lo;
            rep.argmin = p;
        }
        if (q.a11 < rep.min_q11) {
            rep.min_q11 = q.a11;
            rep.argmin_q11 = p;
        }
        double d = q.sym().det();
        if (d < rep.min_det) {
            rep.min_det = d;
            rep.argmin_det = p;
        }
    }
    rep.pass = rep.min_eigenvalue > 0.0;
    return rep;
}

Mat2 boundary_matrix(const MultipliedSystem& ms, Vec2 n, Vec2 p) {
    if (std::abs(n.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("boundary_matrix: normal must be unit length");
    return ms.EA1(p) * n.x + ms.EA2(p) * n.y;
}

BoundarySplit decompose_boundary(double b, double c, double K, Vec2 n, BoundarySide side) {
    bool elliptic_side = side != BoundarySide::Nonelliptic;
    if (elliptic_side && !(K > 0.0))
        throw std::invalid_argument("decompose_boundary: elliptic side requires K > 0");
    if (!elliptic_side && K > 1e-12)
        throw std::invalid_argument("decompose_boundary: nonelliptic side requires K <= 0");

    BoundarySplit sp;
    sp.b = b;
    sp.c = c;
    sp.K = K;
    sp.n = n;
    sp.side = side;

    double n1 = n.x, n2 = n.y;
    Mat2 dir_plus{K * b * n1, b * n2, K * c * n1, c * n2};
    Mat2 dir_minus{-K * c * n2, K * c * n1, b * n2, -b * n1};

    switch (side) {
        case BoundarySide::EllipticMain:
            sp.beta_plus = dir_plus;
            sp.beta_minus = dir_minus;
            break;
        case BoundarySide::EllipticSmoothing:
            sp.beta_plus = dir_minus;
            sp.beta_minus = dir_plus;
            break;
        case BoundarySide::Nonelliptic:
            sp.beta_plus = Mat2{K * (b * n1 - c * n2), c * K * n1 + b * n2,
                                c * K * n1 + b * n2, -(b * n1 - c * n2)};
            sp.beta_minus = Mat2::zero();
            break;
    }
    sp.beta = sp.beta_plus + sp.beta_minus;
    sp.mu = sp.beta_plus - sp.beta_minus;
    sp.mu_star = sp.mu.sym();
    return sp;
}

SemiAdmissibleVerdict check_semi_admissible(const BoundarySplit& split, BoundaryConditionKind bc,
                                            double tol) {
    SemiAdmissibleVerdict v;
    v.mu_star_min_eig = sym_eigenvalues(split.mu_star)[0];
    v.mu_star_psd = v.mu_star_min_eig >= -tol * (1.0 + split.mu_star.max_abs());

    double scale = split.beta_minus.max_abs();
    switch (bc) {
        case BoundaryConditionKind::Dirichlet: {
            Vec2 u{split.n.x, split.n.y};
            Vec2 r = split.beta_minus * u;
            v.annihilation_residual = r.norm() / ((1.0 + scale) * std::max(u.norm(), 1e-30));
            break;
        }
        case BoundaryConditionKind::Neumann: {
            Vec2 u{split.n.y, -split.K * split.n.x};
            Vec2 r = split.beta_minus * u;
            v.annihilation_residual = r.norm() / ((1.0 + scale) * std::max(u.norm(), 1e-30));
            break;
        }
        case BoundaryConditionKind::None:
            v.annihilation_residual = scale;  // no condition: beta_- itself must vanish
            break;
    }
    v.annihilates = v.annihilation_residual <= tol;
    v.pass = v.mu_star_psd && v.annihilates;
    return v;
}

double spanning_determinant(double K, Vec2 n) { return n.y * n.y + K * n.x * n.x; }

AdmissibleVerdict check_admissible(const BoundarySplit& split, double tol) {
    AdmissibleVerdict v;
    v.determinant = spanning_determinant(split.K, split.n);
    if (split.side == BoundarySide::Nonelliptic) {
        // No condition is imposed here: the null space of beta_- is everything
        // and the range of beta_- is trivial, so both requirements hold.
        v.spans = true;
        v.ranges_trivial = true;
    } else {
        v.spans = v.determinant > tol;
        v.ranges_trivial = std::abs(v.determinant) > tol;
    }
    return v;
}

double subcharacteristic_residual(double b, double c, double K, Vec2 n) {
    if (std::abs(n.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("subcharacteristic_residual: normal must be unit length");
    double t1 = b * n.x - c * n.y;
    double t2 = c * K * n.x + b * n.y;
    return K * t1 * t1 + t2 * t2;
}

Prop4Report prop4_audit(const BoundaryArc& arc, const MultiplierField& mf,
                        const TypeChangeCoefficient& tc, int n_quad) {
    if (arc.cls() != ArcClass::Characteristic)
        throw std::invalid_argument("prop4_audit: arc '" + arc.name() +
                                    "' is not tagged characteristic");
    Prop4Report rep;
    rep.n_nodes = n_quad;
    for (int i = 0; i < n_quad; ++i) {
        double t = (i + 0.5) / n_quad;
        Vec2 p = arc.position(t);
        Vec2 n = outward_normal(arc, t);
        double K = tc.k(p);
        auto f = mf.eval(p);
        double lhs = subcharacteristic_residual(f.b, f.c, K, n);
        double denom = (f.b * f.b + f.c * f.c) * (1.0 + std::abs(K)) * (1.0 + std::abs(K));
        double r = std::abs(lhs) / std::max(denom, 1e-300);
        if (r > rep.max_normalized_residual) {
            rep.max_normalized_residual = r;
            rep.worst_t = t;
        }
    }
    return rep;
}

namespace {

void add_condition(Theorem3Report& rep, std::string label, std::string where, double margin,
                   bool pass, Vec2 worst) {
    rep.conditions.push_back({std::move(label), std::move(where), margin, pass, worst});
    rep.pass = rep.pass && rep.conditions.back().pass;
}

}  // namespace

Theorem3Report verify_theorem3(const Domain& dom, const TypeChangeCoefficient& tc, double kappa1,
                               double kappa2, const MultiplierField& mf, int n_quad,
                               int n_interior, std::uint64_t seed,
                               FirstOrderSystem::Variant variant) {
    FirstOrderSystem sys = build_cold_plasma_system(tc, kappa1, kappa2, variant);
    MultiplierMatrix E = MultiplierMatrix::for_system(mf, sys);
    MultipliedSystem ms(sys, E);

    Theorem3Report rep;
    rep.pass = true;
    rep.n_boundary_nodes = n_quad;

    // Interior samples by seeded rejection sampling over the bounding box.
    std::vector<Vec2> interior;
    {
        std::mt19937_64 rng(seed);
        auto bb = dom.bounding_box();
        std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x), uy(bb.lo.y, bb.hi.y);
        int guard = 0;
        while (static_cast<int>(interior.size()) < n_interior && guard < 1000 * n_interior) {
            Vec2 p{ux(rng), uy(rng)};
            ++guard;
            if (dom.contains(p)) interior.push_back(p);
        }
    }
    rep.n_interior_samples = static_cast<int>(interior.size());

    // (Q0): invertibility of E on the interior.
    {
        double worst = std::numeric_limits<double>::infinity();
        Vec2 worst_p;
        for (Vec2 p : interior) {
            double d = std::abs(E.det(p, tc.k(p)));
            if (d < worst) {
                worst = d;
                worst_p = p;
            }
        }
        add_condition(rep, "(Q0)", "interior", worst, worst > 1e-10, worst_p);
    }

    // (Q1), (Q2): symmetric positivity of the multiplied system.
    {
        SpdReport spd = check_symmetric_positive(ms, interior);
        add_condition(rep, "(Q1)", "interior", spd.min_q11, spd.min_q11 > 0.0, spd.argmin_q11);
        add_condition(rep, "(Q2)", "interior", spd.min_det, spd.min_det > 0.0, spd.argmin_det);
    }

    const double tol_geom = 1e-8;
    const double tol_alg = 1e-12;

    for (const auto& arc : dom.arcs()) {
        const std::string& nm = arc.name();
        bool elliptic_main = arc.cls() == ArcClass::Elliptic;
        bool elliptic_smoothing = arc.cls() == ArcClass::EllipticSmoothing;

        // Starlike inequality for this arc class.
        if (elliptic_main) {
            auto r = check_starlike_arc(arc, mf, StarlikeSense::NonNegative, n_quad, tol_geom);
            add_condition(rep, "(starlike1)", nm, r.margin, r.pass, r.worst_point);
        } else if (elliptic_smoothing) {
            auto r = check_starlike_arc(arc, mf, StarlikeSense::NonPositive, n_quad, tol_geom);
            add_condition(rep, "(starlike2)", nm, r.margin, r.pass, r.worst_point);
        } else {
            auto r = check_starlike_arc(arc, mf, StarlikeSense::FlippedB, n_quad, tol_geom);
            add_condition(rep, "(starlike3)", nm, r.margin, r.pass, r.worst_point);
        }

        // (bQ2) off the elliptic boundary.
        if (!elliptic_main && !elliptic_smoothing) {
            double worst = std::numeric_limits<double>::infinity();
            Vec2 worst_p;
            for (int i = 0; i < n_quad; ++i) {
                double t = (i + 0.5) / n_quad;
                Vec2 p = arc.position(t);
                Vec2 n = outward_normal(arc, t);
                auto f = mf.eval(p);
                double lhs = subcharacteristic_residual(f.b, f.c, tc.k(p), n);
                double scale = (f.b * f.b + f.c * f.c) * (1.0 + std::abs(tc.k(p))) *
                               (1.0 + std::abs(tc.k(p)));
                double margin = -lhs / std::max(scale, 1e-300);  // >= 0 when lhs <= 0
                if (margin < worst) {
                    worst = margin;
                    worst_p = p;
                }
            }
            add_condition(rep, "(bQ2)", nm, worst, worst >= -tol_geom, worst_p);
        }

        // Admissibility battery at the quadrature nodes.
        BoundarySide side = elliptic_main ? BoundarySide::EllipticMain
                            : elliptic_smoothing ? BoundarySide::EllipticSmoothing
                                                 : BoundarySide::Nonelliptic;
        BoundaryConditionKind bc = elliptic_main ? BoundaryConditionKind::Dirichlet
                                   : elliptic_smoothing ? BoundaryConditionKind::Neumann
                                                        : BoundaryConditionKind::None;

        // Spanning/range checks need only K and the normal, so they run even
        // when the side tag contradicts the sign of K.
        if (side != BoundarySide::Nonelliptic) {
            double span_margin = std::numeric_limits<double>::infinity();
            Vec2 span_p;
            for (int i = 0; i < n_quad; ++i) {
                double t = (i + 0.5) / n_quad;
                Vec2 p = arc.position(t);
                double det = spanning_determinant(tc.k(p), outward_normal(arc, t));
                if (det < span_margin) {
                    span_margin = det;
                    span_p = p;
                }
            }
            add_condition(rep, "(LI)", nm, span_margin, span_margin > 1e-10, span_p);
            add_condition(rep, "(ranges)", nm, std::abs(span_margin),
                          std::abs(span_margin) > 1e-10, span_p);
        }

        double mu_margin = std::numeric_limits<double>::infinity();
        double ann_worst = 0.0;
        Vec2 mu_p;
        bool decompose_ok = true;
        std::string decompose_err;
        for (int i = 0; i < n_quad; ++i) {
            double t = (i + 0.5) / n_quad;
            Vec2 p = arc.position(t);
            Vec2 n = outward_normal(arc, t);
            auto f = mf.eval(p);
            double K = tc.k(p);
            BoundarySplit sp;
            try {
                sp = decompose_boundary(f.b, f.c, K, n, side);
            } catch (const std::invalid_argument& e) {
                decompose_ok = false;
                decompose_err = e.what();
                mu_p = p;
                break;
            }
            auto semi = check_semi_admissible(sp, bc, tol_alg);
            if (semi.mu_star_min_eig < mu_margin) {
                mu_margin = semi.mu_star_min_eig;
                mu_p = p;
            }
            ann_worst = std::max(ann_worst, semi.annihilation_residual);
        }
        if (!decompose_ok) {
            add_condition(rep, "(difference)", nm + ": " + decompose_err, -1.0, false, mu_p);
            continue;
        }
        double mu_scale_tol = tol_alg * (1.0 + std::abs(mf.eval(arc.position(0.5)).b));
        add_condition(rep, "(difference)", nm, mu_margin, mu_margin >= -mu_scale_tol, mu_p);
        add_condition(rep, "(bndrycon)", nm, tol_alg - ann_worst, ann_worst <= tol_alg, mu_p);
    }

    return rep;
}

}  // namespace mtp
