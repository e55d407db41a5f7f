#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtp/coefficients.hpp"
#include "mtp/geo2.hpp"
#include "mtp/geometry.hpp"

namespace mtp {

/// First-order 2x2 system A1 u_x + A2 u_y + B u with symmetric A1, A2.
///
/// Standard form:  A1 = diag(K,-1),  A2 = [[0,1],[1,0]],  B = [[k1,k2],[0,0]]
/// PF variant:     A1 = diag(K, 1),  A2 = [[0,-1],[-1,0]], same B
class FirstOrderSystem {
public:
    enum class Variant { Standard, PF };

    FirstOrderSystem(TypeChangeCoefficient tc, double kappa1, double kappa2, Variant variant);

    Mat2 A1(Vec2 p) const;
    Mat2 A2(Vec2 p) const;
    Mat2 B(Vec2 p) const;
    Mat2 A1_x(Vec2 p) const;  // analytic: only the K entry varies in x
    Mat2 A2_y(Vec2) const { return Mat2::zero(); }

    const TypeChangeCoefficient& tc() const { return tc_; }
    double kappa1() const { return kappa1_; }
    double kappa2() const { return kappa2_; }
    Variant variant() const { return variant_; }

private:
    TypeChangeCoefficient tc_;
    double kappa1_, kappa2_;
    Variant variant_;
};

FirstOrderSystem build_cold_plasma_system(const TypeChangeCoefficient& tc, double kappa1,
                                          double kappa2,
                                          FirstOrderSystem::Variant variant =
                                              FirstOrderSystem::Variant::Standard);

/// Multiplier matrix E. The minus coupling [[b,-cK],[c,b]] pairs with the
/// standard system (det = b^2 + c^2 K); the plus coupling [[b,cK],[c,b]]
/// pairs with the PF variant (det = b^2 - c^2 K).
class MultiplierMatrix {
public:
    enum class Coupling { Minus, Plus };

    MultiplierMatrix(MultiplierField mf, Coupling coupling);

    /// Coupling matched to the system variant (Minus for Standard, Plus for PF).
    static MultiplierMatrix for_system(const MultiplierField& mf, const FirstOrderSystem& sys);

    Mat2 eval(Vec2 p, double K) const;
    double det(Vec2 p, double K) const;
    bool invertible(Vec2 p, double K, double tol = 1e-12) const;

    const MultiplierField& field() const { return mf_; }
    Coupling coupling() const { return coupling_; }

private:
    MultiplierField mf_;
    Coupling coupling_;
};

/// The system E*L with coefficient products EA1, EA2, EB and the positivity
/// matrix Q = 2 sym(EB) - d/dx(EA1) - d/dy(EA2), whose entries for the
/// standard coupling are
///   Q11 = 2 b k1 - b_x K - b + c_y K - c sigma'
///   Q12 = b k2 + c k1 - c_x K - c - b_y
///   Q22 = 2 c k2 + b_x - c_y
class MultipliedSystem {
public:
    MultipliedSystem(FirstOrderSystem sys, MultiplierMatrix e);

    Mat2 EA1(Vec2 p) const;
    Mat2 EA2(Vec2 p) const;
    Mat2 EB(Vec2 p) const;

    enum class DerivativeMode { Analytic, CentralDifference };
    Mat2 Q(Vec2 p, DerivativeMode mode = DerivativeMode::Analytic, double fd_h = 1e-5) const;

    const FirstOrderSystem& system() const { return sys_; }
    const MultiplierMatrix& multiplier() const { return e_; }

private:
    FirstOrderSystem sys_;
    MultiplierMatrix e_;
};

/// Multiplies the system by E, checking invertibility at the given points.
/// Throws listing the offending points if E is singular anywhere on them.
MultipliedSystem apply_multiplier(const MultiplierMatrix& e, const FirstOrderSystem& sys,
                                  std::span<const Vec2> check_points = {}, double tol = 1e-12);

struct SpdReport {
    double min_eigenvalue = 0.0;
    Vec2 argmin;
    double min_q11 = 0.0;  // the (Q1) quantity
    Vec2 argmin_q11;
    double min_det = 0.0;  // the (Q2) quantity
    Vec2 argmin_det;
    bool pass = false;
    int n_samples = 0;
};

SpdReport check_symmetric_positive(const MultipliedSystem& ms, std::span<const Vec2> samples,
                                   MultipliedSystem::DerivativeMode mode =
                                       MultipliedSystem::DerivativeMode::Analytic,
                                   double fd_h = 1e-5);

/// beta = n1 EA1 + n2 EA2 at a boundary point with unit outward normal n.
Mat2 boundary_matrix(const MultipliedSystem& ms, Vec2 n, Vec2 p);

enum class BoundarySide { EllipticMain, EllipticSmoothing, Nonelliptic };

struct BoundarySplit {
    Mat2 beta, beta_plus, beta_minus;
    Mat2 mu, mu_star;
    double b = 0, c = 0, K = 0;
    Vec2 n;
    BoundarySide side = BoundarySide::Nonelliptic;
};

/// Splits beta into beta_+ + beta_- according to the boundary side. The side
/// tag must be consistent with the sign of K (elliptic sides need K > 0).
BoundarySplit decompose_boundary(double b, double c, double K, Vec2 n, BoundarySide side);

enum class BoundaryConditionKind { Dirichlet, Neumann, None };

struct SemiAdmissibleVerdict {
    bool mu_star_psd = false;
    double mu_star_min_eig = 0.0;
    bool annihilates = false;           // beta_- u = 0 under the stated condition
    double annihilation_residual = 0.0;
    bool pass = false;
};

SemiAdmissibleVerdict check_semi_admissible(const BoundarySplit& split, BoundaryConditionKind bc,
                                            double tol = 1e-12);

double spanning_determinant(double K, Vec2 n);  // n2^2 + K n1^2

struct AdmissibleVerdict {
    bool spans = false;
    double determinant = 0.0;  // n2^2 + K n1^2 (trivially positive off the elliptic side)
    bool ranges_trivial = false;
};

AdmissibleVerdict check_admissible(const BoundarySplit& split, double tol = 1e-12);

/// Signed left-hand side of the subcharacteristic condition
/// K (b n1 - c n2)^2 + (c K n1 + b n2)^2.
double subcharacteristic_residual(double b, double c, double K, Vec2 n);

struct Prop4Report {
    double max_normalized_residual = 0.0;
    double worst_t = 0.0;
    int n_nodes = 0;
};

/// Audits |K(b n1 - c n2)^2 + (c K n1 + b n2)^2| / ((b^2+c^2)(1+|K|)^2) along
/// a characteristic arc. Refuses arcs not tagged characteristic.
Prop4Report prop4_audit(const BoundaryArc& arc, const MultiplierField& mf,
                        const TypeChangeCoefficient& tc, int n_quad = 200);

struct ConditionResult {
    std::string label;   // "(Q0)", "(Q1)", "(Q2)", "(starlike1)".., "(bQ2)", "(LI)", "(ranges)"
    std::string where;   // arc name or "interior"
    double margin = 0.0; // >= 0 means satisfied
    bool pass = false;
    Vec2 worst_point;
};

struct Theorem3Report {
    std::vector<ConditionResult> conditions;
    bool pass = false;
    int n_interior_samples = 0;
    int n_boundary_nodes = 0;
};

/// Runs the full hypothesis battery: (Q0) invertibility on interior samples,
/// (Q1)/(Q2) positivity, the three starlike inequalities per arc class, (bQ2)
/// off the elliptic boundary, and the spanning/range admissibility checks.
Theorem3Report verify_theorem3(const Domain& dom, const TypeChangeCoefficient& tc, double kappa1,
                               double kappa2, const MultiplierField& mf, int n_quad = 200,
                               int n_interior = 2000, std::uint64_t seed = 0,
                               FirstOrderSystem::Variant variant =
                                   FirstOrderSystem::Variant::Standard);

}  // namespace mtp
