#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mtp/geo2.hpp"

namespace mtp {

enum class PointClass { Elliptic, Sonic, Hyperbolic };

std::string to_string(PointClass c);

/// Type-change coefficient K(x,y) = x - sigma(y). The sign of K selects the
/// equation type: K > 0 elliptic, K < 0 hyperbolic, K = 0 sonic.
///
/// sigma is supplied together with its derivative; no differentiation is done
/// internally. The built-in forms are sigma(y) = y^2 ("parabolic") and
/// sigma = 0 ("zero-sigma", the Cinquini-Cibrario case).
class TypeChangeCoefficient {
public:
    enum class Form { Parabolic, ZeroSigma, Custom };

    static TypeChangeCoefficient parabolic();
    static TypeChangeCoefficient zero_sigma();
    static TypeChangeCoefficient custom(std::function<double(double)> sigma,
                                        std::function<double(double)> sigma_prime);

    double sigma(double y) const { return sigma_(y); }
    double sigma_prime(double y) const { return sigma_prime_(y); }

    double k(Vec2 p) const { return p.x - sigma_(p.y); }
    double kx(Vec2) const { return 1.0; }
    double ky(Vec2 p) const { return -sigma_prime_(p.y); }

    struct Eval {
        double k;
        double kx;
        double ky;
    };
    Eval eval(Vec2 p) const { return {k(p), 1.0, ky(p)}; }

    Form form() const { return form_; }

private:
    TypeChangeCoefficient(Form f, std::function<double(double)> s, std::function<double(double)> sp)
        : form_(f), sigma_(std::move(s)), sigma_prime_(std::move(sp)) {}

    Form form_;
    std::function<double(double)> sigma_;
    std::function<double(double)> sigma_prime_;
};

PointClass classify_point(const TypeChangeCoefficient& tc, Vec2 p, double tol = 1e-12);

/// One sigma admissibility condition with the worst sample found.
struct SigmaCondition {
    std::string label;       // "(sig1)", "(sig2)", "(sig3)"
    bool pass = true;
    double worst_y = 0.0;
    double worst_value = 0.0;  // signed violation; <= 0 means satisfied
};

struct SigmaReport {
    std::vector<SigmaCondition> conditions;
    bool all_pass = false;
};

/// Samples sigma' over [y_lo, y_hi] and checks sigma(0)=sigma'(0)=0,
/// sigma' >= 0 for y >= 0 and sigma' <= 0 for y <= 0.
SigmaReport validate_sigma(const TypeChangeCoefficient& tc, double y_lo, double y_hi,
                           int n_samples, double tol = 1e-12);

/// Multiplier coefficients (a, b, c) of the transport operator
/// Hv = a v + b v_x + c v_y, with derivative access.
///
/// Two built-in instances:
///  - dilation: b = m x, c = mu y, a = -M with M = (m-3mu)/2 - delta
///  - cc-example: b = x + M, c = eps y (no zeroth-order coefficient)
class MultiplierField {
public:
    enum class Kind { Dilation, CcExample };

    /// Requires m > 3 mu > 0, 0 < delta <= mu/4 and delta < (m-3mu)/2.
    static MultiplierField dilation(double m, double mu, double delta);
    /// Requires M > 0, eps > 0.
    static MultiplierField cc_example(double M, double eps);

    struct Eval {
        double a, b, c;
        double bx, by, cx, cy;
    };
    Eval eval(Vec2 p) const;

    double b(Vec2 p) const { return eval(p).b; }
    double c(Vec2 p) const { return eval(p).c; }
    double a() const { return a_; }

    Kind kind() const { return kind_; }
    double m() const { return m_; }
    double mu() const { return mu_; }
    double delta() const { return delta_; }
    double M() const { return M_; }
    double eps() const { return eps_; }

    /// For the cc-example instance: checks b > 0 on the closed box and
    /// M > eps * sup(-x). Both are reported; pass is their conjunction.
    struct BoxCheck {
        double min_b = 0.0;
        double required_M = 0.0;  // eps * sup(-x), clamped at 0
        bool b_positive = false;
        bool M_large_enough = false;
        bool pass = false;
    };
    BoxCheck validate_on_box(Vec2 lo, Vec2 hi) const;

private:
    MultiplierField() = default;

    Kind kind_ = Kind::Dilation;
    double m_ = 0, mu_ = 0, delta_ = 0;  // dilation parameters
    double M_ = 0, eps_ = 0;             // cc-example parameters (M_ also -a for dilation)
    double a_ = 0;
};

/// Energy coefficients of the coercivity estimate: alpha field, gamma constant
/// and the zeroth-order constant M. gamma = m - 2mu - delta; on K = x - y^2 the
/// alpha field reduces to (m/2 - mu - delta) x + delta y^2.
struct EnergyCoefficients {
    double m = 0, mu = 0, delta = 0;
    double M = 0;      // (m - 3mu)/2 - delta
    double gamma = 0;  // m - 2mu - delta

    /// alpha(x,y) = -(mu+delta) K + (m/2) x + (mu/2) y K_y
    double alpha(const TypeChangeCoefficient& tc, Vec2 p) const;
};

/// Validates the hypotheses and returns the derived constants.
EnergyCoefficients lemma1_coefficients(double m, double mu, double delta);

struct CoercivityReport {
    double min_alpha_margin = 0.0;  // min over samples of alpha - delta |K|
    Vec2 argmin_alpha;
    double gamma_margin = 0.0;      // gamma - (mu - delta)
    bool pass = false;
    int n_samples = 0;
};

/// Evaluates the two coercivity margins over the sample set. All samples must
/// have x >= 0; a sample with x < 0 is a hypothesis violation and throws.
CoercivityReport check_energy_coercivity(const EnergyCoefficients& ec,
                                         const TypeChangeCoefficient& tc,
                                         std::span<const Vec2> samples, double tol = 1e-12);

}  // namespace mtp
