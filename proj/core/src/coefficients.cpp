#include "mtp/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtp {

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Elliptic: return "elliptic";
        case PointClass::Sonic: return "sonic";
        case PointClass::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

TypeChangeCoefficient TypeChangeCoefficient::parabolic() {
    return TypeChangeCoefficient(Form::Parabolic,
                                 [](double y) { return y * y; },
                                 [](double y) { return 2.0 * y; });
}

TypeChangeCoefficient TypeChangeCoefficient::zero_sigma() {
    return TypeChangeCoefficient(Form::ZeroSigma,
                                 [](double) { return 0.0; },
                                 [](double) { return 0.0; });
}

TypeChangeCoefficient TypeChangeCoefficient::custom(std::function<double(double)> sigma,
                                                    std::function<double(double)> sigma_prime) {
    if (!sigma || !sigma_prime)
        throw std::invalid_argument("TypeChangeCoefficient::custom: null callable");
    return TypeChangeCoefficient(Form::Custom, std::move(sigma), std::move(sigma_prime));
}

PointClass classify_point(const TypeChangeCoefficient& tc, Vec2 p, double tol) {
    if (tol < 0.0) throw std::invalid_argument("classify_point: tol must be >= 0");
    double k = tc.k(p);
    if (k > tol) return PointClass::Elliptic;
    if (k < -tol) return PointClass::Hyperbolic;
    return PointClass::Sonic;
}

SigmaReport validate_sigma(const TypeChangeCoefficient& tc, double y_lo, double y_hi,
                           int n_samples, double tol) {
    if (n_samples < 3) throw std::invalid_argument("validate_sigma: need n_samples >= 3");
    if (y_lo > y_hi) std::swap(y_lo, y_hi);

    SigmaReport rep;
    SigmaCondition c1{"(sig1)", true, 0.0, 0.0};
    SigmaCondition c2{"(sig2)", true, 0.0, 0.0};
    SigmaCondition c3{"(sig3)", true, 0.0, 0.0};

    double v0 = std::max(std::abs(tc.sigma(0.0)), std::abs(tc.sigma_prime(0.0)));
    if (v0 > tol) {
        c1.pass = false;
        c1.worst_value = v0;
    }

    for (int i = 0; i < n_samples; ++i) {
        double y = y_lo + (y_hi - y_lo) * static_cast<double>(i) / (n_samples - 1);
        double sp = tc.sigma_prime(y);
        if (y >= 0.0 && -sp > c2.worst_value) {  // violation of sigma' >= 0
            c2.worst_value = -sp;
            c2.worst_y = y;
        }
        if (y <= 0.0 && sp > c3.worst_value) {  // violation of sigma' <= 0
            c3.worst_value = sp;
            c3.worst_y = y;
        }
    }
    c2.pass = c2.worst_value <= tol;
    c3.pass = c3.worst_value <= tol;

    rep.conditions = {c1, c2, c3};
    rep.all_pass = c1.pass && c2.pass && c3.pass;
    return rep;
}

MultiplierField MultiplierField::dilation(double m, double mu, double delta) {
    if (!(mu > 0.0) || !(m > 3.0 * mu))
        throw std::invalid_argument("MultiplierField::dilation: requires m > 3 mu > 0");
    if (!(delta > 0.0) || delta > mu / 4.0)
        throw std::invalid_argument("MultiplierField::dilation: requires 0 < delta <= mu/4");
    double M = 0.5 * (m - 3.0 * mu) - delta;
    if (!(M > 0.0))
        throw std::invalid_argument("MultiplierField::dilation: delta too large, (m-3mu)/2 - delta <= 0");
    MultiplierField f;
    f.kind_ = Kind::Dilation;
    f.m_ = m;
    f.mu_ = mu;
    f.delta_ = delta;
    f.M_ = M;
    f.a_ = -M;
    return f;
}

MultiplierField MultiplierField::cc_example(double M, double eps) {
    if (!(M > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("MultiplierField::cc_example: requires M > 0 and eps > 0");
    MultiplierField f;
    f.kind_ = Kind::CcExample;
    f.M_ = M;
    f.eps_ = eps;
    f.a_ = 0.0;
    return f;
}

MultiplierField::Eval MultiplierField::eval(Vec2 p) const {
    if (kind_ == Kind::Dilation) {
        return {a_, m_ * p.x, mu_ * p.y, m_, 0.0, 0.0, mu_};
    }
    return {0.0, p.x + M_, eps_ * p.y, 1.0, 0.0, 0.0, eps_};
}

MultiplierField::BoxCheck MultiplierField::validate_on_box(Vec2 lo, Vec2 hi) const {
    if (kind_ != Kind::CcExample)
        throw std::logic_error("MultiplierField::validate_on_box: only meaningful for cc-example");
    BoxCheck chk;
    chk.min_b = lo.x + M_;
    chk.required_M = eps_ * std::max(0.0, -lo.x);
    chk.b_positive = chk.min_b > 0.0;
    chk.M_large_enough = M_ > chk.required_M;
    chk.pass = chk.b_positive && chk.M_large_enough;
    (void)hi;
    return chk;
}

double EnergyCoefficients::alpha(const TypeChangeCoefficient& tc, Vec2 p) const {
    double K = tc.k(p);
    double Ky = tc.ky(p);
    return -(mu + delta) * K + 0.5 * m * p.x + 0.5 * mu * p.y * Ky;
}

EnergyCoefficients lemma1_coefficients(double m, double mu, double delta) {
    // Reuse the dilation constructor's hypothesis checks.
    MultiplierField f = MultiplierField::dilation(m, mu, delta);
    EnergyCoefficients ec;
    ec.m = m;
    ec.mu = mu;
    ec.delta = delta;
    ec.M = f.M();
    ec.gamma = m - 2.0 * mu - delta;
    return ec;
}

CoercivityReport check_energy_coercivity(const EnergyCoefficients& ec,
                                         const TypeChangeCoefficient& tc,
                                         std::span<const Vec2> samples, double tol) {
    CoercivityReport rep;
    rep.n_samples = static_cast<int>(samples.size());
    rep.gamma_margin = ec.gamma - (ec.mu - ec.delta);
    rep.min_alpha_margin = std::numeric_limits<double>::infinity();
    for (Vec2 p : samples) {
        if (p.x < 0.0)
            throw std::invalid_argument("check_energy_coercivity: sample with x < 0 violates the x >= 0 hypothesis");
        double margin = ec.alpha(tc, p) - ec.delta * std::abs(tc.k(p));
        if (margin < rep.min_alpha_margin) {
            rep.min_alpha_margin = margin;
            rep.argmin_alpha = p;
        }
    }
    if (samples.empty()) rep.min_alpha_margin = 0.0;
    rep.pass = rep.min_alpha_margin >= -tol && rep.gamma_margin >= -tol;
    return rep;
}

}  // namespace mtp
