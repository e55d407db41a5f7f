#pragma once

#include <cmath>

#include "mtp/coefficients.hpp"
#include "mtp/geo2.hpp"

namespace mtp {

/// C-infinity radial bump supported on the disk of the given radius:
/// amp * exp(1 - 1/(1 - r^2/R^2)) inside, identically zero outside.
struct SmoothBump {
    Vec2 center;
    double radius = 1.0;
    double amp = 1.0;

    double s(Vec2 p) const {
        Vec2 d = p - center;
        return d.norm2() / (radius * radius);
    }

    double value(Vec2 p) const {
        double t = s(p);
        if (t >= 1.0) return 0.0;
        return amp * std::exp(1.0 - 1.0 / (1.0 - t));
    }

    // w(t) = amp e^{1 - 1/(1-t)};  w' = -w/(1-t)^2;  w'' = w (1/(1-t)^4 - 2/(1-t)^3)
    double dvalue(Vec2 p, double& wx, double& wy) const {
        double t = s(p);
        if (t >= 1.0) {
            wx = wy = 0.0;
            return 0.0;
        }
        double w = amp * std::exp(1.0 - 1.0 / (1.0 - t));
        double u = 1.0 / (1.0 - t);
        double wp = -w * u * u;
        Vec2 d = p - center;
        double r2 = radius * radius;
        wx = wp * 2.0 * d.x / r2;
        wy = wp * 2.0 * d.y / r2;
        return w;
    }

    double dx(Vec2 p) const {
        double wx, wy;
        dvalue(p, wx, wy);
        return wx;
    }
    double dy(Vec2 p) const {
        double wx, wy;
        dvalue(p, wx, wy);
        return wy;
    }

    double dxx(Vec2 p) const { return second(p, true); }
    double dyy(Vec2 p) const { return second(p, false); }

private:
    double second(Vec2 p, bool in_x) const {
        double t = s(p);
        if (t >= 1.0) return 0.0;
        double w = amp * std::exp(1.0 - 1.0 / (1.0 - t));
        double u = 1.0 / (1.0 - t);
        double wp = -w * u * u;
        double wpp = w * (u * u * u * u - 2.0 * u * u * u);
        Vec2 d = p - center;
        double r2 = radius * radius;
        double g = in_x ? 2.0 * d.x / r2 : 2.0 * d.y / r2;
        return wpp * g * g + wp * 2.0 / r2;
    }
};

/// Forcing L u = (K u_x)_x + u_yy = u_x + K u_xx + u_yy for a bump (K_x = 1).
inline double apply_L(const TypeChangeCoefficient& tc, const SmoothBump& u, Vec2 p) {
    return u.dx(p) + tc.k(p) * u.dxx(p) + u.dyy(p);
}

}  // namespace mtp
