#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtp/coefficients.hpp"
#include "mtp/geo2.hpp"

namespace mtp {

/// Decay exponents of the contracting flow F_t(x,y) = (x e^{-alpha t}, y e^{-beta t}).
struct DilationExponents {
    double alpha_d = 1.0;
    double beta_d = 1.0;

    DilationExponents(double a, double b) : alpha_d(a), beta_d(b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("DilationExponents: exponents must be positive");
    }
};

Vec2 flow_map(const DilationExponents& e, double t, Vec2 p);

enum class ArcClass {
    Elliptic,
    EllipticSmoothing,
    Sonic,
    Characteristic,
    HyperbolicNoncharacteristic,
};

std::string to_string(ArcClass c);
ArcClass arc_class_from_string(const std::string& s);

/// Serializable description of an arc's geometry; enough to rebuild the
/// parametrization on load. `t0`,`t1` select a sub-range of the base curve.
struct ArcDescriptor {
    std::string kind;  // "segment" | "circle" | "hermite" | "cc-characteristic" | "polyline"
    std::map<std::string, double> params;
    std::vector<Vec2> points;
    double t0 = 0.0;
    double t1 = 1.0;
};

/// One oriented boundary arc, parametrized by t in [0,1] in the direction of
/// counterclockwise traversal of the domain boundary.
class BoundaryArc {
public:
    BoundaryArc(std::function<Vec2(double)> pos, std::function<Vec2(double)> vel,
                ArcClass cls, std::string name, ArcDescriptor desc = {});

    Vec2 position(double t) const { return pos_(t); }
    /// dposition/dt; not necessarily unit length.
    Vec2 velocity(double t) const { return vel_(t); }
    Vec2 unit_tangent(double t) const;

    ArcClass cls() const { return cls_; }
    const std::string& name() const { return name_; }
    const ArcDescriptor& descriptor() const { return desc_; }

    /// Restriction to [t0,t1] of this arc's parameter, rescaled to [0,1].
    BoundaryArc restrict(double t0, double t1, ArcClass cls, std::string name) const;

private:
    std::function<Vec2(double)> pos_;
    std::function<Vec2(double)> vel_;
    ArcClass cls_;
    std::string name_;
    ArcDescriptor desc_;
};

/// Outward unit normal (dy/ds, -dx/ds) for counterclockwise traversal.
Vec2 outward_normal(const BoundaryArc& arc, double t);

/// Closed counterclockwise domain given by an ordered list of boundary arcs.
/// Containment queries run against a cached fine polygonization.
class Domain {
public:
    explicit Domain(std::vector<BoundaryArc> arcs, int polygon_resolution = 4096);

    const std::vector<BoundaryArc>& arcs() const { return arcs_; }

    struct Bounds {
        Vec2 lo, hi;
    };
    const Bounds& bounding_box() const { return bounds_; }
    double signed_area() const { return signed_area_; }

    /// Closure semantics: points within boundary_tol of the polygon count as inside.
    bool contains(Vec2 p, double boundary_tol = 1e-9) const;
    /// Approximate signed distance to the boundary polygon: > 0 inside, < 0 outside.
    double signed_distance(Vec2 p) const;

    const std::vector<Vec2>& polygon() const { return polygon_; }
    const std::vector<int>& polygon_arc_ids() const { return polygon_arc_; }
    int polygon_resolution() const { return resolution_; }

private:
    int winding_number(Vec2 p) const;
    double distance_to_polygon(Vec2 p) const;
    void build_raster();

    std::vector<BoundaryArc> arcs_;
    int resolution_;
    std::vector<Vec2> polygon_;
    std::vector<int> polygon_arc_;
    Bounds bounds_{};
    double signed_area_ = 0.0;

    // raster acceleration for containment queries: cells are classified
    // inside/outside once; cells crossed by the boundary fall back to an
    // exact winding test against locally bucketed edges
    int raster_n_ = 0;
    Vec2 raster_lo_;
    Vec2 raster_cell_;
    std::vector<signed char> raster_state_;  // 0 outside, 1 inside, 2 near boundary
    std::vector<std::vector<int>> raster_edges_;
};

bool point_in_domain(const Domain& dom, Vec2 p);

struct StarShapedReport {
    bool pass = false;
    double worst_signed_distance = 0.0;
    Vec2 worst_point;       // the flowed point realizing the worst distance
    Vec2 worst_start;       // boundary sample whose trajectory realized it
    double worst_time = 0.0;
    bool has_escape = false;
    Vec2 escape_start;
    double escape_time = 0.0;
};

/// Samples the boundary and checks containment of the flowed points
/// F_t(p) at n_time_samples times in [0, t_max].
StarShapedReport check_star_shaped(const Domain& dom, const DilationExponents& e,
                                   int n_boundary_samples = 256, int n_time_samples = 64,
                                   double t_max = 20.0, double tol = 1e-8);

enum class StarlikeSense {
    NonNegative,  // b n1 + c n2 >= 0
    NonPositive,  // b n1 + c n2 <= 0
    FlippedB,     // -b n1 + c n2 >= 0
};

struct StarlikeReport {
    double margin = 0.0;  // min over nodes of the required-nonnegative form
    double worst_t = 0.0;
    Vec2 worst_point;
    bool pass = false;
    int n_nodes = 0;
};

/// Evaluates the boundary form of the given sense at n_quad midpoint nodes and
/// returns the worst margin (>= 0 means the inequality holds at every node).
StarlikeReport check_starlike_arc(const BoundaryArc& arc, const MultiplierField& mf,
                                  StarlikeSense sense, int n_quad = 256, double tol = 1e-8);

struct CharacteristicStepControl {
    double h0 = 1e-2;          // initial |dy| step
    double tol = 1e-12;        // relative step-doubling error target
    double k_stop = 1e-11;     // stop once -K < k_stop, then project onto K = 0
    double min_step = 1e-14;
    int max_steps = 2000000;
    std::optional<Vec2> box_lo;  // optional clipping box
    std::optional<Vec2> box_hi;
};

struct CharacteristicCurve {
    std::vector<Vec2> points;
    bool reached_sonic = false;
    std::string note;
};

/// Integrates the characteristic ODE dx/dy = -branch * sqrt(-K) from a
/// hyperbolic point until the sonic curve (K = 0) or the clipping box.
/// branch = +1 advances with decreasing y, branch = -1 with increasing y.
CharacteristicCurve characteristic_curve(const TypeChangeCoefficient& tc, Vec2 p0, int branch,
                                         const CharacteristicStepControl& ctl = {});

/// Parameters of the explicit example domain: hyperbolic region bounded by the
/// characteristics y = +-2(sqrt(-x)-2) of K = x, corner near (-4,0) trimmed at
/// x = -4+delta0, elliptic boundary a radius-4 circular arc through (4,0) with
/// rounded junctions of angular size delta1/4 at (0,+-4). The smoothing pieces
/// adjacent to the circle are split where b n1 + c n2 changes sign, so the arc
/// tags encode exactly where each starlike inequality is required.
struct CcExampleParams {
    double M = 10.0;
    double eps = 0.1;
    double delta0 = 0.05;
    double delta1 = 0.05;
    int polygon_resolution = 4096;
};

Domain build_cc_example_domain(const CcExampleParams& params = {});

/// Axis-aligned box as a four-arc domain; edge classes from the sign of K at
/// edge midpoints when a coefficient is supplied, otherwise all elliptic.
Domain make_box_domain(Vec2 lo, Vec2 hi, const TypeChangeCoefficient* tc = nullptr,
                       int polygon_resolution = 1024);

}  // namespace mtp
