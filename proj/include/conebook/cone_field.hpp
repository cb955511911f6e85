#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conebook/sphere_geometry.hpp"

namespace conebook {

// Solid round cone in T_p S^3: unit axis plus half-opening angle. The
// reported inner angle is the full opening, i.e. 2 * half_angle;
// half_angle = 0 encodes a ray (the flow case).
struct Cone {
    TangentVector axis;
    double half_angle = 0.0;
};

// Minimal enclosing spherical cap of a set of unit tangent directions at a
// common base point, via Welzl's randomized incremental minimal-ball
// algorithm in the tangent space. Directions are normalized internally.
// Throws NoEnclosingConeError if the directions span more than an open
// half-space (cap angle >= pi/2), ZeroVectorError on a near-zero input.
Cone smallest_enclosing_cone(const SpherePoint& base, const std::vector<Vec4>& dirs);

// Strict angular interiority: angle(v, axis) < half_angle - tol.
bool is_interior(const Vec4& v, const Cone& c, double tol);

// Cone field on S^3: a generator map p -> finite set of unit tangent
// directions (the raw cone), with the smallest enclosing algebraic cone
// computed on demand. Built-in fields also supply the envelope in closed
// form; tabulated/custom fields fall back to the minimal-cap algorithm.
class ConeField {
public:
    using Generator = std::function<std::vector<Vec4>(const SpherePoint&)>;
    using Enclosing = std::function<Cone(const SpherePoint&)>;

    ConeField(std::string name, Generator gen, Enclosing analytic = nullptr)
        : name_(std::move(name)), gen_(std::move(gen)), analytic_(std::move(analytic)) {}

    const std::string& name() const { return name_; }

    std::vector<Vec4> generators(const SpherePoint& p) const { return gen_(p); }

    Cone enclosing(const SpherePoint& p) const {
        if (analytic_) return analytic_(p);
        return smallest_enclosing_cone(p, gen_(p));
    }

private:
    std::string name_;
    Generator gen_;
    Enclosing analytic_;
};

// Inner angle of the smallest algebraic cone containing the field at p.
double inner_angle(const ConeField& field, const SpherePoint& p);

struct AdaptednessFlag {
    bool pass = true;
    double worst = 0.0;  // signed margin of the worst sample; flag-specific
    SpherePoint witness{Complex(0, 1), Complex(0, 0)};
};

// Adaptedness report: (1) binding tangency, (2) dtheta positivity,
// (3) alpha positivity, (4) Reeb interiority.
struct AdaptednessReport {
    AdaptednessFlag binding_tangency;
    AdaptednessFlag dtheta_positive;
    AdaptednessFlag alpha_positive;
    AdaptednessFlag reeb_interior;

    bool all_pass() const {
        return binding_tangency.pass && dtheta_positive.pass && alpha_positive.pass &&
               reeb_interior.pass;
    }
};

using OneForm = std::function<double(const SpherePoint&, const Vec4&)>;

// Samples `samples` binding points for flag (1) and `samples` off-binding
// points for flags (2)-(4). Violations are reported, not thrown.
AdaptednessReport check_adapted(const ConeField& field, const OneForm& alpha, int samples,
                                double tol, std::uint64_t seed = 0);

// --- built-in fields -------------------------------------------------------

// (a) Degenerate ray field along the Reeb (Hopf) direction.
ConeField hopf_ray_field();

// Solid cone of constant full inner angle `inner_angle0` about the Reeb
// axis, no collar. Used for the integrability anchors; not adapted near the
// binding.
ConeField constant_cone_field(double inner_angle0, int ring = 12);

// (b) Constant-angle cone about the Reeb axis with a smooth collar
// degeneration to TB near the binding. The half-angle profile is
//     min(inner_angle0/2 * smoothstep(|z2|/eps), 0.9 * atan(|z2|/|z1|));
// the atan clamp keeps dtheta strictly positive on the whole cone, which
// the bare smoothstep profile does not.
ConeField collared_cone_field(double inner_angle0 = 0.4, double collar_eps = 0.1,
                              int ring = 12);

// (c) 2-dimensional fan from the Reeb direction toward the dtheta-dual
// direction, spanning `span` radians (planar fan, one-sided from Reeb).
ConeField dtheta_fan_field(double span, int count = 9);

// Planar fan of total opening 2*beta centered on the Reeb axis, in the
// plane spanned by the Reeb direction and the second tangent basis vector.
ConeField planar_fan_field(double beta, int count = 9);

// Constructed adaptedness violations (each breaks exactly one flag of the
// collared field): a non-TB generator on the binding, and an off-binding
// generator with dtheta < 0 but alpha > 0.
ConeField violation_binding_field(double inner_angle0 = 0.4, double collar_eps = 0.1);
ConeField violation_dtheta_field(double inner_angle0 = 0.4, double collar_eps = 0.1);

// Tabulated field from CSV rows x1,y1,x2,y2,ax1,ay1,ax2,ay2,half_angle,
// interpolated by inverse-distance weighting over the 4 nearest samples
// (axis re-projected to the tangent space and normalized).
ConeField cone_field_from_csv(const std::string& path);

double smoothstep(double x);

// Two unit vectors completing {p, axis} to an orthonormal frame of R^4;
// deterministic in (p, axis).
void perp_frame(const SpherePoint& p, const Vec4& axis, Vec4* e1, Vec4* e2);

}  // namespace conebook
