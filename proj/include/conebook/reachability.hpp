#pragma once

#include <cstdint>
#include <vector>

#include "conebook/cone_field.hpp"
#include "conebook/page_region.hpp"
#include "conebook/sphere_geometry.hpp"

namespace conebook {

// Future time-t region radius t * tan(theta/2), with theta the FULL opening
// angle of the cone. Throws AngleOutOfRangeError for theta >= pi (infinite
// radius) or theta < 0, and for t < 0.
double reach_radius(double t, double theta);

// The competing edge-to-vertical reading t * tan(theta), reported next to
// the normative law for documentation. Valid for theta < pi/2.
double reach_radius_alt(double t, double theta);

struct HalfspaceReachSummary {
    double max_radius = 0.0;      // empirical max horizontal displacement at height t
    double law_radius = 0.0;      // t * tan(theta/2)
    double alt_radius = 0.0;      // t * tan(theta), the competing convention
    std::vector<Vec2> endpoints;  // horizontal endpoint scatter
};

// Independent oracle for the reachability law: n piecewise-constant-direction
// curves in the upper half-space from the origin, velocity inside the
// constant vertical cone of half-angle theta/2, vertical rate normalized to
// 1, evaluated at height t.
HalfspaceReachSummary halfspace_reach_mc(double theta, double t, int n, std::uint64_t seed,
                                         int max_segments = 8, bool keep_endpoints = true);

// Disk A = A(p, r) on the 0-page.
struct DiskSpec {
    Complex center{0.0, 0.0};
    double radius = 0.0;
};

enum class ReachLaw {
    Scaled,     // radius = t * tan(theta/2) * mu(A), mu(A) = pi r^2
    Minkowski,  // radius = t * tan(theta/2) + r, the containment certificate
};

// Radius of the reach disk D_{A,theta}^t under the given law.
double reach_disk_radius(const DiskSpec& a, double t, double theta, ReachLaw law);

// mu(B intersect D_{A,theta}^t) in the measure m, the disk D centered at the
// page coordinate of the time-t Hopf image of A's center and clipped to the
// page. Exact radial integration + adaptive Simpson in angle for regions
// with a radial form; dense quadrature for Grid regions. Throws EmptyAError
// if A has nonpositive radius.
double prob_formula(const DiskSpec& a, const PageRegion& b, double t, double theta,
                    PageMeasure m, ReachLaw law = ReachLaw::Scaled, double tol = 1e-9);

enum class VelocityModel { UniformCap, UniformBase };

struct ProbMcResult {
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long hits = 0;
    int n = 0;
};

// Trajectory-level oracle: start points uniform in A, trajectories advanced
// at unit rate in theta under the cone field, velocity realized per step
// from per-path cone-cap coordinates (so a path holds its bearing inside
// the moving cone), stopped when the theta-lift reaches t. Returns the
// fraction of endpoints in B with a 95% binomial interval. Endpoints are
// optionally collected for plots.
ProbMcResult prob_mc(const ConeField& field, const DiskSpec& a, const PageRegion& b,
                     double t, int n, std::uint64_t seed,
                     VelocityModel model = VelocityModel::UniformBase,
                     double theta_step = 1e-3, std::vector<Complex>* endpoints = nullptr);

}  // namespace conebook
