#include "conebook/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conebook/errors.hpp"
#include "conebook/parallel.hpp"
#include "conebook/quadrature.hpp"
#include "conebook/rng.hpp"

namespace conebook {

double reach_radius(double t, double theta) {
    if (t < 0.0) throw AngleOutOfRangeError("reach_radius: t must be nonnegative");
    if (theta < 0.0 || theta >= kPi) {
        throw AngleOutOfRangeError(
            "reach_radius: theta must lie in [0, pi); theta = pi means infinite radius");
    }
    return t * std::tan(theta / 2.0);
}

double reach_radius_alt(double t, double theta) {
    if (t < 0.0 || theta < 0.0 || theta >= kPi / 2.0) {
        return std::numeric_limits<double>::infinity();
    }
    return t * std::tan(theta);
}

HalfspaceReachSummary halfspace_reach_mc(double theta, double t, int n, std::uint64_t seed,
                                         int max_segments, bool keep_endpoints) {
    if (n < 1) throw ConfigError("halfspace_reach_mc: n must be >= 1");
    if (theta < 0.0 || theta >= kPi) {
        throw AngleOutOfRangeError("halfspace_reach_mc: theta must lie in [0, pi)");
    }
    const double half = theta / 2.0;
    const double cos_half = std::cos(half);

    std::vector<Vec2> ends(n);
    parallel_for(n, [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const int segments = 1 + static_cast<int>(rng.next_u64() % max_segments);
        // Random height split: K uniform weights normalized to total t.
        double weights[64];
        double wsum = 0.0;
        for (int k = 0; k < segments; ++k) {
            weights[k] = rng.uniform();
            wsum += weights[k];
        }
        Vec2 xy(0.0, 0.0);
        for (int k = 0; k < segments; ++k) {
            const double height = t * weights[k] / wsum;
            // Direction uniform over the solid cap of half-angle theta/2.
            const double c = 1.0 - rng.uniform() * (1.0 - cos_half);
            const double tan_chi = std::sqrt(std::max(0.0, 1.0 - c * c)) / c;
            const double a = rng.uniform(0.0, kTwoPi);
            xy += height * tan_chi * Vec2(std::cos(a), std::sin(a));
        }
        ends[i] = xy;
    });

    HalfspaceReachSummary out;
    out.law_radius = t * std::tan(half);
    out.alt_radius = reach_radius_alt(t, theta);
    for (const Vec2& e : ends) out.max_radius = std::max(out.max_radius, e.norm());
    if (keep_endpoints) out.endpoints = std::move(ends);
    return out;
}

double reach_disk_radius(const DiskSpec& a, double t, double theta, ReachLaw law) {
    if (a.radius <= 0.0) throw EmptyAError("reach disk: A has nonpositive radius");
    const double base = reach_radius(t, theta);
    if (law == ReachLaw::Scaled) return base * kPi * a.radius * a.radius;
    return base + a.radius;
}

double prob_formula(const DiskSpec& a, const PageRegion& b, double t, double theta,
                    PageMeasure m, ReachLaw law, double tol) {
    if (t <= 0.0) throw AngleOutOfRangeError("prob_formula: t must be positive");
    const double radius = reach_disk_radius(a, t, theta, law);
    const Complex center = hopf_flow(PagePoint{0.0, a.center}.embed(), t).z1;
    if (radius <= 0.0) return 0.0;

    if (b.kind == PageRegion::Kind::Empty) return 0.0;
    if (b.kind == PageRegion::Kind::Grid) {
        // No radial form: dense polar quadrature of the indicator.
        const PageRegion d = PageRegion::disk(center, radius);
        QuadratureGrid g;
        g.radial = 256;
        g.angular = 1024;
        return region_integrate([&](Complex w) { return b.contains(w) ? 1.0 : 0.0; }, d, m, g);
    }

    // Exact in radius, adaptive Simpson in angle around the reach disk
    // center. The page clip is one more radial interval.
    auto angular_density = [&](double psi) {
        const double c = std::cos(psi), s = std::sin(psi);
        // Extent inside the reach disk and the page along this ray.
        const Complex d0 = center;  // ray origin is the disk center
        const double bpage = d0.real() * c + d0.imag() * s;
        const double disc = bpage * bpage + 1.0 - std::norm(d0);
        const double page_hi = disc <= 0.0 ? 0.0 : std::max(0.0, -bpage + std::sqrt(disc));
        const double hi_cap = std::min(radius, page_hi);
        if (hi_cap <= 0.0) return 0.0;
        const RadialIntervals iv = radial_intervals(b, center, psi);
        double acc = 0.0;
        for (int k = 0; k < iv.count; ++k) {
            const double lo = std::max(0.0, iv.lo[k]);
            const double hi = std::min(hi_cap, iv.hi[k]);
            if (hi > lo) acc += 0.5 * (hi * hi - lo * lo);
        }
        return acc;
    };
    const double area = adaptive_simpson(angular_density, 0.0, kTwoPi, tol);
    return area * m.density();
}

namespace {

struct PathBearing {
    VelocityModel model;
    double cap_frac = 0.0;   // UniformCap: fraction of (1 - cos half)
    double base_frac = 0.0;  // UniformBase: radial fraction of tan(half)
    double azimuth = 0.0;
};

Vec4 direction_at(const ConeField& field, const SpherePoint& p, const PathBearing& b) {
    const Cone cone = field.enclosing(p);
    const Vec4& axis = cone.axis.v;
    if (cone.half_angle < 1e-15) return axis;
    Vec4 e1, e2;
    perp_frame(p, axis, &e1, &e2);
    const Vec4 lateral = std::cos(b.azimuth) * e1 + std::sin(b.azimuth) * e2;
    if (b.model == VelocityModel::UniformCap) {
        const double c = 1.0 - b.cap_frac * (1.0 - std::cos(cone.half_angle));
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        return c * axis + s * lateral;
    }
    const double off = std::tan(cone.half_angle) * b.base_frac;
    return (axis + off * lateral).normalized();
}

// One theta-clock step of size `scale` with midpoint projection; returns the
// new point (normalized back to S^3).
SpherePoint advance(const ConeField& field, const SpherePoint& p, const PathBearing& b,
                    double scale) {
    const Vec4 dir = direction_at(field, p, b);
    const double rate = dtheta(p, dir);
    if (rate <= 1e-12) {
        throw FieldDegenerateError("prob_mc: cone direction does not advance theta");
    }
    const Vec4 v = dir / rate;
    const SpherePoint pm =
        SpherePoint::from_ambient(p.ambient() + 0.5 * scale * v).normalized();
    const Vec4 dir2 = direction_at(field, pm, b);
    const double rate2 = dtheta(pm, dir2);
    if (rate2 <= 1e-12) {
        throw FieldDegenerateError("prob_mc: cone direction does not advance theta");
    }
    return SpherePoint::from_ambient(p.ambient() + scale * (dir2 / rate2)).normalized();
}

double wrap_pi(double a) {
    while (a > kPi) a -= kTwoPi;
    while (a <= -kPi) a += kTwoPi;
    return a;
}

}  // namespace

ProbMcResult prob_mc(const ConeField& field, const DiskSpec& a, const PageRegion& b,
                     double t, int n, std::uint64_t seed, VelocityModel model,
                     double theta_step, std::vector<Complex>* endpoints) {
    if (n < 100) throw ConfigError("prob_mc: n must be >= 100");
    if (a.radius <= 0.0) throw EmptyAError("prob_mc: A has nonpositive radius");
    if (t <= 0.0) throw ConfigError("prob_mc: t must be positive");

    std::vector<char> hit(n, 0);
    std::vector<Complex> ends(n);

    parallel_for(n, [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const Complex w0 =
            a.center + a.radius * std::sqrt(rng.uniform()) *
                           std::polar(1.0, rng.uniform(0.0, kTwoPi));
        PathBearing bearing;
        bearing.model = model;
        bearing.cap_frac = rng.uniform();
        bearing.base_frac = std::sqrt(rng.uniform());
        bearing.azimuth = rng.uniform(0.0, kTwoPi);

        SpherePoint p = PagePoint{0.0, w0}.embed();
        double lift = 0.0;
        double th_prev = theta(p);
        const long max_steps = static_cast<long>(4.0 * t / theta_step) + 1000;
        for (long step = 0; step < max_steps && lift < t; ++step) {
            SpherePoint pn = advance(field, p, bearing, theta_step);
            double dl = wrap_pi(theta(pn) - th_prev);
            if (lift + dl > t) {
                // Bisection on the step scale to land the lift exactly on t.
                double lo = 0.0, hi = theta_step;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const SpherePoint pm2 = advance(field, p, bearing, mid);
                    const double dm = wrap_pi(theta(pm2) - th_prev);
                    if (lift + dm > t) {
                        hi = mid;
                    } else {
                        lo = mid;
                        pn = pm2;
                        dl = dm;
                    }
                    if (std::abs(lift + dm - t) < 1e-13) {
                        pn = pm2;
                        dl = dm;
                        break;
                    }
                }
            }
            p = pn;
            lift += dl;
            th_prev = theta(p);
        }
        ends[i] = p.z1;
        hit[i] = b.contains(p.z1) ? 1 : 0;
    });

    ProbMcResult out;
    out.n = n;
    for (char h : hit) out.hits += h;
    out.estimate = static_cast<double>(out.hits) / n;
    const double se = std::sqrt(std::max(0.0, out.estimate * (1.0 - out.estimate) / n));
    out.ci_lo = std::max(0.0, out.estimate - 1.96 * se);
    out.ci_hi = std::min(1.0, out.estimate + 1.96 * se);
    if (endpoints) *endpoints = std::move(ends);
    return out;
}

}  // namespace conebook
