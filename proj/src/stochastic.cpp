#include "conebook/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "conebook/errors.hpp"
#include "conebook/parallel.hpp"

namespace conebook {

void SdeConfig::validate() const {
    if (!(mu3 > 0.0)) throw ConfigError("sde: mu3 must be positive");
    if (!(step_h > 0.0)) throw ConfigError("sde: step_h must be positive");
    if (!(horizon >= step_h)) throw ConfigError("sde: horizon must be >= step_h");
    for (double r : {0.0, 0.25, 0.5, 0.75, 0.999}) {
        if (sigma(r) < 0.0) throw ConfigError("sde: sigma must be nonnegative");
    }
}

SamplePath euler_maruyama_halfspace(const SdeConfig& cfg, const Section& section,
                                    HalfSpaceState start, RngStream& rng,
                                    int record_every) {
    if (start.z < 0.0) throw ConfigError("euler_maruyama_halfspace: start.z must be >= 0");
    SamplePath path;
    const double h = cfg.step_h;
    const double sqrt_h = std::sqrt(h);
    const long steps = static_cast<long>(std::llround(cfg.horizon / h));
    double x = start.x, y = start.y, z = start.z;
    double t = 0.0;
    int next_level = static_cast<int>(std::floor(z / kTwoPi)) + 1;
    if (record_every > 0) path.states.push_back(Vec3(x, y, z));
    for (long k = 0; k < steps; ++k) {
        const Complex w(x, y);
        const double s = cfg.sigma(std::min(1.0, std::abs(w)));
        const double drift = cfg.mu3 * section.tau_page(w) * h;
        const double z_prev = z;
        x += s * sqrt_h * rng.gaussian();
        y += s * sqrt_h * rng.gaussian();
        z += s * sqrt_h * rng.gaussian() + drift;
        if (z < 0.0) z = -z;  // reflecting boundary
        t += h;
        while (z >= kTwoPi * next_level) {
            // Linear interpolation of the crossing point within the step.
            const double f = (kTwoPi * next_level - z_prev) / (z - z_prev);
            path.crossings.push_back(
                Crossing{next_level, Complex(x, y) * f + w * (1.0 - f), t});
            ++next_level;
        }
        if (record_every > 0 && (k + 1) % record_every == 0) {
            path.states.push_back(Vec3(x, y, z));
        }
    }
    path.end = HalfSpaceState{x, y, z};
    path.theta_lift = z;
    path.time = t;
    return path;
}

namespace {

// Rotates u in the plane span{axis, u} so its angle to axis becomes
// `target`; |u| is preserved.
Vec4 rotate_toward(const Vec4& u, const Vec4& axis, double target) {
    const double norm = u.norm();
    const Vec4 uhat = u / norm;
    Vec4 perp = uhat - uhat.dot(axis) * axis;
    const double pn = perp.norm();
    if (pn < 1e-14) return norm * std::cos(target) * axis;  // degenerate: on axis
    perp /= pn;
    return norm * (std::cos(target) * axis + std::sin(target) * perp);
}

}  // namespace

SamplePath euler_maruyama_cone(const SdeConfig& cfg, const ConeField& field,
                               const Section& section, SpherePoint start, RngStream& rng,
                               int max_crossings, const PageRegion* stop_region,
                               int record_every) {
    if (std::abs(start.z2) <= 1e-9) {
        throw StuckAtBindingError("euler_maruyama_cone: start point on the binding");
    }
    SamplePath path;
    const double h = cfg.step_h;
    const double sqrt_h = std::sqrt(h);
    constexpr double kInteriorTol = 1e-9;
    constexpr double kShellFraction = 1.0 - 1e-6;

    SpherePoint p = start;
    double lift = theta(p);
    double th_prev = lift;
    int next_level = static_cast<int>(std::floor(lift / kTwoPi)) + 1;
    double t = 0.0;
    long step_count = 0;
    if (record_every > 0) path.states.push_back(Vec3(p.z1.real(), p.z1.imag(), lift));

    while (max_crossings <= 0 ||
           static_cast<int>(path.crossings.size()) < max_crossings) {
        if (std::abs(p.z2) < 1e-9) {
            path.stuck_at_binding = true;
            break;
        }
        const Cone cone = field.enclosing(p);
        const Vec4& axis = cone.axis.v;
        Vec4 e1, e2;
        perp_frame(p, axis, &e1, &e2);
        const double s = cfg.sigma(std::min(1.0, std::abs(p.z1)));
        const double drift = cfg.mu3 * section.tau_at(p) * h;

        Vec4 u;
        bool interior = false;
        for (int attempt = 0; attempt < 64 && !interior; ++attempt) {
            u = s * sqrt_h * (rng.gaussian() * axis + rng.gaussian() * e1 +
                              rng.gaussian() * e2) +
                drift * axis;
            const double un = u.norm();
            if (un < 1e-15) {
                u = drift * axis;
                interior = true;
                break;
            }
            interior = is_interior(u, cone, kInteriorTol);
            if (cfg.mode == ConstraintMode::Project) break;
        }
        if (!interior) {
            // Minimal rotation onto the interior shell of the cone.
            u = rotate_toward(u, axis, kShellFraction * std::max(cone.half_angle, 0.0));
        }

        const SpherePoint pn = SpherePoint::from_ambient(p.ambient() + u).normalized();
        double dl = theta(pn) - th_prev;
        while (dl > kPi) dl -= kTwoPi;
        while (dl <= -kPi) dl += kTwoPi;
        t += h;
        ++step_count;
        const double lift_prev = lift;
        const Complex z1_prev = p.z1;
        lift += dl;
        p = pn;
        th_prev = theta(p);

        while (lift >= kTwoPi * next_level) {
            // Crossing levels are multiples of 2 pi, so the interpolated z1
            // is already the page coordinate of the crossing point.
            const double f = lift > lift_prev
                                 ? (kTwoPi * next_level - lift_prev) / (lift - lift_prev)
                                 : 1.0;
            const Complex w = z1_prev + f * (p.z1 - z1_prev);
            path.crossings.push_back(Crossing{next_level, w, t});
            if (stop_region && stop_region->contains(w)) {
                path.end_point = p;
                path.theta_lift = lift;
                path.time = t;
                return path;
            }
            ++next_level;
        }
        if (record_every > 0 && step_count % record_every == 0) {
            path.states.push_back(Vec3(p.z1.real(), p.z1.imag(), lift));
        }
        if (cfg.horizon > 0.0 && max_crossings <= 0 && t >= cfg.horizon) break;
    }
    path.end_point = p;
    path.theta_lift = lift;
    path.time = t;
    return path;
}

RecurrenceReport recurrence_experiment(const SdeConfig& cfg, const ConeField& field,
                                       const Section& section, Complex p0,
                                       const PageRegion& u, int n_paths, int max_returns,
                                       std::uint64_t seed) {
    if (n_paths < 100) throw ConfigError("recurrence_experiment: n_paths must be >= 100");
    if (u.kind == PageRegion::Kind::Empty) {
        throw ConfigError("recurrence_experiment: U must be nonempty");
    }
    cfg.validate();

    RecurrenceReport report;
    report.n_paths = n_paths;
    report.max_returns = max_returns;
    report.first_hit.assign(n_paths, -1);
    std::vector<char> stuck_flags(n_paths, 0);

    const SpherePoint start = PagePoint{0.0, p0}.embed();
    parallel_for(n_paths, [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const SamplePath path =
            euler_maruyama_cone(cfg, field, section, start, rng, max_returns, &u);
        if (path.stuck_at_binding) stuck_flags[i] = 1;
        if (!path.crossings.empty() && u.contains(path.crossings.back().w)) {
            report.first_hit[i] = path.crossings.back().n;
        }
    });
    for (int i = 0; i < n_paths; ++i) {
        if (stuck_flags[i]) report.stuck.push_back(i);
    }

    report.horizons = {max_returns / 4, max_returns / 2, max_returns};
    for (int horizon : report.horizons) {
        long hits = 0;
        double acc = 0.0;
        for (int hit : report.first_hit) {
            const int n_eff = hit < 0 ? max_returns : hit;
            if (hit >= 0 && hit <= horizon) ++hits;
            acc += std::min(n_eff, horizon);
        }
        report.hit_fraction.push_back(static_cast<double>(hits) / n_paths);
        report.trunc_mean.push_back(acc / n_paths);
    }
    std::vector<int> sorted;
    sorted.reserve(n_paths);
    for (int hit : report.first_hit) sorted.push_back(hit < 0 ? max_returns : hit);
    std::sort(sorted.begin(), sorted.end());
    report.median = n_paths % 2 == 1
                        ? sorted[n_paths / 2]
                        : 0.5 * (sorted[n_paths / 2 - 1] + sorted[n_paths / 2]);

    // Least-squares slope of log S(n) against log n over the upper half of
    // the observed range, S(n) = fraction of paths with first hit > n.
    {
        const int n_lo = std::max(1, static_cast<int>(report.median));
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int count = 0;
        for (int n = n_lo; n < max_returns; ++n) {
            const double survivors = static_cast<double>(
                sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), n));
            const double s = survivors / n_paths;
            if (s <= 0.0 || s >= 1.0) continue;
            const double x = std::log(static_cast<double>(n));
            const double y = std::log(s);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
        const double denom = count * sxx - sx * sx;
        report.tail_slope = count >= 2 && std::abs(denom) > 1e-12
                                ? (count * sxy - sx * sy) / denom
                                : 0.0;
    }
    return report;
}

}  // namespace conebook
