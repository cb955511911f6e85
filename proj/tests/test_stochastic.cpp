#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "conebook/cone_field.hpp"
#include "conebook/errors.hpp"
#include "conebook/invariants.hpp"
#include "conebook/stochastic.hpp"

using namespace conebook;

namespace {

Section zero_drift_section() {
    return Section::custom("zero", [](Complex) { return 0.0; },
                           [](Complex w) { return w; }, true);
}

}  // namespace

TEST_CASE("sde config validation") {
    SdeConfig bad;
    bad.mu3 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.mu3 = 0.1;
    bad.step_h = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.step_h = 1e-3;
    bad.horizon = 1e-5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.horizon = 1.0;
    bad.sigma = [](double) { return -1.0; };
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.sigma = [](double) { return 1.0; };
    bad.validate();
}

TEST_CASE("zero volatility reduces to the exact drift line") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.0; };
    cfg.mu3 = 0.1;
    cfg.horizon = 2.0;
    RngStream rng(0, 0);
    const SamplePath p =
        euler_maruyama_halfspace(cfg, Section::reeb_hopf(), HalfSpaceState{}, rng);
    CHECK(p.end.x == 0.0);
    CHECK(p.end.y == 0.0);
    CHECK(p.end.z == doctest::Approx(cfg.mu3 * kTwoPi * cfg.horizon).epsilon(1e-12));
}

TEST_CASE("half-space moments match the wiener oracle") {
    SdeConfig cfg;
    cfg.mu3 = 0.1;
    cfg.horizon = 1.0;
    const int n = 2000;

    // drift disabled via tau = 0: all three components are Brownian
    const Section zero = zero_drift_section();
    double sx = 0, sxx = 0, sy = 0, syy = 0, sz = 0, szz = 0;
    for (int i = 0; i < n; ++i) {
        RngStream rng(1, static_cast<std::uint64_t>(i));
        const SamplePath p =
            euler_maruyama_halfspace(cfg, zero, HalfSpaceState{0, 0, 50.0}, rng);
        sx += p.end.x;
        sxx += p.end.x * p.end.x;
        sy += p.end.y;
        syy += p.end.y * p.end.y;
        sz += p.end.z - 50.0;
        szz += (p.end.z - 50.0) * (p.end.z - 50.0);
    }
    const double t = cfg.horizon;
    const double se_var = t * std::sqrt(2.0 / n);
    CHECK(std::abs(sxx / n - (sx / n) * (sx / n) - t) < 3.0 * se_var);
    CHECK(std::abs(syy / n - (sy / n) * (sy / n) - t) < 3.0 * se_var);
    CHECK(std::abs(szz / n - (sz / n) * (sz / n) - t) < 3.0 * se_var);

    // with tau = 2 pi the z-drift is mu3 * 2 pi * t
    double drift = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream rng(2, static_cast<std::uint64_t>(i));
        const SamplePath p = euler_maruyama_halfspace(cfg, Section::reeb_hopf(),
                                                      HalfSpaceState{0, 0, 50.0}, rng);
        drift += p.end.z - 50.0;
    }
    const double se_mean = std::sqrt(t / n);
    CHECK(std::abs(drift / n - cfg.mu3 * kTwoPi * t) < 3.0 * se_mean);
}

TEST_CASE("reflected paths never go below the floor") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 3.0; };
    cfg.horizon = 0.5;
    for (int i = 0; i < 20; ++i) {
        RngStream rng(3, static_cast<std::uint64_t>(i));
        const SamplePath p =
            euler_maruyama_halfspace(cfg, Section::reeb_hopf(), HalfSpaceState{}, rng, 1);
        for (const Vec3& s : p.states) CHECK(s[2] >= 0.0);
    }
}

TEST_CASE("deterministic drift produces evenly spaced crossings") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.0; };
    cfg.mu3 = 0.2;
    cfg.horizon = 26.0;
    RngStream rng(0, 0);
    const SamplePath p =
        euler_maruyama_halfspace(cfg, Section::reeb_hopf(), HalfSpaceState{}, rng);
    // z(t) = 0.2 * 2 pi * t crosses 2 pi n at t = 5 n
    REQUIRE(p.crossings.size() == 5);
    for (std::size_t k = 0; k < p.crossings.size(); ++k) {
        CHECK(p.crossings[k].n == static_cast<int>(k) + 1);
        // a crossing landing exactly on a step boundary is detected one
        // step later, so allow 1.5 steps
        CHECK(std::abs(p.crossings[k].time - 5.0 * (k + 1)) <= 1.5 * cfg.step_h);
    }
}

TEST_CASE("cone integrator with zero volatility follows the section") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.0; };
    cfg.mu3 = 0.1;
    const SpherePoint start = PagePoint{0.0, Complex(0.4, 0.2)}.embed();
    RngStream rng(0, 0);
    const SamplePath p = euler_maruyama_cone(cfg, hopf_ray_field(), Section::reeb_hopf(),
                                             start, rng, 2);
    REQUIRE(p.crossings.size() == 2);
    for (const Crossing& c : p.crossings) {
        CHECK(std::abs(c.w - Complex(0.4, 0.2)) < 1e-6);  // identity return map
    }
    CHECK_FALSE(p.stuck_at_binding);
    CHECK(p.theta_lift >= 2.0 * kTwoPi);
}

TEST_CASE("cone integrator collapses to the ray flow as the angle vanishes") {
    SdeConfig cfg;
    cfg.mu3 = 0.1;
    const SpherePoint start = PagePoint{0.0, Complex(0.3, 0.0)}.embed();
    RngStream r1(5, 0), r2(5, 0);
    const SamplePath ray = euler_maruyama_cone(cfg, hopf_ray_field(),
                                               Section::reeb_hopf(), start, r1, 1);
    const SamplePath thin = euler_maruyama_cone(cfg, constant_cone_field(1e-7),
                                                Section::reeb_hopf(), start, r2, 1);
    REQUIRE(ray.crossings.size() == 1);
    REQUIRE(thin.crossings.size() == 1);
    CHECK(std::abs(ray.crossings[0].w - thin.crossings[0].w) < 1e-3);
    CHECK(std::abs(ray.time - thin.time) <= cfg.step_h + 1e-12);
}

TEST_CASE("cone integrator rejects binding starts") {
    SdeConfig cfg;
    RngStream rng(0, 0);
    CHECK_THROWS_AS(euler_maruyama_cone(cfg, hopf_ray_field(), Section::reeb_hopf(),
                                        SpherePoint{Complex(1, 0), Complex(0, 0)}, rng, 1),
                    StuckAtBindingError);
}

TEST_CASE("recurrence experiment basics and determinism") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.5; };
    cfg.mu3 = 0.3;
    const ConeField field = collared_cone_field(0.4, 0.1);
    const Section section = Section::reeb_hopf();
    const Complex p0(0.3, 0.0);
    const PageRegion u = PageRegion::disk(p0, 0.5);

    setenv("CONEBOOK_THREADS", "2", 1);
    const RecurrenceReport a =
        recurrence_experiment(cfg, field, section, p0, u, 100, 6, 11);
    setenv("CONEBOOK_THREADS", "5", 1);
    const RecurrenceReport b =
        recurrence_experiment(cfg, field, section, p0, u, 100, 6, 11);
    unsetenv("CONEBOOK_THREADS");
    CHECK(a.first_hit == b.first_hit);

    REQUIRE(a.horizons.size() == 3);
    for (std::size_t i = 1; i < a.horizons.size(); ++i) {
        CHECK(a.hit_fraction[i] >= a.hit_fraction[i - 1]);
        CHECK(a.trunc_mean[i] >= a.trunc_mean[i - 1]);
    }
    CHECK(a.hit_fraction.back() > 0.5);
    for (int hit : a.first_hit) {
        CHECK(hit != 0);  // first hit indices are positive or censored (-1)
    }
}

TEST_CASE("full-page target is hit at the first return") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.5; };
    cfg.mu3 = 0.3;
    const RecurrenceReport rep =
        recurrence_experiment(cfg, collared_cone_field(0.4, 0.1), Section::reeb_hopf(),
                              Complex(0.3, 0.0), PageRegion::full(), 100, 4, 13);
    for (int hit : rep.first_hit) CHECK(hit == 1);
    CHECK(rep.hit_fraction.back() == 1.0);
    CHECK(rep.median == 1.0);
}

TEST_CASE("halving the step leaves the hit fractions within the interval width") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.5; };
    cfg.mu3 = 0.3;
    const ConeField field = collared_cone_field(0.4, 0.1);
    const Complex p0(0.3, 0.0);
    const PageRegion u = PageRegion::disk(p0, 0.5);
    const RecurrenceReport coarse =
        recurrence_experiment(cfg, field, Section::reeb_hopf(), p0, u, 100, 4, 17);
    cfg.step_h /= 2.0;
    const RecurrenceReport fine =
        recurrence_experiment(cfg, field, Section::reeb_hopf(), p0, u, 100, 4, 17);
    for (std::size_t i = 0; i < coarse.hit_fraction.size(); ++i) {
        const double f = coarse.hit_fraction[i];
        const double width = 2.0 * 1.96 * std::sqrt(std::max(f * (1.0 - f), 0.25 / 100) / 100);
        CHECK(std::abs(fine.hit_fraction[i] - f) <= width);
    }
}

TEST_CASE("project and reject modes are reproducible and comparable") {
    SdeConfig cfg;
    cfg.sigma = [](double) { return 0.5; };
    cfg.mu3 = 0.3;
    cfg.mode = ConstraintMode::Reject;
    const SpherePoint start = PagePoint{0.0, Complex(0.3, 0.0)}.embed();
    RngStream r1(7, 0), r2(7, 0);
    const SamplePath a = euler_maruyama_cone(cfg, collared_cone_field(0.4, 0.1),
                                             Section::reeb_hopf(), start, r1, 1);
    const SamplePath b = euler_maruyama_cone(cfg, collared_cone_field(0.4, 0.1),
                                             Section::reeb_hopf(), start, r2, 1);
    REQUIRE(a.crossings.size() == b.crossings.size());
    CHECK(a.crossings[0].w == b.crossings[0].w);
    CHECK_FALSE(a.stuck_at_binding);
}
