#include "conebook/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "conebook/errors.hpp"
#include "conebook/parallel.hpp"

namespace conebook {

namespace {

Complex clamp_to_open_disk(Complex w) {
    const double n = std::abs(w);
    if (n >= 1.0 - 1e-9) return w * ((1.0 - 1e-9) / n);
    return w;
}

double perturbed_speed(const SpherePoint& p0, double th, double eps) {
    const SpherePoint p = hopf_flow(p0, th);
    const double x1 = p.z1.real();
    return 1.0 + eps * x1 * x1;
}

// Time to advance the open-book angle by 2 pi when dtheta/dt = 1 + eps b:
// RK4 on t(theta) would be the quadrature oracle, so instead we march the
// ODE forward in its own time and bracket the crossing.
double perturbed_return_time(Complex w, double eps) {
    const SpherePoint p0 = PagePoint{0.0, clamp_to_open_disk(w)}.embed();
    auto g = [&](double th) { return perturbed_speed(p0, th, eps); };
    const int steps = 4096;
    const double dt_guess = kTwoPi / steps;  // crude; speed is within [1, 1+eps]
    double t = 0.0, th = 0.0;
    auto rk4 = [&](double th_cur, double dt) {
        const double k1 = g(th_cur);
        const double k2 = g(th_cur + 0.5 * dt * k1);
        const double k3 = g(th_cur + 0.5 * dt * k2);
        const double k4 = g(th_cur + dt * k3);
        return th_cur + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    while (true) {
        const double th_next = rk4(th, dt_guess);
        if (th_next >= kTwoPi) break;
        th = th_next;
        t += dt_guess;
    }
    // Bisection on the final partial step.
    double lo = 0.0, hi = dt_guess;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rk4(th, mid) >= kTwoPi) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return t + 0.5 * (lo + hi);
}

}  // namespace

Section Section::reeb_hopf() {
    Section s;
    s.kind_ = Kind::ReebHopf;
    s.name_ = "reeb_hopf";
    s.tau_ = [](Complex) { return kTwoPi; };
    s.map_ = [](Complex w) { return w; };
    s.identity_return_ = true;
    return s;
}

Section Section::perturbed_flow(double eps) {
    if (eps <= -1.0) throw ConfigError("perturbed_flow: eps must keep 1 + eps*b positive");
    Section s;
    s.kind_ = Kind::PerturbedFlow;
    s.name_ = "perturbed_flow";
    s.tau_ = [eps](Complex w) { return perturbed_return_time(w, eps); };
    s.map_ = [](Complex w) { return w; };  // Hopf orbits are closed
    s.identity_return_ = true;
    return s;
}

Section Section::custom(std::string name, std::function<double(Complex)> tau,
                        std::function<Complex(Complex)> return_map, bool identity_return) {
    Section s;
    s.kind_ = Kind::Custom;
    s.name_ = std::move(name);
    s.tau_ = std::move(tau);
    s.map_ = std::move(return_map);
    s.identity_return_ = identity_return;
    return s;
}

double Section::nth_return_time(Complex w, int n) const {
    if (n < 1) throw ConfigError("nth_return_time: n must be >= 1");
    if (identity_return_) return n * tau_(w);
    double acc = 0.0;
    Complex cur = w;
    for (int k = 0; k < n; ++k) {
        acc += tau_(cur);
        cur = map_(cur);
    }
    return acc;
}

Complex Section::nth_return_point(Complex w, int n) const {
    if (n < 1) throw ConfigError("nth_return_point: n must be >= 1");
    if (identity_return_) return w;
    Complex cur = w;
    for (int k = 0; k < n; ++k) cur = map_(cur);
    return cur;
}

double Section::tau_at(const SpherePoint& p) const {
    // Trace the Hopf orbit back to its crossing of P_0.
    const double th = theta(p);
    const Complex w0 = std::polar(1.0, -th) * p.z1;
    return tau_(clamp_to_open_disk(w0));
}

double Section::tau_page(Complex w) const { return tau_(clamp_to_open_disk(w)); }

MonteCarloScalar integrability_mean(const ConeField& field, int n_samples,
                                    std::uint64_t seed, VolumeForm vol) {
    if (n_samples < 1) throw ConfigError("integrability_mean: n_samples must be >= 1");
    std::vector<double> phi(n_samples);
    parallel_for(n_samples, [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        phi[i] = inner_angle(field, sample_s3(rng));
    });
    double mean = 0.0;
    for (double v : phi) mean += v;
    mean /= n_samples;
    double var = 0.0;
    for (double v : phi) var += (v - mean) * (v - mean);
    var = n_samples > 1 ? var / (n_samples - 1) : 0.0;
    const double volume = vol == VolumeForm::Contact ? contact_volume() : round_volume();
    MonteCarloScalar out;
    out.value = mean * volume;
    out.stderr_ = std::sqrt(var / n_samples) * volume;
    out.n = n_samples;
    return out;
}

MaxResult integrability_max(const ConeField& field, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("integrability_max: n_samples must be >= 1");
    std::vector<double> phi(n_samples);
    std::vector<SpherePoint> pts(n_samples, SpherePoint{Complex(0, 1), Complex(0, 0)});
    parallel_for(n_samples, [&](std::int64_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        pts[i] = sample_s3(rng);
        phi[i] = inner_angle(field, pts[i]);
    });
    MaxResult out;
    out.n = n_samples;
    std::size_t best = 0;
    for (std::size_t i = 1; i < phi.size(); ++i) {
        if (phi[i] > phi[best]) best = i;
    }
    out.value = phi[best];
    out.argmax = pts[best];

    // Gradient-free polish: shrinking Gaussian proposals around the best.
    RngStream rng(seed, 0x901d);
    double radius = 0.05;
    const double start = out.value;
    for (int round = 0; round < 20; ++round) {
        for (int k = 0; k < 8; ++k) {
            Vec4 perturbed = out.argmax.ambient();
            for (int d = 0; d < 4; ++d) perturbed[d] += radius * rng.gaussian();
            const SpherePoint cand = SpherePoint::from_ambient(perturbed).normalized();
            const double v = inner_angle(field, cand);
            if (v > out.value) {
                out.value = v;
                out.argmax = cand;
            }
        }
        radius *= 0.7;
    }
    out.polish_delta = out.value - start;
    return out;
}

double calabi(const Section& section, const PageRegion& a, PageMeasure m, double tau_cap,
              QuadratureGrid g) {
    return region_integrate(
        [&](Complex w) {
            const double tau = section.return_time(w);
            if (!(tau <= tau_cap)) {
                throw NonIntegrableTauError(
                    "calabi: return time exceeds the integrability cap");
            }
            return tau;
        },
        a, m, g);
}

std::vector<CalabiGrowthRow> calabi_growth(const Section& section, const PageRegion& a,
                                           PageMeasure m, int n_max, double tau_cap,
                                           QuadratureGrid g) {
    if (n_max < 1) throw ConfigError("calabi_growth: n_max must be >= 1");
    if (!section.identity_return()) {
        throw ConfigError(
            "calabi_growth: only identity-return sections ship an A_n construction");
    }
    std::vector<CalabiGrowthRow> rows;
    rows.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        const double cal_n = region_integrate(
            [&](Complex w) {
                const double tau_n = section.nth_return_time(w, n);
                if (!(tau_n <= tau_cap)) {
                    throw NonIntegrableTauError(
                        "calabi_growth: return time exceeds the integrability cap");
                }
                return tau_n;
            },
            a, m, g);
        rows.push_back(CalabiGrowthRow{n, cal_n, cal_n / n});
    }
    return rows;
}

PageStats page_uniform_stats(PageMeasure m, QuadratureGrid g) {
    PageStats out;
    const double mass = region_measure(PageRegion::full(), m, g);
    const double mx =
        page_measure_integrate([](Complex w) { return w.real(); }, 0.0, m, g) / mass;
    const double my =
        page_measure_integrate([](Complex w) { return w.imag(); }, 0.0, m, g) / mass;
    out.mean = Complex(mx, my);

    // Second central moment of the uniform law on the disk rescaled to unit
    // area (so that mu(P) = 1): x = w / sqrt(pi).
    PageMeasure normalized{MeasureKind::Normalized};
    const Complex mean = out.mean;
    out.variance = page_measure_integrate(
        [mean](Complex w) { return std::norm((w - mean) / std::sqrt(kPi)); }, 0.0,
        normalized, g);

    out.variance_interval = 1.0 * 1.0 / 12.0;  // mu(P)^2 / 12 with mu(P) = 1
    return out;
}

double prob_upper_bound(const ConeField& field, const DiskSpec& a, const PageRegion& b,
                       double t, PageMeasure m, int n_samples, std::uint64_t seed,
                       ReachLaw law) {
    const double i_max = integrability_max(field, n_samples, seed).value;
    if (i_max <= 0.0) {
        // Flow case: the reach disk degenerates to the Hopf image point.
        return 0.0;
    }
    return prob_formula(a, b, t, i_max, m, law);
}

}  // namespace conebook
