#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "conebook/cone_field.hpp"
#include "conebook/invariants.hpp"
#include "conebook/page_region.hpp"
#include "conebook/rng.hpp"
#include "conebook/sphere_geometry.hpp"

namespace conebook {

enum class ConstraintMode { Project, Reject };

// Configuration of the process dV = sigma dW + mu tau(Gamma) dt with the
// constant drift direction (0, 0, mu3) in the half-space model (the cone
// axis on S^3).
struct SdeConfig {
    // Volatility as a function of the page radius |w|; must be >= 0.
    std::function<double(double)> sigma = [](double) { return 1.0; };
    double mu3 = 0.1;
    double step_h = 1e-3;
    double horizon = 1.0;
    ConstraintMode mode = ConstraintMode::Project;

    void validate() const;
};

struct HalfSpaceState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // vertical coordinate, plays the open-book time
};

struct Crossing {
    int n = 0;       // page-return index (first passage of the level 2 pi n)
    Complex w{0, 0}; // page point at the crossing
    double time = 0.0;
};

struct SamplePath {
    std::vector<Vec3> states;       // recorded every `record_every` steps (if > 0)
    std::vector<Crossing> crossings;
    HalfSpaceState end{};
    SpherePoint end_point{Complex(0, 1), Complex(0, 0)};
    double theta_lift = 0.0;
    double time = 0.0;
    bool stuck_at_binding = false;  // cone degenerated; path terminated and flagged
};

// Euler-Maruyama in the reflected upper half-space; tau is evaluated at the
// page point identified with (x, y).
SamplePath euler_maruyama_halfspace(const SdeConfig& cfg, const Section& section,
                                    HalfSpaceState start, RngStream& rng,
                                    int record_every = 0);

// Cone-constrained Euler-Maruyama on S^3: per step the increment (isotropic
// tangent diffusion + drift mu3 tau along the cone axis) is forced interior
// to the local cone, by minimal rotation toward the axis (Project) or by
// redrawing the noise (Reject, with projection fallback after 64 tries),
// then the point is renormalized to S^3. Stops after `max_crossings` page
// returns, or at the first crossing inside stop_region if one is given.
SamplePath euler_maruyama_cone(const SdeConfig& cfg, const ConeField& field,
                               const Section& section, SpherePoint start, RngStream& rng,
                               int max_crossings, const PageRegion* stop_region = nullptr,
                               int record_every = 0);

struct RecurrenceReport {
    std::vector<int> first_hit;       // per path; -1 when censored at max_returns
    std::vector<int> stuck;           // path ids flagged StuckAtBinding
    std::vector<int> horizons;        // {max/4, max/2, max}
    std::vector<double> hit_fraction; // per horizon
    std::vector<double> trunc_mean;   // mean of min(n, horizon), censored = max_returns
    double median = 0.0;
    // Log-log slope of the empirical survival function of the first-hit
    // index over its upper range; a magnitude <= 1 is the heavy-tail
    // (infinite-mean) diagnostic.
    double tail_slope = 0.0;
    int n_paths = 0;
    int max_returns = 0;
};

// Probabilistic Poincare recurrence experiment: n_paths cone-constrained
// paths from the page point p0 on P_0, each run until its crossing point
// first lands in U or until max_returns page returns (censoring is data).
RecurrenceReport recurrence_experiment(const SdeConfig& cfg, const ConeField& field,
                                       const Section& section, Complex p0,
                                       const PageRegion& u, int n_paths, int max_returns,
                                       std::uint64_t seed);

}  // namespace conebook
