#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conebook/cone_field.hpp"
#include "conebook/page_region.hpp"
#include "conebook/reachability.hpp"
#include "conebook/sphere_geometry.hpp"

namespace conebook {

// A continuous family of cone trajectories, one starting at each point of
// P_0 \ B, with first-return time tau and first-return page point. The
// shipped kinds are flow-like: their orbits are Hopf circles, so the return
// map is the identity and the n-th return time accumulates along the loop.
class Section {
public:
    enum class Kind { ReebHopf, PerturbedFlow, Custom };

    // Hopf / Reeb orbits: tau = 2 pi everywhere, return map = identity.
    static Section reeb_hopf();

    // Hopf flow reparametrized by the positive factor 1 + eps * b(p) with
    // b(p) = Re(z1)^2; tau is computed by RK4 time stepping along the orbit
    // (the quadrature form of tau is the test oracle, not this path).
    static Section perturbed_flow(double eps);

    // Arbitrary return data for tests and tabulated families.
    static Section custom(std::string name, std::function<double(Complex)> tau,
                          std::function<Complex(Complex)> return_map,
                          bool identity_return);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    // First return time of the trajectory starting at w on P_0.
    double return_time(Complex w) const { return tau_(w); }

    // First-return page point.
    Complex return_map(Complex w) const { return map_(w); }

    // Cumulative n-th return time / point.
    double nth_return_time(Complex w, int n) const;
    Complex nth_return_point(Complex w, int n) const;

    // Return time of the section curve through an arbitrary off-binding
    // point of S^3 (for the SDE drift): the orbit is traced back to its
    // crossing of P_0.
    double tau_at(const SpherePoint& p) const;

    // Return time as a function of a half-space page coordinate; |w| is
    // clamped into the open disk.
    double tau_page(Complex w) const;

    bool identity_return() const { return identity_return_; }

private:
    Kind kind_ = Kind::Custom;
    std::string name_;
    std::function<double(Complex)> tau_;
    std::function<Complex(Complex)> map_;
    bool identity_return_ = false;
};

enum class VolumeForm { Contact, Round };

struct MonteCarloScalar {
    double value = 0.0;
    double stderr_ = 0.0;
    int n = 0;
};

// Mean measure of integrability: integral of the inner-angle function over
// S^3 against the chosen volume form, by uniform round-measure sampling
// (the contact form is a constant multiple of the round one on S^3).
MonteCarloScalar integrability_mean(const ConeField& field, int n_samples,
                                    std::uint64_t seed,
                                    VolumeForm vol = VolumeForm::Contact);

struct MaxResult {
    double value = 0.0;
    double polish_delta = 0.0;  // improvement from the local ascent
    SpherePoint argmax{Complex(0, 1), Complex(0, 0)};
    int n = 0;
};

// Max measure of integrability: sample maximum refined by 20 rounds of
// gradient-free local polish around the best sample.
MaxResult integrability_max(const ConeField& field, int n_samples, std::uint64_t seed);

// CAL_Gamma(A) = integral of tau over A in the measure m. Throws
// NonIntegrableTauError if tau exceeds tau_cap at a quadrature node.
double calabi(const Section& section, const PageRegion& a, PageMeasure m,
              double tau_cap = 1e6, QuadratureGrid g = {});

struct CalabiGrowthRow {
    int n = 0;
    double cal_n = 0.0;
    double cal_n_over_n = 0.0;
};

// CAL^n over A_n (the image of A under the n-th return map; equal to A for
// the shipped identity-return sections) for n = 1..n_max.
std::vector<CalabiGrowthRow> calabi_growth(const Section& section, const PageRegion& a,
                                           PageMeasure m, int n_max, double tau_cap = 1e6,
                                           QuadratureGrid g = {});

struct PageStats {
    Complex mean{0.0, 0.0};      // center of mass of the page
    double variance = 0.0;       // E|x - Ex|^2, uniform law on the unit-AREA disk
    double variance_interval = 0.0; // mu(P)^2 / 12, the uniform-interval formula
};

PageStats page_uniform_stats(PageMeasure m, QuadratureGrid g = {});

// Upper-bound certificate for page-to-page probability: prob_formula with
// theta = I_M(field). The Minkowski law is the default because only that
// disk actually contains the trajectory endpoints; the mu(A)-scaled law is
// available for side-by-side reporting.
double prob_upper_bound(const ConeField& field, const DiskSpec& a, const PageRegion& b,
                       double t, PageMeasure m, int n_samples = 20000,
                       std::uint64_t seed = 0, ReachLaw law = ReachLaw::Minkowski);

}  // namespace conebook
