#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "conebook/quadrature.hpp"
#include "conebook/rng.hpp"

namespace conebook {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Point of S^3 in the complex chart (z1, z2), |z1|^2 + |z2|^2 = 1.
// z1 is the page (disk) coordinate; arg(z2) is the open-book angle and the
// binding is {z2 = 0}. Ambient real coordinates are (x1, y1, x2, y2).
struct SpherePoint {
    Complex z1;
    Complex z2;

    static SpherePoint from_ambient(const Vec4& a) {
        return SpherePoint{Complex(a[0], a[1]), Complex(a[2], a[3])};
    }

    Vec4 ambient() const { return Vec4(z1.real(), z1.imag(), z2.real(), z2.imag()); }

    double norm() const { return std::sqrt(std::norm(z1) + std::norm(z2)); }

    SpherePoint normalized() const {
        const double n = norm();
        return SpherePoint{z1 / n, z2 / n};
    }

    bool on_binding(double tol = 1e-12) const { return std::abs(z2) <= tol; }
};

// (phi, w) with |w| <= 1; embeds as (w, sqrt(1 - |w|^2) e^{i phi}).
struct PagePoint {
    double phi;
    Complex w;

    SpherePoint embed() const {
        const double s = std::sqrt(std::max(0.0, 1.0 - std::norm(w)));
        return SpherePoint{w, s * Complex(std::cos(phi), std::sin(phi))};
    }
};

// Reads off (theta(p), z1). Throws BindingPointError on the binding.
PagePoint page_coordinates(const SpherePoint& p);

struct TangentVector {
    SpherePoint base;
    Vec4 v;
};

// Open-book angle arg(z2) in [0, 2pi). Throws BindingPointError.
double theta(const SpherePoint& p);

// (z1, z2) -> (e^{it} z1, e^{it} z2).
SpherePoint hopf_flow(const SpherePoint& p, double t);

// Generator of the Hopf flow; Reeb field of alpha = sum(x dy - y dx)|_{S^3}.
TangentVector reeb_field(const SpherePoint& p);

// alpha_p(v).
double contact_form(const SpherePoint& p, const Vec4& v);

// dtheta_p(v) = (x2 vy2 - y2 vx2) / |z2|^2. Throws BindingPointError.
double dtheta(const SpherePoint& p, const Vec4& v);

// Orthonormal basis of T_p S^3; column 0 is the Reeb direction.
Eigen::Matrix<double, 4, 3> tangent_basis(const SpherePoint& p);

// Ambient angle between two tangent vectors (round metric).
double vector_angle(const Vec4& a, const Vec4& b);

enum class MeasureKind { Contact, Normalized };

// Both page measures are constant multiples of the Euclidean measure on the
// unit w-disk: dalpha restricts to twice the Euclidean area form on every
// page (total 2pi), and the Normalized measure has total mass 1.
struct PageMeasure {
    MeasureKind kind = MeasureKind::Normalized;

    double density() const { return kind == MeasureKind::Contact ? 2.0 : 1.0 / kPi; }

    double total_mass() const { return kind == MeasureKind::Contact ? kTwoPi : 1.0; }
};

struct QuadratureGrid {
    int radial = 64;
    int angular = 128;
    int volume_lattice = 48;
};

// Integral of f over the page P_phi in the measure m: tensor Gauss-Legendre
// in radius times trapezoid in angle. Throws QuadratureDivergenceError if f
// is non-finite at a node.
double page_measure_integrate(const std::function<double(Complex)>& f, double phi,
                              PageMeasure m, QuadratureGrid g = {});

// Integral of f over S^3 against alpha ^ dalpha, computed in the Hopf
// coordinates z1 = r e^{i psi}, z2 = sqrt(1 - r^2) e^{i phi}, where the
// contact volume density is 2r dr dpsi dphi.
double integrate_s3_contact(const std::function<double(const SpherePoint&)>& f,
                            int lattice = 48);

// vol(S^3, alpha ^ dalpha); cached after the first computation.
double contact_volume();

// Total round (Riemannian) volume of S^3 = 2 pi^2, exposed for the
// invariants.volume = round alternative.
double round_volume();

// Uniform w.r.t. the round measure (normalized 4-d Gaussian).
SpherePoint sample_s3(RngStream& rng);

// Uniform on the open page P_0 (Normalized measure), i.e. uniform on the
// unit w-disk.
Complex sample_unit_disk(RngStream& rng);

}  // namespace conebook
