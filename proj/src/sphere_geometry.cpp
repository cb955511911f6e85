#include "conebook/sphere_geometry.hpp"

#include <atomic>
#include <cmath>
#include <mutex>

#include "conebook/errors.hpp"

namespace conebook {

double theta(const SpherePoint& p) {
    if (std::abs(p.z2) <= 1e-12) {
        throw BindingPointError("theta is undefined on the binding {z2 = 0}");
    }
    double a = std::arg(p.z2);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

PagePoint page_coordinates(const SpherePoint& p) { return PagePoint{theta(p), p.z1}; }

SpherePoint hopf_flow(const SpherePoint& p, double t) {
    const Complex rot(std::cos(t), std::sin(t));
    return SpherePoint{rot * p.z1, rot * p.z2};
}

TangentVector reeb_field(const SpherePoint& p) {
    // d/dt e^{it} z at t = 0 is iz, i.e. (x, y) -> (-y, x) componentwise.
    return TangentVector{p, Vec4(-p.z1.imag(), p.z1.real(), -p.z2.imag(), p.z2.real())};
}

double contact_form(const SpherePoint& p, const Vec4& v) {
    // alpha = x1 dy1 - y1 dx1 + x2 dy2 - y2 dx2; equals <R(p), v>.
    return reeb_field(p).v.dot(v);
}

double dtheta(const SpherePoint& p, const Vec4& v) {
    const double n2 = std::norm(p.z2);
    if (n2 <= 1e-24) {
        throw BindingPointError("dtheta is undefined on the binding {z2 = 0}");
    }
    return (p.z2.real() * v[3] - p.z2.imag() * v[2]) / n2;
}

Eigen::Matrix<double, 4, 3> tangent_basis(const SpherePoint& p) {
    Eigen::Matrix<double, 4, 3> basis;
    const Vec4 base = p.ambient();
    const Vec4 e0 = reeb_field(p).v;  // unit, tangent
    basis.col(0) = e0;

    // Complete with Gram-Schmidt over the ambient axes, picking the axis
    // least aligned with span{p, e0} first for numerical stability.
    int used = 1;
    Vec4 cols[2];
    for (int attempt = 0; attempt < 4 && used < 3; ++attempt) {
        int best = -1;
        double best_score = 2.0;
        for (int i = 0; i < 4; ++i) {
            Vec4 cand = Vec4::Zero();
            cand[i] = 1.0;
            cand -= cand.dot(base) * base;
            cand -= cand.dot(e0) * e0;
            for (int k = 0; k < used - 1; ++k) cand -= cand.dot(cols[k]) * cols[k];
            const double n = cand.norm();
            const double score = 1.0 - n;  // smaller leftover norm = worse
            if (n > 1e-6 && score < best_score) {
                best_score = score;
                best = i;
            }
        }
        Vec4 cand = Vec4::Zero();
        cand[best] = 1.0;
        cand -= cand.dot(base) * base;
        cand -= cand.dot(e0) * e0;
        for (int k = 0; k < used - 1; ++k) cand -= cand.dot(cols[k]) * cols[k];
        cols[used - 1] = cand.normalized();
        basis.col(used) = cols[used - 1];
        ++used;
    }
    return basis;
}

double vector_angle(const Vec4& a, const Vec4& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na < 1e-14 || nb < 1e-14) throw ZeroVectorError("vector_angle: zero vector");
    const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
    return std::acos(c);
}

double page_measure_integrate(const std::function<double(Complex)>& f, double /*phi*/,
                              PageMeasure m, QuadratureGrid g) {
    const GaussLegendre& gl = gauss_legendre(g.radial);
    const double dpsi = kTwoPi / g.angular;
    const double dens = m.density();
    double total = 0.0;
    for (int j = 0; j < g.angular; ++j) {
        const double psi = dpsi * j;
        const Complex dir(std::cos(psi), std::sin(psi));
        double ray = 0.0;
        for (int i = 0; i < g.radial; ++i) {
            const double r = gl.x[i];
            const double val = f(r * dir);
            if (!std::isfinite(val)) {
                throw QuadratureDivergenceError("page_measure_integrate: non-finite integrand");
            }
            ray += gl.w[i] * r * val;
        }
        total += ray * dpsi;
    }
    return total * dens;
}

double integrate_s3_contact(const std::function<double(const SpherePoint&)>& f, int lattice) {
    const GaussLegendre& gl = gauss_legendre(lattice);
    const double dang = kTwoPi / lattice;
    double total = 0.0;
    for (int i = 0; i < lattice; ++i) {
        const double r = gl.x[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
        double shell = 0.0;
        for (int j = 0; j < lattice; ++j) {
            const double psi = dang * j;
            const Complex z1 = r * Complex(std::cos(psi), std::sin(psi));
            for (int k = 0; k < lattice; ++k) {
                const double phi = dang * k;
                const SpherePoint p{z1, s * Complex(std::cos(phi), std::sin(phi))};
                shell += f(p);
            }
        }
        total += gl.w[i] * 2.0 * r * shell * dang * dang;
    }
    return total;
}

double contact_volume() {
    static std::once_flag flag;
    static double value = 0.0;
    std::call_once(flag, [] {
        value = integrate_s3_contact([](const SpherePoint&) { return 1.0; }, 48);
    });
    return value;
}

double round_volume() { return 2.0 * kPi * kPi; }

SpherePoint sample_s3(RngStream& rng) {
    Vec4 g;
    double n2 = 0.0;
    do {
        for (int i = 0; i < 4; ++i) g[i] = rng.gaussian();
        n2 = g.squaredNorm();
    } while (n2 < 1e-24);
    g /= std::sqrt(n2);
    return SpherePoint::from_ambient(g);
}

Complex sample_unit_disk(RngStream& rng) {
    for (;;) {
        const double x = rng.uniform(-1.0, 1.0);
        const double y = rng.uniform(-1.0, 1.0);
        if (x * x + y * y <= 1.0) return Complex(x, y);
    }
}

}  // namespace conebook
