#include "conebook/page_region.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "conebook/errors.hpp"

namespace conebook {

bool GridIndicator::at(Complex w) const {
    const int j = static_cast<int>((w.real() + 1.0) * 0.5 * cols);
    const int i = static_cast<int>((1.0 - w.imag()) * 0.5 * rows);  // first row = top
    if (i < 0 || i >= rows || j < 0 || j >= cols) return false;
    return cells[static_cast<std::size_t>(i) * cols + j] != 0;
}

GridIndicator GridIndicator::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("GridIndicator: cannot open " + path);
    GridIndicator g;
    in >> g.rows >> g.cols;
    if (g.rows <= 0 || g.cols <= 0) throw ConfigError("GridIndicator: bad dimensions in " + path);
    g.cells.resize(static_cast<std::size_t>(g.rows) * g.cols);
    for (auto& c : g.cells) {
        int v;
        if (!(in >> v)) throw ConfigError("GridIndicator: truncated grid in " + path);
        c = v ? 1 : 0;
    }
    return g;
}

PageRegion PageRegion::from_grid_file(const std::string& path) {
    PageRegion r;
    r.kind = Kind::Grid;
    r.grid = std::make_shared<GridIndicator>(GridIndicator::load(path));
    return r;
}

bool PageRegion::contains(Complex w) const {
    switch (kind) {
        case Kind::Empty: return false;
        case Kind::Full: return std::abs(w) <= 1.0;
        case Kind::Disk: return std::abs(w - center) <= r1;
        case Kind::Annulus: {
            const double d = std::abs(w - center);
            return d >= r0 && d <= r1;
        }
        case Kind::HalfPlane: return w.real() > 0.0 && std::abs(w) <= 1.0;
        case Kind::Grid: return std::abs(w) <= 1.0 && grid && grid->at(w);
    }
    return false;
}

namespace {

// Largest rho >= 0 with |origin + rho e^{i psi}| <= 1; 0 if the ray starts
// outside the page.
double page_exit_radius(Complex origin, double c, double s) {
    const double b = origin.real() * c + origin.imag() * s;
    const double disc = b * b + 1.0 - std::norm(origin);
    if (disc <= 0.0) return 0.0;
    return std::max(0.0, -b + std::sqrt(disc));
}

double polar_integrate(const std::function<double(Complex)>& f, Complex origin,
                       double ang_lo, double ang_hi, double rad_lo, double rad_hi,
                       bool clip_region_disk, double region_r, PageMeasure m,
                       QuadratureGrid g) {
    const GaussLegendre& gl = gauss_legendre(g.radial);
    const int na = g.angular;
    const double dpsi = (ang_hi - ang_lo) / na;
    double total = 0.0;
    for (int j = 0; j < na; ++j) {
        const double psi = ang_lo + dpsi * (j + 0.5);  // midpoint in angle
        const double c = std::cos(psi), s = std::sin(psi);
        double hi = rad_hi;
        if (clip_region_disk) hi = std::min(hi, region_r);
        hi = std::min(hi, page_exit_radius(origin, c, s));
        const double lo = std::min(rad_lo, hi);
        if (hi <= lo) continue;
        double ray = 0.0;
        for (int i = 0; i < g.radial; ++i) {
            const double rho = lo + (hi - lo) * gl.x[i];
            const Complex w = origin + rho * Complex(c, s);
            const double val = f(w);
            if (!std::isfinite(val)) {
                throw QuadratureDivergenceError("region_integrate: non-finite integrand");
            }
            ray += gl.w[i] * rho * val;
        }
        total += ray * (hi - lo) * dpsi;
    }
    return total * m.density();
}

}  // namespace

double region_integrate(const std::function<double(Complex)>& f, const PageRegion& region,
                        PageMeasure m, QuadratureGrid g) {
    switch (region.kind) {
        case PageRegion::Kind::Empty: return 0.0;
        case PageRegion::Kind::Full:
            return page_measure_integrate(f, 0.0, m, g);
        case PageRegion::Kind::Disk:
            return polar_integrate(f, region.center, 0.0, kTwoPi, 0.0, region.r1, true,
                                   region.r1, m, g);
        case PageRegion::Kind::Annulus:
            return polar_integrate(f, region.center, 0.0, kTwoPi, region.r0, region.r1, true,
                                   region.r1, m, g);
        case PageRegion::Kind::HalfPlane:
            return polar_integrate(f, Complex(0.0, 0.0), -kPi / 2.0, kPi / 2.0, 0.0, 1.0,
                                   false, 0.0, m, g);
        case PageRegion::Kind::Grid: {
            // Midpoint raster; accuracy limited by the cell size.
            const int n = std::max(4 * g.angular, 512);
            const double cell = 2.0 / n;
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const Complex w(-1.0 + cell * (j + 0.5), -1.0 + cell * (i + 0.5));
                    if (std::abs(w) > 1.0 || !region.contains(w)) continue;
                    const double val = f(w);
                    if (!std::isfinite(val)) {
                        throw QuadratureDivergenceError("region_integrate: non-finite integrand");
                    }
                    total += val * cell * cell;
                }
            }
            return total * m.density();
        }
    }
    return 0.0;
}

double region_measure(const PageRegion& region, PageMeasure m, QuadratureGrid g) {
    return region_integrate([](Complex) { return 1.0; }, region, m, g);
}

RadialIntervals radial_intervals(const PageRegion& region, Complex origin, double psi) {
    RadialIntervals out;
    const double c = std::cos(psi), s = std::sin(psi);
    auto disk_interval = [&](Complex dc, double r, double* lo, double* hi) {
        const Complex d = origin - dc;
        const double b = d.real() * c + d.imag() * s;
        const double disc = b * b - (std::norm(d) - r * r);
        if (disc <= 0.0) return false;
        const double sq = std::sqrt(disc);
        *lo = std::max(0.0, -b - sq);
        *hi = -b + sq;
        return *hi > *lo;
    };
    switch (region.kind) {
        case PageRegion::Kind::Empty: break;
        case PageRegion::Kind::Full: {
            double lo, hi;
            if (disk_interval(Complex(0, 0), 1.0, &lo, &hi)) out.add(lo, hi);
            break;
        }
        case PageRegion::Kind::Disk: {
            double lo, hi;
            if (disk_interval(region.center, region.r1, &lo, &hi)) out.add(lo, hi);
            break;
        }
        case PageRegion::Kind::Annulus: {
            double olo, ohi;
            if (!disk_interval(region.center, region.r1, &olo, &ohi)) break;
            double ilo, ihi;
            if (disk_interval(region.center, region.r0, &ilo, &ihi)) {
                out.add(olo, std::min(ohi, ilo));
                out.add(std::max(olo, ihi), ohi);
            } else {
                out.add(olo, ohi);
            }
            break;
        }
        case PageRegion::Kind::HalfPlane: {
            // Re(origin) + rho cos psi > 0, intersected with the page.
            double plo = 0.0, phi = 0.0;
            if (!disk_interval(Complex(0, 0), 1.0, &plo, &phi)) break;
            const double x0 = origin.real();
            if (std::abs(c) < 1e-15) {
                if (x0 > 0.0) out.add(plo, phi);
            } else {
                const double cross = -x0 / c;
                if (c > 0.0) {
                    out.add(std::max(plo, cross), phi);
                } else {
                    out.add(plo, std::min(phi, cross));
                }
            }
            break;
        }
        case PageRegion::Kind::Grid:
            throw ConfigError("radial_intervals: grid regions have no radial form");
    }
    return out;
}

}  // namespace conebook
