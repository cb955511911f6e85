#pragma once

#include <memory>
#include <string>
#include <vector>

#include "conebook/sphere_geometry.hpp"

namespace conebook {

// Raster indicator over [-1, 1]^2 loaded from a file: first line "rows cols",
// then rows of 0/1 cells.
struct GridIndicator {
    int rows = 0;
    int cols = 0;
    std::vector<char> cells;

    bool at(Complex w) const;
    static GridIndicator load(const std::string& path);
};

// Measurable subset of a page, in the unit w-disk coordinate.
struct PageRegion {
    enum class Kind { Empty, Full, Disk, Annulus, HalfPlane, Grid };

    Kind kind = Kind::Empty;
    Complex center{0.0, 0.0};
    double r0 = 0.0;  // annulus inner radius
    double r1 = 0.0;  // disk / annulus outer radius
    std::shared_ptr<GridIndicator> grid;

    bool contains(Complex w) const;

    static PageRegion empty() { return PageRegion{}; }
    static PageRegion full() { return PageRegion{Kind::Full}; }
    static PageRegion disk(Complex c, double r) { return PageRegion{Kind::Disk, c, 0.0, r}; }
    static PageRegion annulus(Complex c, double inner, double outer) {
        return PageRegion{Kind::Annulus, c, inner, outer};
    }
    static PageRegion halfplane() { return PageRegion{Kind::HalfPlane}; }  // Re w > 0
    static PageRegion from_grid_file(const std::string& path);
};

// Integral of f over region (clipped to the page) in the measure m. Disk,
// annulus and half-plane regions use polar quadrature aligned with the
// region so the integrand stays smooth; Grid regions fall back to a dense
// midpoint raster.
double region_integrate(const std::function<double(Complex)>& f, const PageRegion& region,
                        PageMeasure m, QuadratureGrid g = {});

double region_measure(const PageRegion& region, PageMeasure m, QuadratureGrid g = {});

// Radial extents of the region along the ray origin + rho e^{i psi},
// rho >= 0, as at most two disjoint intervals (used by the probability
// quadrature). Not defined for Grid regions.
struct RadialIntervals {
    double lo[2] = {0.0, 0.0};
    double hi[2] = {0.0, 0.0};
    int count = 0;

    void add(double a, double b) {
        if (b > a) {
            lo[count] = a;
            hi[count] = b;
            ++count;
        }
    }
};

RadialIntervals radial_intervals(const PageRegion& region, Complex origin, double psi);

}  // namespace conebook
