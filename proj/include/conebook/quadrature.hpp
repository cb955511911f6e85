#pragma once

#include <functional>
#include <vector>

namespace conebook {

// Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached per node count; thread-safe.
const GaussLegendre& gauss_legendre(int n);

// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 32);

}  // namespace conebook
