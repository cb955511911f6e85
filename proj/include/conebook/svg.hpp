#pragma once

#include <string>
#include <vector>

#include "conebook/sphere_geometry.hpp"

namespace conebook {

// Minimal standalone SVG writer for page-disk pictures. World coordinates
// live in a square box (default [-1.2, 1.2]^2) mapped to a fixed pixel
// canvas; y points up.
class SvgCanvas {
public:
    explicit SvgCanvas(double world_half_extent = 1.2, int pixels = 640);

    void circle(Complex center, double radius, const std::string& stroke,
                const std::string& fill = "none", double stroke_width = 1.5);
    void dot(Complex p, double radius_px, const std::string& fill);
    void polyline(const std::vector<Complex>& pts, const std::string& stroke,
                  double stroke_width = 1.0, double opacity = 1.0);
    void text(Complex p, const std::string& label, const std::string& fill = "#333",
              int font_px = 14);
    void legend(const std::vector<std::pair<std::string, std::string>>& entries);

    std::string finish() const;

private:
    double sx(double x) const;
    double sy(double y) const;

    double half_;
    int px_;
    std::string body_;
};

}  // namespace conebook
