#include "conebook/svg.hpp"

#include <sstream>

namespace conebook {

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << v;
    return out.str();
}

}  // namespace

SvgCanvas::SvgCanvas(double world_half_extent, int pixels)
    : half_(world_half_extent), px_(pixels) {}

double SvgCanvas::sx(double x) const { return (x + half_) / (2.0 * half_) * px_; }
double SvgCanvas::sy(double y) const { return (half_ - y) / (2.0 * half_) * px_; }

void SvgCanvas::circle(Complex center, double radius, const std::string& stroke,
                       const std::string& fill, double stroke_width) {
    std::ostringstream out;
    out << "<circle cx=\"" << fmt(sx(center.real())) << "\" cy=\""
        << fmt(sy(center.imag())) << "\" r=\"" << fmt(radius / (2.0 * half_) * px_)
        << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" stroke-width=\""
        << fmt(stroke_width) << "\"/>\n";
    body_ += out.str();
}

void SvgCanvas::dot(Complex p, double radius_px, const std::string& fill) {
    std::ostringstream out;
    out << "<circle cx=\"" << fmt(sx(p.real())) << "\" cy=\"" << fmt(sy(p.imag()))
        << "\" r=\"" << fmt(radius_px) << "\" fill=\"" << fill << "\"/>\n";
    body_ += out.str();
}

void SvgCanvas::polyline(const std::vector<Complex>& pts, const std::string& stroke,
                         double stroke_width, double opacity) {
    if (pts.size() < 2) return;
    std::ostringstream out;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << fmt(stroke_width) << "\" stroke-opacity=\"" << fmt(opacity) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out << (i ? " " : "") << fmt(sx(pts[i].real())) << "," << fmt(sy(pts[i].imag()));
    }
    out << "\"/>\n";
    body_ += out.str();
}

void SvgCanvas::text(Complex p, const std::string& label, const std::string& fill,
                     int font_px) {
    std::ostringstream out;
    out << "<text x=\"" << fmt(sx(p.real())) << "\" y=\"" << fmt(sy(p.imag()))
        << "\" fill=\"" << fill << "\" font-family=\"sans-serif\" font-size=\""
        << font_px << "\">" << label << "</text>\n";
    body_ += out.str();
}

void SvgCanvas::legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = 20.0;
    for (const auto& [label, color] : entries) {
        std::ostringstream out;
        out << "<rect x=\"10\" y=\"" << fmt(y - 10) << "\" width=\"12\" height=\"12\""
            << " fill=\"" << color << "\"/>\n"
            << "<text x=\"28\" y=\"" << fmt(y + 1)
            << "\" fill=\"#333\" font-family=\"sans-serif\" font-size=\"13\">" << label
            << "</text>\n";
        body_ += out.str();
        y += 20.0;
    }
}

std::string SvgCanvas::finish() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_ << "\" height=\""
        << px_ << "\" viewBox=\"0 0 " << px_ << " " << px_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_ << "</svg>\n";
    return out.str();
}

}  // namespace conebook
