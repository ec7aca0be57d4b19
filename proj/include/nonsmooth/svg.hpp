#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nonsmooth/covector.hpp"
#include "nonsmooth/legendre.hpp"

namespace nonsmooth {

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Fixed 800x800 canvas with an 80 px margin; data box mapped linearly.
struct Canvas {
    double x0, x1, y0, y1;
    static constexpr double size = 800.0, margin = 80.0;
    double px(double x) const {
        return margin + (x - x0) / (x1 - x0) * (size - 2 * margin);
    }
    double py(double y) const {
        return size - margin - (y - y0) / (y1 - y0) * (size - 2 * margin);
    }
};

inline void svg_header(std::string& s) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
    s += "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
}

inline void svg_axes(std::string& s, const Canvas& c, const std::string& xlabel,
                     const std::string& ylabel) {
    s += "<g stroke=\"#444444\" stroke-width=\"1\" fill=\"none\">\n";
    s += "<rect x=\"80\" y=\"80\" width=\"640\" height=\"640\"/>\n</g>\n";
    s += "<g font-family=\"monospace\" font-size=\"14\" fill=\"#222222\">\n";
    s += "<text x=\"400\" y=\"770\" text-anchor=\"middle\">" + xlabel + " [" +
         fmt(c.x0) + ", " + fmt(c.x1) + "]</text>\n";
    s += "<text x=\"20\" y=\"400\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 20 400)\">" +
         ylabel + " [" + fmt(c.y0) + ", " + fmt(c.y1) + "]</text>\n";
    s += "</g>\n";
}

}  // namespace detail

// Scatter (homological) or polygon (hull provenance) rendering of a covector
// set. Empty sets produce a legend-only canvas.
inline std::string svg_covector_set(const CovectorSet& s, const std::string& title) {
    std::string out;
    detail::svg_header(out);
    out += "<text x=\"400\" y=\"40\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"18\" fill=\"#222222\">" +
           title + "</text>\n";
    if (s.points.empty()) {
        out += "<text x=\"400\" y=\"400\" text-anchor=\"middle\" "
               "font-family=\"monospace\" font-size=\"16\" fill=\"#888888\">"
               "empty set (no accepted covectors)</text>\n</svg>\n";
        return out;
    }
    double lo0 = s.points[0][0], hi0 = lo0, lo1 = 0, hi1 = 0;
    if (s.dim == 2) {
        lo1 = s.points[0][1];
        hi1 = lo1;
    }
    for (const auto& p : s.points) {
        lo0 = std::min(lo0, p[0]);
        hi0 = std::max(hi0, p[0]);
        if (s.dim == 2) {
            lo1 = std::min(lo1, p[1]);
            hi1 = std::max(hi1, p[1]);
        }
    }
    double pad0 = std::max(0.5, 0.2 * (hi0 - lo0));
    double pad1 = std::max(0.5, 0.2 * (hi1 - lo1));
    detail::Canvas c{lo0 - pad0, hi0 + pad0,
                     s.dim == 2 ? lo1 - pad1 : -1.0, s.dim == 2 ? hi1 + pad1 : 1.0};
    detail::svg_axes(out, c, "xi_1", s.dim == 2 ? "xi_2" : "");
    bool hullish = s.provenance != Provenance::homological && s.points.size() > 1;
    if (hullish) {
        out += "<polygon fill=\"#d0e4f7\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        for (const auto& p : s.points)
            out += detail::fmt(c.px(p[0])) + "," +
                   detail::fmt(c.py(s.dim == 2 ? p[1] : 0.0)) + " ";
        out += "\"/>\n";
    }
    for (const auto& p : s.points)
        out += "<circle cx=\"" + detail::fmt(c.px(p[0])) + "\" cy=\"" +
               detail::fmt(c.py(s.dim == 2 ? p[1] : 0.0)) +
               "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    out += "<text x=\"400\" y=\"760\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"12\" fill=\"#555555\">pitch " +
           detail::fmt(s.pitch) + ", " + provenance_name(s.provenance) + ", " +
           std::to_string(s.points.size()) + " points</text>\n</svg>\n";
    return out;
}

// Germ-table heatmap (degree 0 blue, degree 1 red channel) with the front
// overlaid as dots (box artifacts hollow).
inline std::string svg_germ_table(const GermTable& t, const Front* front,
                                  const std::string& title) {
    std::string out;
    detail::svg_header(out);
    out += "<text x=\"400\" y=\"40\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"18\" fill=\"#222222\">" +
           title + "</text>\n";
    detail::Canvas c{t.y_grid.box.lo[0], t.y_grid.box.hi[0], t.t_grid.box.lo[0],
                     t.t_grid.box.hi[0]};
    detail::svg_axes(out, c, "y", "t");
    double cw = 640.0 / t.ny(), ch = 640.0 / t.nt();
    for (int ti = 0; ti < t.nt(); ++ti)
        for (int yi = 0; yi < t.ny(); ++yi) {
            const int* g = t.cell(yi, ti);
            int b0 = std::min(g[0], 2);
            int b1 = t.degrees > 1 ? std::min(g[1], 2) : 0;
            if (b0 == 0 && b1 == 0) continue;
            char color[8];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", 255 - 100 * b1,
                          235 - 90 * b0 - 60 * b1, 255 - 100 * b0);
            double x = 80.0 + yi * cw;
            double y = 720.0 - (ti + 1) * ch;
            out += "<rect x=\"" + detail::fmt(x) + "\" y=\"" + detail::fmt(y) +
                   "\" width=\"" + detail::fmt(cw) + "\" height=\"" + detail::fmt(ch) +
                   "\" fill=\"" + color + "\"/>\n";
        }
    if (front)
        for (const auto& e : front->edges) {
            out += "<circle cx=\"" + detail::fmt(c.px(e.y)) + "\" cy=\"" +
                   detail::fmt(c.py(e.t)) + "\" r=\"2\" fill=\"" +
                   (e.box_artifact ? std::string("none\" stroke=\"#d62728")
                                   : std::string("#d62728")) +
                   "\"/>\n";
        }
    out += "</svg>\n";
    return out;
}

}  // namespace nonsmooth
