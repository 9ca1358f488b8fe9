#pragma once

// Plots of a constant-z slice of Yee grid fields: a colour map of a vertex
// field with arrows for the in-plane edge field.  For display only.

#include "maxwell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace extcalc::svg {

inline void write_slice(std::ostream& os, const maxwell::YeeGrid& G, int k, const std::vector<double>& vertex_field,
                        const std::vector<double>& edge_field, const std::string& title) {
    const int nx = G.grid().extent(0, 0u), ny = G.grid().extent(1, 0u);
    const double px = 480.0 / std::max(nx, ny);
    const double w = nx * px, h = ny * px + 24;
    char buf[256];
    std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", w, h);
    os << buf;
    os << "<text x=\"4\" y=\"16\" font-family=\"monospace\" font-size=\"12\">" << title << "</text>\n";
    double vmax = 0.0;
    if (!vertex_field.empty())
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) vmax = std::max(vmax, std::abs(vertex_field[G.vertex(i, j, k)]));
    // Image rows run downwards; flip y so the plot reads with y up.
    auto ypix = [&](double j) { return 24 + (ny - 1 - j) * px; };
    if (vmax > 0)
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double t = vertex_field[G.vertex(i, j, k)] / vmax;
                const int r = t > 0 ? 255 : static_cast<int>(255 * (1 + t));
                const int b = t < 0 ? 255 : static_cast<int>(255 * (1 - t));
                const int g = static_cast<int>(255 * (1 - std::abs(t)));
                std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"rgb(%d,%d,%d)\"/>\n",
                              i * px, ypix(j), px, px, r, g, b);
                os << buf;
            }
    if (!edge_field.empty()) {
        // Vertex-averaged in-plane vector from the adjacent x and y edges.
        std::vector<double> ex(nx * ny, 0.0), ey(nx * ny, 0.0);
        double amax = 0.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                double sx = 0, sy = 0;
                int cx = 0, cy = 0;
                for (int di : {-1, 0}) {
                    const long e = G.edge(0, i + di, j, k);
                    if (e >= 0) sx += edge_field[e] / G.spacing(0), ++cx;
                }
                for (int dj : {-1, 0}) {
                    const long e = G.edge(1, i, j + dj, k);
                    if (e >= 0) sy += edge_field[e] / G.spacing(1), ++cy;
                }
                ex[i * ny + j] = cx ? sx / cx : 0.0;
                ey[i * ny + j] = cy ? sy / cy : 0.0;
                amax = std::max(amax, std::hypot(ex[i * ny + j], ey[i * ny + j]));
            }
        if (amax > 0)
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    const double ux = ex[i * ny + j] / amax, uy = ey[i * ny + j] / amax;
                    if (std::hypot(ux, uy) < 1e-3) continue;
                    const double x0 = (i + 0.5) * px, y0 = ypix(j) + 0.5 * px;
                    std::snprintf(buf, sizeof buf,
                                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\" stroke-width=\"1\"/>\n", x0,
                                  y0, x0 + 0.9 * px * ux, y0 - 0.9 * px * uy);
                    os << buf;
                }
    }
    os << "</svg>\n";
}

}  // namespace extcalc::svg
