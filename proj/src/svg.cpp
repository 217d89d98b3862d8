#include "svg.hpp"

#include <algorithm>
#include <cstdio>

namespace hqts {

namespace {

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};
constexpr int kPaletteSize = 12;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_routes_svg(const Solution& s, const CvrpInstance& inst) {
    if (!inst.has_coords())
        throw ValidationError("cannot draw an instance without coordinates");

    double min_x = inst.locations[0].x, max_x = min_x;
    double min_y = inst.locations[0].y, max_y = min_y;
    for (const auto& loc : inst.locations) {
        min_x = std::min(min_x, loc.x);
        max_x = std::max(max_x, loc.x);
        min_y = std::min(min_y, loc.y);
        max_y = std::max(max_y, loc.y);
    }
    const double span_x = std::max(max_x - min_x, 1.0);
    const double span_y = std::max(max_y - min_y, 1.0);
    const double margin_x = span_x * 0.05;
    const double margin_y = span_y * 0.05;

    // flip y so larger coordinates draw upward
    auto px = [&](double x) { return x - min_x + margin_x; };
    auto py = [&](double y) { return max_y - y + margin_y; };
    const double width = span_x + 2 * margin_x;
    const double height = span_y + 2 * margin_y;
    const double dot = std::max(span_x, span_y) / 120.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(width) + " " +
           fmt(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    int color = 0;
    for (const auto& route : s.routes) {
        if (route.empty()) continue;
        out += "<polyline fill=\"none\" stroke=\"";
        out += kPalette[color % kPaletteSize];
        out += "\" stroke-width=\"" + fmt(dot / 2.5) + "\" points=\"";
        out += fmt(px(inst.locations[0].x)) + "," + fmt(py(inst.locations[0].y));
        for (int c : route.stops)
            out += " " + fmt(px(inst.locations[c].x)) + "," + fmt(py(inst.locations[c].y));
        out += " " + fmt(px(inst.locations[0].x)) + "," + fmt(py(inst.locations[0].y));
        out += "\"/>\n";
        ++color;
    }

    for (int c = 1; c < inst.num_locations(); ++c) {
        out += "<circle cx=\"" + fmt(px(inst.locations[c].x)) + "\" cy=\"" +
               fmt(py(inst.locations[c].y)) + "\" r=\"" + fmt(dot) +
               "\" fill=\"#333333\"/>\n";
    }
    out += "<rect x=\"" + fmt(px(inst.locations[0].x) - 1.5 * dot) + "\" y=\"" +
           fmt(py(inst.locations[0].y) - 1.5 * dot) + "\" width=\"" + fmt(3 * dot) +
           "\" height=\"" + fmt(3 * dot) + "\" fill=\"#000000\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace hqts
