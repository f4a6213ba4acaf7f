#include "ford/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ford/errors.hpp"

namespace ford {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s(buf);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

double embed_scale(const std::vector<std::int64_t>& ds, int j) {
    return j == 0 ? 1.0 : std::sqrt(static_cast<double>(ds[j - 1]));
}

}  // namespace

RenderSpec RenderSpec::defaults_for(std::size_t dimension) {
    RenderSpec spec;
    if (dimension == 1) spec.axis_y = height;
    return spec;
}

void RenderSpec::set_axes(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw BadAxes("axes must be 'i,j', got '" + text + "'");
    auto parse_one = [&](const std::string& t) {
        if (t == "h") return height;
        try {
            std::size_t used = 0;
            int v = std::stoi(t, &used);
            if (used != t.size()) throw BadAxes("bad axis '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw BadAxes("bad axis '" + t + "'");
        }
    };
    axis_x = parse_one(text.substr(0, comma));
    axis_y = parse_one(text.substr(comma + 1));
}

void validate(const RenderSpec& spec, std::size_t dimension) {
    const int n = static_cast<int>(dimension);
    if (spec.axis_x < 0 || spec.axis_x >= n) throw BadAxes("axis " + std::to_string(spec.axis_x) + " outside 0.." + std::to_string(n - 1));
    if (spec.axis_y != RenderSpec::height && (spec.axis_y < 0 || spec.axis_y >= n)) {
        throw BadAxes("axis " + std::to_string(spec.axis_y) + " outside 0.." + std::to_string(n - 1));
    }
    if (spec.axis_x == spec.axis_y) throw BadAxes("axes must be distinct");
    if (!(spec.scale > 0) || !(spec.stroke > 0)) throw BadAxes("scale and stroke must be positive");
    if (spec.palette.empty()) throw BadAxes("empty palette");
}

std::string render_svg(const PackingDocument& doc, const RenderSpec& spec) {
    const std::size_t n = doc.window.dimension();
    validate(spec, n);
    const auto& ds = doc.order.ds;
    const bool side = spec.axis_y == RenderSpec::height;

    struct Disc {
        double x, y, r;
        const Rational* curvature;
    };
    std::vector<Disc> discs;
    std::map<Rational, std::size_t> rank;
    for (const auto& s : doc.spheres) {
        if (s.is_plane()) continue;
        auto t = s.tangency.point().vector_coords();
        bool on_slice = true;
        if (spec.slice) {
            for (int j = 0; j < static_cast<int>(n); ++j) {
                if (j != spec.axis_x && j != spec.axis_y && t[j] != *spec.slice) on_slice = false;
            }
        }
        if (!on_slice) continue;
        const double r = 1.0 / s.curvature.to_double();
        const double x = t[spec.axis_x].to_double() * embed_scale(ds, spec.axis_x);
        const double y = side ? r : t[spec.axis_y].to_double() * embed_scale(ds, spec.axis_y);
        discs.push_back({x, y, r, &s.curvature});
        rank.emplace(s.curvature, 0);
    }
    std::size_t k = 0;
    for (auto& [c, idx] : rank) idx = k++;

    const auto& bx = doc.window.bounds[spec.axis_x];
    double x0 = bx.first.to_double() * embed_scale(ds, spec.axis_x);
    double x1 = bx.second.to_double() * embed_scale(ds, spec.axis_x);
    double y0 = 0.0;
    double y1 = 0.5;
    if (!side) {
        const auto& by = doc.window.bounds[spec.axis_y];
        y0 = by.first.to_double() * embed_scale(ds, spec.axis_y);
        y1 = by.second.to_double() * embed_scale(ds, spec.axis_y);
    }
    double max_r = 0.0;
    for (const auto& d : discs) max_r = std::max(max_r, d.r);
    const double pad = max_r;
    const double vx0 = x0 - pad;
    const double vx1 = x1 + pad;
    const double vy0 = side ? 0.0 : y0 - pad;
    const double vy1 = side ? std::max(y1, 2 * max_r) : y1 + pad;
    const double margin = 10.0;
    const double width = (vx1 - vx0) * spec.scale + 2 * margin;
    const double height_px = (vy1 - vy0) * spec.scale + 2 * margin;
    auto px = [&](double x) { return (x - vx0) * spec.scale + margin; };
    auto py = [&](double y) { return (vy1 - y) * spec.scale + margin; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height_px)
        << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height_px) << "\">\n";
    out << "<title>" << doc.order.name << " " << doc.window.to_string() << " curvature &lt;= "
        << doc.max_curvature.to_compact_string() << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (spec.include_plane) {
        if (side) {
            out << "<line class=\"plane\" x1=\"" << fmt(px(vx0)) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(px(vx1))
                << "\" y2=\"" << fmt(py(0)) << "\" stroke=\"black\" stroke-width=\"" << fmt(spec.stroke) << "\"/>\n";
        } else {
            out << "<rect class=\"plane\" x=\"" << fmt(px(x0)) << "\" y=\"" << fmt(py(y1)) << "\" width=\""
                << fmt((x1 - x0) * spec.scale) << "\" height=\"" << fmt((y1 - y0) * spec.scale)
                << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\" stroke-width=\"" << fmt(spec.stroke)
                << "\"/>\n";
        }
    }
    for (const auto& d : discs) {
        const auto& colour = spec.palette[rank.at(*d.curvature) % spec.palette.size()];
        out << "<circle cx=\"" << fmt(px(d.x)) << "\" cy=\"" << fmt(py(d.y)) << "\" r=\"" << fmt(d.r * spec.scale)
            << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << fmt(spec.stroke)
            << "\" data-curvature=\"" << d.curvature->to_compact_string() << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace ford
