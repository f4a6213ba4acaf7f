#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ford/document.hpp"

namespace ford {

struct RenderSpec {
    static constexpr int height = -1;

    /// Boundary coordinate indices; the second may be RenderSpec::height for a
    /// side view with circles standing on the line.
    int axis_x = 0;
    int axis_y = 1;
    double scale = 400.0;
    double stroke = 0.75;
    bool include_plane = true;
    /// Remaining coordinates must equal this value; nullopt draws the full shadow.
    std::optional<Rational> slice = Rational(0);
    /// Stroke colours by curvature rank (smallest curvature first), cycled.
    std::vector<std::string> palette{"#1b4f72", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#2e86c1", "#566573"};

    /// Axes "i,j" with j allowed to be "h"; the side view for one-dimensional packings.
    static RenderSpec defaults_for(std::size_t dimension);
    void set_axes(const std::string& text);
};

/// Throws BadAxes unless the axes are distinct and inside the boundary dimension.
void validate(const RenderSpec& spec, std::size_t dimension);

/// Deterministic SVG: one circle per drawn sphere in document order.
std::string render_svg(const PackingDocument& doc, const RenderSpec& spec);

}  // namespace ford
