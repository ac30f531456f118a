#ifndef CHARTMORPH_LAYOUT_HPP
#define CHARTMORPH_LAYOUT_HPP

#include "chartmorph/geometry.hpp"
#include "chartmorph/tree.hpp"

#include <string>
#include <vector>

namespace chartmorph {

struct Canvas {
    double width = 640;
    double height = 400;
    double top = 48;
    double right = 24;
    double bottom = 40;
    double left = 56;

    double plot_x0() const { return left; }
    double plot_x1() const { return width - right; }
    double plot_y0() const { return top; }
    double plot_y1() const { return height - bottom; }
    double plot_width() const { return plot_x1() - plot_x0(); }
    double plot_height() const { return plot_y1() - plot_y0(); }

    bool operator==(const Canvas&) const = default;
};

// Ordered labels of the top dimension plus the cluster slot keys (legend
// label and/or measure name) that subdivide each band.
struct CategoryDomain {
    std::vector<std::string> labels;
    std::vector<std::string> slots;
    bool operator==(const CategoryDomain&) const = default;
};

struct ValueDomain {
    double min = 0;
    double max = 1;
    bool operator==(const ValueDomain&) const = default;
};

// Smallest 1/2/5 x 10^k not below `value` (value > 0).
double nice_ceil(double value);

CategoryDomain category_domain(const ChartTree& tree);
// Zero-based extent rounded outward with nice_ceil.
ValueDomain value_domain(const ChartTree& tree);
std::vector<std::string> legend_labels(const ChartTree& tree, ChartType type);

enum class Axis { X, Y };

// X is the category axis and Y the value axis, whatever the orientation.
Json axis_domain(const ChartTree& tree, const ChartSpec& spec, Axis axis);

struct LayoutOptions {
    double bandPadding = 0.2;
    // Intermediate scenes clamp negative pie values instead of failing.
    bool strict = true;
};

SceneGraph layout_chart(const ChartTree& tree, const ChartSpec& spec, const Canvas& canvas = {},
                        const LayoutOptions& options = {});

// Mark id for a tree path, e.g. "Year=2018|Brand=BMW|#measure=Sales".
std::string mark_id(const std::vector<std::pair<std::string, std::string>>& path);

// Display spec for a tree reached part-way through a transition.
ChartSpec spec_for_tree(const ChartTree& tree, const ChartSpec& display);

} // namespace chartmorph

#endif
