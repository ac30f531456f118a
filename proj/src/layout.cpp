#include "chartmorph/layout.hpp"
#include "chartmorph/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace chartmorph {

double nice_ceil(double value)
{
    if (!(value > 0))
        return 0;
    double base = std::pow(10.0, std::floor(std::log10(value)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * base >= value * (1 - 1e-12))
            return m * base;
    return 10 * base;
}

namespace {

struct Leaf {
    Record record;
    std::string category; // top dimension label, "" without dimensions
    std::string slot;
    std::string measure;
};

std::vector<Leaf> leaves_of(const ChartTree& tree)
{
    std::vector<Record> records = tree_records(tree);
    std::set<std::string> measures;
    for (const auto& r : records)
        if (const std::string* m = r.coord(kMeasureColumn))
            measures.insert(*m);
    std::vector<std::string> dims = tree.dimensions();
    std::vector<Leaf> out;
    for (auto& r : records) {
        Leaf leaf;
        if (!dims.empty())
            leaf.category = *r.coord(dims[0]);
        std::vector<std::string> parts;
        for (std::size_t i = 1; i < dims.size(); ++i)
            parts.push_back(*r.coord(dims[i]));
        if (const std::string* m = r.coord(kMeasureColumn))
            leaf.measure = *m;
        if (measures.size() >= 2)
            parts.push_back(leaf.measure);
        for (std::size_t i = 0; i < parts.size(); ++i)
            leaf.slot += (i ? "|" : "") + parts[i];
        leaf.record = std::move(r);
        out.push_back(std::move(leaf));
    }
    return out;
}

std::size_t index_of(const std::vector<std::string>& v, const std::string& s)
{
    auto it = std::find(v.begin(), v.end(), s);
    return it == v.end() ? 0 : static_cast<std::size_t>(it - v.begin());
}

void push_unique(std::vector<std::string>& v, const std::string& s)
{
    if (std::find(v.begin(), v.end(), s) == v.end())
        v.push_back(s);
}

} // namespace

CategoryDomain category_domain(const ChartTree& tree)
{
    CategoryDomain d;
    for (const auto& leaf : leaves_of(tree)) {
        if (tree.dimension_count() > 0)
            push_unique(d.labels, leaf.category);
        push_unique(d.slots, leaf.slot);
    }
    return d;
}

ValueDomain value_domain(const ChartTree& tree)
{
    double lo = 0, hi = 0;
    for (const auto& r : tree_records(tree)) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    ValueDomain d;
    d.max = hi > 0 ? nice_ceil(hi) : 0;
    d.min = lo < 0 ? -nice_ceil(-lo) : 0;
    if (d.max == d.min)
        d.max = d.min + 1;
    return d;
}

std::vector<std::string> legend_labels(const ChartTree& tree, ChartType type)
{
    std::vector<std::string> out;
    std::vector<std::string> dims = tree.dimensions();
    std::vector<Leaf> leaves = leaves_of(tree);
    if (dims.size() >= 2) {
        for (const auto& l : leaves)
            push_unique(out, l.slot.substr(0, l.slot.find('|')));
        return out;
    }
    if (type == ChartType::Pie && dims.size() == 1) {
        for (const auto& l : leaves)
            push_unique(out, l.category);
        return out;
    }
    for (const auto& l : leaves)
        push_unique(out, l.measure);
    if (out.size() < 2)
        out.clear();
    return out;
}

Json axis_domain(const ChartTree& tree, const ChartSpec& /*spec*/, Axis axis)
{
    if (axis == Axis::X) {
        CategoryDomain d = category_domain(tree);
        return Json{{"labels", d.labels}, {"slots", d.slots}};
    }
    ValueDomain d = value_domain(tree);
    return Json{{"min", d.min}, {"max", d.max}};
}

std::string mark_id(const std::vector<std::pair<std::string, std::string>>& path)
{
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i)
            out += '|';
        out += path[i].first + "=" + path[i].second;
    }
    return out;
}

ChartSpec spec_for_tree(const ChartTree& tree, const ChartSpec& display)
{
    ChartSpec s = display;
    std::vector<std::string> dims = tree.dimensions();
    s.xDimension.reset();
    s.legendDimension.reset();
    if (!dims.empty())
        s.xDimension = dims[0];
    if (dims.size() >= 2)
        s.legendDimension = dims[1];
    s.measures = tree.measures;
    return s;
}

namespace {

std::vector<double> value_ticks(const ValueDomain& d)
{
    double step = nice_ceil((d.max - d.min) / 5);
    std::vector<double> ticks;
    if (!(step > 0))
        return ticks;
    for (double v = d.min; v <= d.max + step * 1e-9; v += step)
        ticks.push_back(std::abs(v) < step * 1e-9 ? 0 : v);
    return ticks;
}

ChromeItem text_item(std::string id, std::string text, double x, double y, std::string anchor, double size = 11)
{
    ChromeItem c;
    c.id = std::move(id);
    c.kind = ChromeKind::Text;
    c.text = std::move(text);
    c.x = x;
    c.y = y;
    c.anchor = std::move(anchor);
    c.fontSize = size;
    return c;
}

ChromeItem rule_item(std::string id, double x, double y, double x2, double y2)
{
    ChromeItem c;
    c.id = std::move(id);
    c.kind = ChromeKind::Rule;
    c.x = x;
    c.y = y;
    c.x2 = x2;
    c.y2 = y2;
    return c;
}

} // namespace

SceneGraph layout_chart(const ChartTree& tree, const ChartSpec& spec, const Canvas& canvas,
                        const LayoutOptions& options)
{
    SceneGraph scene;
    scene.width = canvas.width;
    scene.height = canvas.height;

    std::vector<Leaf> leaves = leaves_of(tree);
    CategoryDomain cats = category_domain(tree);
    if (cats.labels.empty())
        cats.labels.push_back("");
    ValueDomain vd = value_domain(tree);
    std::vector<std::string> legend = legend_labels(tree, spec.type);
    std::vector<std::string> dims = tree.dimensions();

    auto color_of = [&](const Leaf& leaf) {
        if (legend.empty())
            return palette_color(0);
        std::string key = dims.size() >= 2                                ? leaf.slot.substr(0, leaf.slot.find('|'))
                          : spec.type == ChartType::Pie && dims.size() == 1 ? leaf.category
                                                                            : leaf.measure;
        return palette_color(index_of(legend, key));
    };

    const double px0 = canvas.plot_x0(), px1 = canvas.plot_x1();
    const double py0 = canvas.plot_y0(), py1 = canvas.plot_y1();
    const bool horizontal = spec.type == ChartType::BarH;
    const double catStart = horizontal ? py0 : px0;
    const double catRange = horizontal ? canvas.plot_height() : canvas.plot_width();
    const double step = catRange / static_cast<double>(cats.labels.size());
    const double pad = spec.type == ChartType::BarV || spec.type == ChartType::BarH ? options.bandPadding : 0;
    const double inner = step * (1 - pad);
    const double slotWidth = inner / static_cast<double>(std::max<std::size_t>(1, cats.slots.size()));

    auto value_pos = [&](double v) {
        double f = (v - vd.min) / (vd.max - vd.min);
        return horizontal ? px0 + f * canvas.plot_width() : py1 - f * canvas.plot_height();
    };
    auto band_center = [&](const std::string& cat) {
        return catStart + step * (static_cast<double>(index_of(cats.labels, cat)) + 0.5);
    };

    switch (spec.type) {
    case ChartType::BarV:
    case ChartType::BarH: {
        for (const auto& leaf : leaves) {
            double c0 = catStart + step * static_cast<double>(index_of(cats.labels, leaf.category)) + step * pad / 2 +
                        slotWidth * static_cast<double>(index_of(cats.slots, leaf.slot));
            double base = value_pos(0), end = value_pos(leaf.record.value);
            Mark m;
            m.id = mark_id(leaf.record.coords);
            m.path = leaf.record.coords;
            m.value = leaf.record.value;
            m.shape = MarkShape::Bar;
            if (horizontal)
                m.glyph = {base, c0 + slotWidth / 2, end >= base ? 0.0 : kPi, 0, std::abs(end - base), slotWidth};
            else
                m.glyph = {c0 + slotWidth / 2, base, end <= base ? -kPi / 2 : kPi / 2, 0, std::abs(end - base),
                           slotWidth};
            m.fill = color_of(leaf);
            scene.marks.push_back(std::move(m));
        }
        break;
    }
    case ChartType::Line:
    case ChartType::Scatter: {
        const double radius = spec.type == ChartType::Line ? 3.5 : 4.5;
        std::map<std::string, Mark> series;
        std::vector<std::string> seriesOrder;
        for (const auto& leaf : leaves) {
            Point2 p{band_center(leaf.category), value_pos(leaf.record.value)};
            Mark m;
            m.id = mark_id(leaf.record.coords);
            m.path = leaf.record.coords;
            m.value = leaf.record.value;
            m.shape = MarkShape::Point;
            m.glyph = point_glyph(p, radius);
            m.fill = color_of(leaf);
            scene.marks.push_back(m);
            if (spec.type == ChartType::Line && !tree.has_raw()) {
                auto [it, inserted] = series.try_emplace(leaf.slot);
                if (inserted) {
                    seriesOrder.push_back(leaf.slot);
                    it->second.id = "series:" + leaf.slot;
                    it->second.shape = MarkShape::Polyline;
                    it->second.fill = m.fill;
                }
                it->second.vertices.push_back(p);
            }
        }
        for (const auto& key : seriesOrder)
            scene.marks.push_back(series[key]);
        break;
    }
    case ChartType::Pie: {
        const double radius = 0.45 * std::min(canvas.plot_width(), canvas.plot_height());
        const Point2 center{(px0 + px1) / 2, (py0 + py1) / 2};
        double total = 0;
        for (const auto& leaf : leaves) {
            if (leaf.record.value < 0 && options.strict)
                throw ChartError(ErrorCode::NegativeValueInPie,
                                 "negative value at " + mark_id(leaf.record.coords) + " in a pie chart");
            total += std::max(0.0, leaf.record.value);
        }
        double angle = -kPi / 2;
        for (const auto& leaf : leaves) {
            double sweep = total > 0 ? std::max(0.0, leaf.record.value) / total * 2 * kPi : 0;
            Mark m;
            m.id = mark_id(leaf.record.coords);
            m.path = leaf.record.coords;
            m.value = leaf.record.value;
            m.shape = MarkShape::Arc;
            m.glyph = sector_glyph(center, 0, radius, angle, angle + sweep);
            m.fill = color_of(leaf);
            scene.marks.push_back(std::move(m));
            angle += sweep;
        }
        break;
    }
    }

    if (spec.type != ChartType::Pie) {
        std::vector<double> ticks = value_ticks(vd);
        // Horizontal axis
        if (spec.showXAxis) {
            scene.chrome.push_back(rule_item("axis-x:line", px0, py1, px1, py1));
            if (horizontal) {
                for (double t : ticks)
                    scene.chrome.push_back(
                        text_item("axis-x:tick:" + format_number(t), format_number(t), value_pos(t), py1 + 16, "middle"));
            } else {
                for (const auto& c : cats.labels)
                    scene.chrome.push_back(text_item("axis-x:label:" + c, c, band_center(c), py1 + 16, "middle"));
            }
        }
        if (spec.showYAxis) {
            scene.chrome.push_back(rule_item("axis-y:line", px0, py0, px0, py1));
            if (horizontal) {
                for (const auto& c : cats.labels)
                    scene.chrome.push_back(text_item("axis-y:label:" + c, c, px0 - 6, band_center(c) + 4, "end"));
            } else {
                for (double t : ticks)
                    scene.chrome.push_back(
                        text_item("axis-y:tick:" + format_number(t), format_number(t), px0 - 6, value_pos(t) + 4, "end"));
            }
        }
    }

    if (spec.showLegend && !legend.empty()) {
        double x = px0;
        for (std::size_t i = 0; i < legend.size(); ++i) {
            ChromeItem swatch = rule_item("legend:swatch:" + legend[i], x, 36, x + 10, 36);
            swatch.strokeWidth = 10;
            swatch.fill = palette_color(i);
            scene.chrome.push_back(swatch);
            scene.chrome.push_back(text_item("legend:label:" + legend[i], legend[i], x + 14, 40, "start", 10));
            x += 24 + 6.0 * static_cast<double>(legend[i].size());
        }
    }
    if (!spec.title.empty())
        scene.chrome.push_back(text_item("title:" + spec.title, spec.title, canvas.width / 2, 22, "middle", 14));
    return scene;
}

} // namespace chartmorph
