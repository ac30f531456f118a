#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace testsupport;

namespace {

// Brute force over 1/2/5 x 10^k.
double nice_oracle(double v)
{
    double best = INFINITY;
    for (int k = -6; k <= 12; ++k)
        for (double m : {1.0, 2.0, 5.0}) {
            double c = m * std::pow(10.0, k);
            if (c >= v * (1 - 1e-12))
                best = std::min(best, c);
        }
    return best;
}

std::size_t count_shape(const SceneGraph& s, MarkShape shape)
{
    return static_cast<std::size_t>(
        std::count_if(s.marks.begin(), s.marks.end(), [&](const Mark& m) { return m.shape == shape; }));
}

ChartDocument fixture_side(const std::string& name, bool target)
{
    ChartPair p = load_fixture(name);
    return target ? p.target : p.source;
}

} // namespace

TEST_SUITE("layout")
{
    TEST_CASE("nice_ceil matches brute force")
    {
        for (double v : {0.003, 0.7, 1.0, 1.01, 3.3, 7.0, 9.99, 10.0, 42.0, 51.0, 199.0, 12345.0})
            CHECK(nice_ceil(v) == doctest::Approx(nice_oracle(v)));
    }

    TEST_CASE("value domain is zero based and nice")
    {
        ChartDocument d = fixture_side("fig7b_sort", false);
        ChartTree t = build_tree(d.table, d.chart);
        ValueDomain v = value_domain(t);
        CHECK(v.min == 0);
        double top = 0;
        for (const auto& n : t.root.children)
            top = std::max(top, *n.children[0].value);
        CHECK(v.max == doctest::Approx(nice_oracle(top)));
    }

    TEST_CASE("one bar per leaf inside the plot area")
    {
        ChartDocument d = fixture_side("fig5_composition", false);
        ChartTree t = build_tree(d.table, d.chart);
        SceneGraph s = layout_chart(t, d.chart);
        CHECK(count_shape(s, MarkShape::Bar) == tree_records(t).size());
        Canvas c;
        for (const auto& m : s.marks)
            for (const auto& p : rect_corners(m.glyph)) {
                CHECK(p.x >= c.plot_x0() - 1e-6);
                CHECK(p.x <= c.plot_x1() + 1e-6);
                CHECK(p.y >= c.plot_y0() - 1e-6);
                CHECK(p.y <= c.plot_y1() + 1e-6);
            }
    }

    TEST_CASE("bar lengths are proportional to values")
    {
        ChartDocument d = fixture_side("fig7b_sort", false);
        REQUIRE(d.chart.type == ChartType::BarH);
        ChartTree t = build_tree(d.table, d.chart);
        SceneGraph s = layout_chart(t, d.chart);
        ValueDomain v = value_domain(t);
        Canvas c;
        for (const auto& m : s.marks)
            CHECK(m.glyph.len == doctest::Approx(m.value / v.max * c.plot_width()));
    }

    TEST_CASE("pie sweeps are value shares of a full turn")
    {
        ChartPair p = load_fixture("fig7d2_barv_to_barh");
        ChartDocument d = p.source;
        d.chart.type = ChartType::Pie;
        d.chart.legendDimension.reset();
        d.chart.measures.resize(1);
        REQUIRE(validate_spec(d.table, d.chart).empty());
        ChartTree t = build_tree(d.table, d.chart);
        SceneGraph s = layout_chart(t, d.chart);
        double total = 0, sweeps = 0;
        for (const auto& m : s.marks)
            total += m.value;
        for (const auto& m : s.marks) {
            REQUIRE(is_sector(m.glyph));
            double sw = std::abs(to_sector(m.glyph).sweep);
            CHECK(sw == doctest::Approx(2 * kPi * m.value / total));
            sweeps += sw;
        }
        CHECK(sweeps == doctest::Approx(2 * kPi));
    }

    TEST_CASE("scatter raw values become points, lines one polyline per series")
    {
        ChartDocument sc = fixture_side("scatter_raw_to_bar", false);
        SceneGraph s = layout_chart(build_tree(sc.table, sc.chart), sc.chart);
        CHECK(count_shape(s, MarkShape::Point) == sc.table.rows.size());
        ChartDocument ln = fixture_side("line_series_removal", false);
        ChartTree lt = build_tree(ln.table, ln.chart);
        SceneGraph l = layout_chart(lt, ln.chart);
        CHECK(count_shape(l, MarkShape::Polyline) == legend_labels(lt, ChartType::Line).size());
    }

    TEST_CASE("hidden axes drop their chrome")
    {
        ChartDocument d = fixture_side("fig7b_sort", false);
        ChartTree t = build_tree(d.table, d.chart);
        SceneGraph shown = layout_chart(t, d.chart);
        d.chart.showXAxis = false;
        d.chart.showYAxis = false;
        SceneGraph hidden = layout_chart(t, d.chart);
        CHECK(hidden.chrome.size() < shown.chrome.size());
        CHECK(hidden.marks == shown.marks);
    }

    TEST_CASE("mark ids encode the tree path")
    {
        CHECK(mark_id({{"Year", "2018"}, {"Brand", "BMW"}, {"#measure", "Sales"}}) == "Year=2018|Brand=BMW|#measure=Sales");
    }

    TEST_CASE("layout is deterministic")
    {
        ChartDocument d = fixture_side("fig7e_drilldown", true);
        ChartTree t = build_tree(d.table, d.chart);
        CHECK(render_svg(layout_chart(t, d.chart)) == render_svg(layout_chart(t, d.chart)));
    }

    TEST_CASE("every accepted random spec lays out")
    {
        std::mt19937 rng(5);
        for (int i = 0; i < 300; ++i) {
            ChartPair p = random_pair(rng);
            for (const ChartDocument* d : {&p.source, &p.target}) {
                CAPTURE(serialize_document(*d));
                SceneGraph s;
                CHECK_NOTHROW(s = layout_chart(build_tree(d->table, d->chart), d->chart));
                CHECK_FALSE(s.marks.empty());
                for (const auto& m : s.marks)
                    if (is_sector(m.glyph))
                        CHECK(to_sector(m.glyph).sweep >= 0);
            }
        }
    }
}

