#include "support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

// Independent aggregation of the fixture rows for one x label.
double column_sum(const DataTable& t, const std::string& dim, const std::string& label, const std::string& measure)
{
    std::size_t di = 0, mi = 0;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i].name == dim)
            di = i;
        if (t.columns[i].name == measure)
            mi = i;
    }
    double s = 0;
    for (const auto& row : t.rows)
        if (cell_label(row[di]) == label)
            s += std::get<double>(row[mi]);
    return s;
}

} // namespace

TEST_SUITE("tree")
{
    TEST_CASE("levels are x, legend, then measure")
    {
        ChartPair p = load_fixture("fig5_composition");
        ChartTree t = build_tree(p.target.table, p.target.chart);
        std::vector<std::string> cols;
        for (const auto& l : t.levels)
            cols.push_back(l.column);
        std::vector<std::string> want = p.target.chart.dimensions();
        want.push_back(kMeasureColumn);
        CHECK(cols == want);
    }

    TEST_CASE("sum leaves match a direct row scan")
    {
        ChartPair p = load_fixture("fig7b_sort");
        ChartTree t = build_tree(p.source.table, p.source.chart);
        REQUIRE(t.depth() == 2);
        const std::string& m = p.source.chart.measures[0].column;
        for (const auto& n : t.root.children) {
            REQUIRE(n.children.size() == 1);
            CHECK(*n.children[0].value == doctest::Approx(column_sum(p.source.table, *p.source.chart.xDimension, n.label, m)));
        }
    }

    TEST_CASE("raw scatter keeps one leaf per row")
    {
        ChartPair p = load_fixture("scatter_raw_to_bar");
        ChartTree t = build_tree(p.source.table, p.source.chart);
        CHECK(t.has_raw());
        std::size_t leaves = 0;
        std::function<void(const Node&)> walk = [&](const Node& n) {
            if (n.children.empty())
                ++leaves;
            for (const auto& c : n.children)
                walk(c);
        };
        walk(t.root);
        CHECK(leaves == p.source.table.rows.size() * p.source.chart.measures.size());
    }

    TEST_CASE("avg combine is weighted")
    {
        CHECK(combine_values(Aggregate::Avg, 2, 1, 5, 2) == doctest::Approx(4));
        CHECK(combine_values(Aggregate::Sum, 2, 1, 5, 2) == doctest::Approx(7));
        CHECK(combine_values(Aggregate::Count, 2, 1, 5, 2) == doctest::Approx(7));
    }

    TEST_CASE("tree_equal ignores tiny float noise and sees real changes")
    {
        ChartPair p = load_fixture("fig7c_timestep");
        ChartTree a = build_tree(p.source.table, p.source.chart);
        ChartTree b = a;
        CHECK(tree_equal(a, b));
        *b.root.children[0].children[0].value *= 1 + 1e-12;
        CHECK(tree_equal(a, b));
        *b.root.children[0].children[0].value += 1;
        CHECK_FALSE(tree_equal(a, b));
    }

    TEST_CASE("records regroup to the same tree")
    {
        ChartPair p = load_fixture("fig5_composition");
        ChartTree t = build_tree(p.source.table, p.source.chart);
        ChartTree again = group_records(tree_records(t), t.levels, t.measures);
        CHECK(tree_equal(t, again));
    }

    TEST_CASE("dump is stable")
    {
        ChartPair p = load_fixture("fig7a_filter");
        ChartTree t = build_tree(p.source.table, p.source.chart);
        CHECK(dump_tree(t) == dump_tree(build_tree(p.source.table, p.source.chart)));
        CHECK(dump_tree(t).find("measure:Sales") != std::string::npos);
    }
}
