#include "support.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace testsupport {

std::string fixtures_dir()
{
    return FIXTURES_DIR;
}

std::vector<std::string> fixture_names()
{
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(fixtures_dir()))
        if (e.is_directory())
            names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ChartPair load_fixture(const std::string& name)
{
    const std::string dir = fixtures_dir() + "/" + name + "/";
    return parse_chart_pair(read_text(dir + "source.json"), read_text(dir + "target.json"));
}

Json fixture_request(const std::string& name, const Json& config)
{
    const std::string dir = fixtures_dir() + "/" + name + "/";
    return Json{{"source", Json::parse(read_text(dir + "source.json"))},
                {"target", Json::parse(read_text(dir + "target.json"))},
                {"config", config}};
}

PlanBundle plan_fixture(const std::string& name, const PlanConfig& config)
{
    return build_plan(load_fixture(name), config);
}

namespace {

const std::vector<std::vector<std::string>> kLabels = {
    {"A", "B", "C", "A1", "A2", "B1"},
    {"x", "y", "z", "w", "v", "u"},
    {"p", "q", "r", "s"},
};

int pick(std::mt19937& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

DataTable random_table(std::mt19937& rng, std::size_t labelCap)
{
    DataTable t;
    for (int d = 0; d < 3; ++d)
        t.columns.push_back({"D" + std::to_string(d), ColumnRole::Dimension, ValueType::Categorical, std::nullopt});
    for (int m = 0; m < 2; ++m)
        t.columns.push_back({"M" + std::to_string(m), ColumnRole::Measure, ValueType::Numeric, std::nullopt});
    const int rows = pick(rng, 2, 24);
    for (int r = 0; r < rows; ++r) {
        std::vector<Cell> row;
        for (const auto& labels : kLabels) {
            std::size_t cap = std::min(labelCap, labels.size());
            row.emplace_back(labels[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(cap) - 1))]);
        }
        row.emplace_back(static_cast<double>(pick(rng, 1, 50)));
        row.emplace_back(static_cast<double>(pick(rng, 1, 50)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

DataTable mutate(std::mt19937& rng, DataTable t)
{
    switch (pick(rng, 0, 4)) {
    case 0: // same data
        break;
    case 1: // filter rows
        std::erase_if(t.rows, [&](const auto&) { return pick(rng, 0, 3) == 0; });
        break;
    case 2: { // new values
        for (auto& row : t.rows)
            if (pick(rng, 0, 2) == 0)
                row[3] = static_cast<double>(pick(rng, 1, 80));
        break;
    }
    case 3: // fresh table
        return random_table(rng, static_cast<std::size_t>(pick(rng, 2, 6)));
    default: { // relabel into prefix groups
        for (auto& row : t.rows) {
            auto& label = std::get<std::string>(row[0]);
            if (label.size() == 2)
                label = label.substr(0, 1);
        }
        break;
    }
    }
    if (t.rows.empty())
        t = random_table(rng, 3);
    return t;
}

ChartSpec random_spec(std::mt19937& rng)
{
    ChartSpec s;
    s.type = kAllChartTypes[pick(rng, 0, 4)];
    const int dims = s.type == ChartType::Pie ? 1 : s.type == ChartType::Line ? pick(rng, 1, 2) : pick(rng, 0, 2);
    std::vector<std::string> pool = {"D0", "D1", "D2"};
    std::shuffle(pool.begin(), pool.end(), rng);
    if (s.type == ChartType::Pie) {
        (pick(rng, 0, 1) ? s.xDimension : s.legendDimension) = pool[0];
    } else {
        if (dims >= 1)
            s.xDimension = pool[0];
        if (dims >= 2)
            s.legendDimension = pool[1];
    }
    const int measures = s.type == ChartType::Pie ? 1 : pick(rng, 1, 2);
    const bool raw = s.type == ChartType::Scatter && pick(rng, 0, 1) == 0;
    std::vector<std::string> ms = {"M0", "M1"};
    std::shuffle(ms.begin(), ms.end(), rng);
    for (int i = 0; i < measures; ++i) {
        Aggregate agg = raw ? Aggregate::None : std::array{Aggregate::Sum, Aggregate::Avg, Aggregate::Count}[static_cast<std::size_t>(pick(rng, 0, 2))];
        s.measures.push_back({ms[static_cast<std::size_t>(i)], agg});
    }
    switch (pick(rng, 0, 3)) {
    case 1: s.sortOrder = SortOrder{SortBy::Measure, false}; break;
    case 2: s.sortOrder = SortOrder{SortBy::Measure, true}; break;
    case 3: s.sortOrder = SortOrder{SortBy::Label, pick(rng, 0, 1) == 1}; break;
    default: break;
    }
    s.showXAxis = pick(rng, 0, 4) != 0;
    s.showLegend = pick(rng, 0, 4) != 0;
    return s;
}

ChartDocument random_document(std::mt19937& rng, const DataTable& table)
{
    for (;;) {
        ChartDocument d{table, random_spec(rng)};
        if (validate_spec(d.table, d.chart).empty())
            return d;
    }
}

std::size_t widest(const Node& n)
{
    std::size_t m = n.children.size();
    for (const auto& c : n.children)
        m = std::max(m, widest(c));
    return m;
}

bool within_bounds(const ChartDocument& d)
{
    ChartTree t = build_tree(d.table, d.chart);
    return t.depth() <= 4 && widest(t.root) <= 6;
}

ChartPair random_pair_unbounded(std::mt19937& rng)
{
    DataTable a = random_table(rng, static_cast<std::size_t>(pick(rng, 2, 6)));
    DataTable b = mutate(rng, a);
    ChartPair p;
    p.source = random_document(rng, a);
    // Keep the encoding half of the time so the pair exercises item edits.
    if (pick(rng, 0, 1) == 0) {
        p.target = {b, p.source.chart};
        if (!validate_spec(p.target.table, p.target.chart).empty())
            p.target = random_document(rng, b);
    } else {
        p.target = random_document(rng, b);
    }
    return p;
}

} // namespace

ChartPair random_pair(std::mt19937& rng)
{
    for (;;) {
        ChartPair p = random_pair_unbounded(rng);
        if (within_bounds(p.source) && within_bounds(p.target))
            return p;
    }
}

std::vector<UnitKind> data_kinds(const TransitionPlan& plan)
{
    std::vector<UnitKind> out;
    for (const auto& u : plan.units)
        if (is_data_change(u.kind))
            out.push_back(u.kind);
    return out;
}

std::vector<std::string> stage_kinds(const Stage& stage)
{
    std::vector<std::string> out;
    for (UnitKind k : stage.kinds)
        out.emplace_back(to_string(k));
    return out;
}

TransitionUnit make_unit(const std::string& id, UnitKind kind)
{
    TransitionUnit u;
    u.id = id;
    u.kind = kind;
    return u;
}

} // namespace testsupport
